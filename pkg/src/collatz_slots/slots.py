"""Slot intervals, containment verdicts and cluster detection."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import groupby

from .errors import InvalidInputError, OrbitCapExceeded
from .levels import LevelSet
from .orbit import DEFAULT_CAP, level_and_kappa

DEFAULT_GAP_FACTOR = Fraction(5, 2)
GRID_NU_MAX = 30

BY_KAPPA = "by_kappa"
BY_GAP = "by_gap"


def _check_sigma0(sigma0: Fraction) -> Fraction:
    sigma0 = Fraction(sigma0)
    if not 0 < sigma0 <= 1:
        raise InvalidInputError(f"sigma0 must lie in (0, 1], got {sigma0}")
    return sigma0


@dataclass(frozen=True)
class Slot:
    nu: int
    kappa: int
    lower: Fraction
    upper: Fraction
    sigma0_used: Fraction

    def __contains__(self, x) -> bool:
        return self.lower <= x <= self.upper


def slot_bounds(nu: int, kappa: int, sigma0: Fraction) -> Slot:
    sigma0 = _check_sigma0(sigma0)
    if nu < 0 or kappa < 0:
        raise InvalidInputError(f"nu and kappa must be >= 0, got ({nu}, {kappa})")
    upper = Fraction(2**nu, 6**kappa)
    return Slot(nu, kappa, sigma0 * upper, upper, sigma0)


@dataclass(frozen=True)
class SlotEntry:
    n: int
    kappa: int
    ratio: Fraction
    in_slot: bool


@dataclass(frozen=True)
class SlotAssignment:
    nu: int
    sigma0_used: Fraction
    entries: tuple[SlotEntry, ...]

    @property
    def contained(self) -> bool:
        return all(e.in_slot for e in self.entries)

    @property
    def kappas(self) -> list[int]:
        return sorted({e.kappa for e in self.entries})

    def violations(self) -> list[SlotEntry]:
        return [e for e in self.entries if not e.in_slot]


def _kappa_of(n: int, nu: int, cap: int) -> int:
    try:
        level, kappa = level_and_kappa(n, cap)
    except OrbitCapExceeded as exc:
        raise AssertionError(f"level-set element {n} left the tree: {exc}") from exc
    if level != nu:
        raise AssertionError(f"element {n} has level {level}, expected {nu}")
    return kappa


def assign_and_verify(level: LevelSet, sigma0: Fraction, cap: int = DEFAULT_CAP) -> SlotAssignment:
    sigma0 = _check_sigma0(sigma0)
    scale = 2**level.nu
    entries = []
    for n in level.elements:
        kappa = _kappa_of(n, level.nu, cap)
        ratio = Fraction(n * 6**kappa, scale)
        if ratio > 1:
            raise AssertionError(f"upper slot bound violated by {n} at level {level.nu}")
        entries.append(SlotEntry(n, kappa, ratio, sigma0 <= ratio))
    return SlotAssignment(level.nu, sigma0, tuple(entries))


@dataclass(frozen=True)
class SlotConditions:
    sigma0: Fraction
    disjoint: bool
    separated: bool
    grid_nu_max: int
    grid_ok: bool


def check_slot_conditions(sigma0: Fraction, grid_nu_max: int = GRID_NU_MAX) -> SlotConditions:
    """Disjointness (``sigma0 > 1/6``) and separation (``sigma0 > 1/2``).

    Each verdict that holds is re-checked on the exact slot endpoints for
    every ``1 <= kappa <= nu <= grid_nu_max``.
    """
    sigma0 = _check_sigma0(sigma0)
    disjoint = sigma0 > Fraction(1, 6)
    separated = sigma0 > Fraction(1, 2)
    grid_ok = True
    if disjoint:
        for nu in range(grid_nu_max + 1):
            for kappa in range(1, nu + 1):
                hi = slot_bounds(nu, kappa, sigma0)
                lo = slot_bounds(nu, kappa - 1, sigma0)
                if not hi.upper < lo.lower:
                    grid_ok = False
                if separated and not hi.upper < lo.lower / 3:
                    grid_ok = False
    return SlotConditions(sigma0, disjoint, separated, grid_nu_max, grid_ok)


@dataclass(frozen=True)
class ClusterPartition:
    nu: int
    method: str
    clusters: tuple[tuple[int, ...], ...]
    factor: Fraction | None = None
    kappas: tuple[int, ...] | None = None
    interleaved: bool = False

    @property
    def sizes(self) -> list[int]:
        return [len(c) for c in self.clusters]

    def boundaries(self) -> list[int]:
        out, pos = [], 0
        for c in self.clusters:
            pos += len(c)
            out.append(pos)
        return out

    def elements(self) -> list[int]:
        return [e for c in self.clusters for e in c]


def clusters_by_kappa(level: LevelSet, cap: int = DEFAULT_CAP) -> ClusterPartition:
    tagged = [(_kappa_of(n, level.nu, cap), n) for n in level.elements]
    # Contiguity is checked, not assumed: in value order the kappa sequence
    # must be non-increasing.
    interleaved = any(a[0] < b[0] for a, b in zip(tagged, tagged[1:]))
    groups = []
    kappas = []
    for kappa, grp in groupby(sorted(tagged, key=lambda t: (-t[0], t[1])), key=lambda t: t[0]):
        kappas.append(kappa)
        groups.append(tuple(n for _, n in grp))
    return ClusterPartition(level.nu, BY_KAPPA, tuple(groups), None, tuple(kappas), interleaved)


def clusters_by_gap(level: LevelSet, factor: Fraction = DEFAULT_GAP_FACTOR) -> ClusterPartition:
    factor = Fraction(factor)
    if factor <= 1:
        raise InvalidInputError(f"gap factor must exceed 1, got {factor}")
    clusters: list[list[int]] = []
    prev = None
    for e in level.elements:
        if prev is None or e > factor * prev:
            clusters.append([])
        clusters[-1].append(e)
        prev = e
    return ClusterPartition(level.nu, BY_GAP, tuple(tuple(c) for c in clusters), factor)


@dataclass(frozen=True)
class PartitionComparison:
    equal: bool
    first_difference: int | None


def compare_partitions(a: ClusterPartition, b: ClusterPartition) -> PartitionComparison:
    if a.nu != b.nu or sorted(a.elements()) != sorted(b.elements()):
        raise InvalidInputError("partitions do not cover the same level set")
    # With identical underlying elements, equal blocks means equal boundaries.
    for i, (x, y) in enumerate(zip(a.clusters, b.clusters)):
        if x != y:
            return PartitionComparison(False, i)
    if len(a.clusters) != len(b.clusters):
        return PartitionComparison(False, min(len(a.clusters), len(b.clusters)))
    return PartitionComparison(True, None)
