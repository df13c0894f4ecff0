"""Running-minimum scans of orbit steadiness with resumable checkpoints.

Integer-range scans walk each trajectory in the log domain only until it
drops onto a value whose steadiness is already tabulated, and confirm every
potential new minimum with exact rational arithmetic.  The float path only
ever rejects candidates, so the reported minima are exact and do not depend
on how the range was split between workers.
"""

from __future__ import annotations

import math
from array import array
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from fractions import Fraction
from functools import lru_cache
from typing import Callable

from .errors import CheckpointError, EmptyDomainError, InvalidInputError
from .levels import iter_levels
from .orbit import DEFAULT_CAP, trajectory
from .steadiness import LITERAL, TELESCOPING, sigma

FORMAT_VERSION = 1
RANGE = "range"
LEVELS = "levels"
BOTH = "both"
SCAN_MODES = (LITERAL, TELESCOPING, BOTH)

# Float sums differ from the log of the exact value by ~1e-13 at most; anything
# within this margin of the current minimum is settled exactly.
_REJECT_MARGIN = 1e-9
_BASE_LIMIT = 1 << 16
_LN2 = math.log(2.0)
# Natural log of the factor 3/4 contributed by the cycle element 4.
_LN_F4 = math.log(0.75)


def modes_of(mode: str) -> tuple[str, ...]:
    if mode == BOTH:
        return (LITERAL, TELESCOPING)
    if mode in (LITERAL, TELESCOPING):
        return (mode,)
    raise InvalidInputError(f"unknown scan mode {mode!r}")


@dataclass(frozen=True)
class ScanDomain:
    kind: str
    lo: int
    hi: int

    def __post_init__(self):
        if self.kind not in (RANGE, LEVELS):
            raise InvalidInputError(f"unknown domain kind {self.kind!r}")
        if self.kind == RANGE and self.lo < 1:
            raise InvalidInputError(f"integer range must start at >= 1, got {self.lo}")
        if self.kind == LEVELS and self.lo < 0:
            raise InvalidInputError(f"level range must start at >= 0, got {self.lo}")

    @classmethod
    def integers(cls, lo: int, hi: int) -> "ScanDomain":
        return cls(RANGE, lo, hi)

    @classmethod
    def levels(cls, lo: int, hi: int) -> "ScanDomain":
        return cls(LEVELS, lo, hi)


@dataclass(frozen=True)
class ModeMinimum:
    mode: str
    exact: Fraction
    argmin: int
    log2_approx: float

    def beats(self, other: "ModeMinimum | None") -> bool:
        if other is None:
            return True
        return (self.exact, self.argmin) < (other.exact, other.argmin)


@dataclass(frozen=True)
class ScanCheckpoint:
    """Resumable state of a scan; ``cursor`` is the last fully processed index."""

    domain: ScanDomain
    mode: str
    cap: int
    cursor: int
    minima: dict = field(default_factory=dict)
    processed_count: int = 0
    skipped_cap_exceeded: tuple[int, ...] = ()
    format_version: int = FORMAT_VERSION

    @classmethod
    def start(cls, domain: ScanDomain, mode: str, cap: int = DEFAULT_CAP) -> "ScanCheckpoint":
        return cls(domain, mode, cap, domain.lo - 1, {m: None for m in modes_of(mode)})

    @property
    def complete(self) -> bool:
        return self.cursor >= self.domain.hi

    def minimum(self, mode: str = LITERAL) -> ModeMinimum | None:
        return self.minima.get(mode)

    def validate(self) -> None:
        if self.format_version != FORMAT_VERSION:
            raise CheckpointError(f"unsupported checkpoint version {self.format_version}")
        if not isinstance(self.cursor, int) or not self.domain.lo - 1 <= self.cursor <= self.domain.hi:
            raise CheckpointError(f"cursor {self.cursor!r} outside domain {self.domain}")
        if set(self.minima) != set(modes_of(self.mode)):
            raise CheckpointError(f"minima {sorted(self.minima)} do not match mode {self.mode}")
        if self.processed_count < 0 or self.cap < 1:
            raise CheckpointError("negative processed_count or invalid cap")
        for m in self.minima.values():
            if m is not None and not (0 < m.exact <= 1):
                raise CheckpointError(f"minimum {m.exact} outside (0, 1]")


def _better(a: ModeMinimum | None, b: ModeMinimum | None) -> ModeMinimum | None:
    if a is None:
        return b
    if b is None:
        return a
    return b if b.beats(a) else a


def _absorb(cp: ScanCheckpoint, part: ScanCheckpoint) -> ScanCheckpoint:
    """Extend ``cp`` by a completed scan of the range right after its cursor."""
    if part.domain.lo != cp.cursor + 1 or part.domain.kind != cp.domain.kind:
        raise CheckpointError(f"cannot absorb {part.domain} after cursor {cp.cursor}")
    return replace(
        cp,
        cursor=part.cursor,
        minima={m: _better(cp.minima[m], part.minima[m]) for m in cp.minima},
        processed_count=cp.processed_count + part.processed_count,
        skipped_cap_exceeded=cp.skipped_cap_exceeded + part.skipped_cap_exceeded,
    )


def merge_checkpoints(a: ScanCheckpoint, b: ScanCheckpoint) -> ScanCheckpoint:
    """Combine completed scans of two adjacent, disjoint domains.

    Commutative and associative; ties between equal minima go to the smaller
    argument.
    """
    if (a.domain.kind, a.mode, a.cap) != (b.domain.kind, b.mode, b.cap):
        raise CheckpointError("checkpoints differ in domain kind, mode or cap")
    if not (a.complete and b.complete):
        raise CheckpointError("only completed checkpoints can be merged")
    if b.domain.lo < a.domain.lo:
        a, b = b, a
    if a.domain.hi + 1 != b.domain.lo:
        raise CheckpointError(f"domains {a.domain} and {b.domain} are not adjacent")
    return _absorb(replace(a, domain=ScanDomain(a.domain.kind, a.domain.lo, b.domain.hi)), b)


def merge_all(parts: list[ScanCheckpoint]) -> ScanCheckpoint:
    if not parts:
        raise EmptyDomainError("nothing to merge")
    ordered = sorted(parts, key=lambda cp: cp.domain.lo)
    result = ordered[0]
    for cp in ordered[1:]:
        result = merge_checkpoints(result, cp)
    return result


class _Walker:
    """Tabulates (literal, telescoping, level) for consecutive n.

    Steadiness entries are natural logs.  The literal entry leaves out the
    factor of the cycle element 4, which every orbit shares.
    """

    def __init__(self, lo: int, cap: int, base: "_Walker | None" = None):
        self.lo = lo
        self.cap = cap
        self.base = base
        self.lit = array("d")
        self.tel = array("d")
        self.nu = array("q")

    @property
    def end(self) -> int:
        return self.lo + len(self.nu)

    def _lookup(self, m: int):
        base = self.base
        if base is not None and m < base.end:
            i = m - base.lo
            return base.lit[i], base.tel[i], base.nu[i]
        i = m - self.lo
        if 0 <= i < len(self.nu):
            return self.lit[i], self.tel[i], self.nu[i]
        return None

    def push(self) -> tuple[float, float, int]:
        """Tabulate the next value ``end``; a level above ``cap`` is stored as ``cap + 1``."""
        n = self.end
        cap = self.cap
        lit = tel = 0.0
        steps = 0
        m = n
        log1p = math.log1p
        while True:
            if m == 1:
                nu = steps
                break
            if m < n:
                hit = self._lookup(m)
                if hit is not None:
                    lit += hit[0]
                    tel += hit[1]
                    nu = steps + hit[2]
                    break
            if steps >= cap:
                nu = cap + 1
                break
            if m & 1:
                m = 3 * m + 1
                tel += log1p(-1.0 / m)
            else:
                if m % 6 == 4 and m != 4:
                    lit += log1p(-1.0 / m)
                m >>= 1
            steps += 1
        if nu > cap:
            nu = cap + 1
        self.lit.append(lit)
        self.tel.append(tel)
        self.nu.append(nu)
        return lit, tel, nu


@lru_cache(maxsize=4)
def _base_table(limit: int = _BASE_LIMIT) -> _Walker:
    # Built with an effectively unbounded cap; scans apply their own cap to
    # the combined level.
    w = _Walker(1, 1 << 62)
    while w.end < limit:
        w.push()
    return w



def _confirm(n: int, mode: str, cap: int) -> ModeMinimum:
    value = sigma(trajectory(n, cap), mode)
    return ModeMinimum(mode, value.exact, n, value.log2_approx)


class _Tracker:
    """Running exact minima for one scan segment."""

    def __init__(self, modes: tuple[str, ...], cap: int):
        self.cap = cap
        self.best: dict[str, ModeMinimum | None] = {m: None for m in modes}
        self.best_ln = {m: math.inf for m in modes}

    def offer(self, n: int, mode: str, ln_value: float) -> None:
        if ln_value > self.best_ln[mode] + _REJECT_MARGIN:
            return
        cand = _confirm(n, mode, self.cap)
        if cand.beats(self.best[mode]):
            self.best[mode] = cand
            self.best_ln[mode] = cand.log2_approx * _LN2


def _scan_integers(lo: int, hi: int, mode: str, cap: int, walker: _Walker | None = None) -> tuple[ScanCheckpoint, _Walker]:
    modes = modes_of(mode)
    base = _base_table()
    if walker is None or walker.end != max(lo, base.end):
        walker = _Walker(max(lo, base.end), cap, base)
    tracker = _Tracker(modes, cap)
    want_lit = LITERAL in modes
    want_tel = TELESCOPING in modes
    skipped = []
    processed = 0
    for n in range(lo, hi + 1):
        if n < base.end:
            i = n - 1
            lit, tel, nu = base.lit[i], base.tel[i], base.nu[i]
        else:
            lit, tel, nu = walker.push()
        if nu > cap:
            skipped.append(n)
            continue
        processed += 1
        if want_lit:
            tracker.offer(n, LITERAL, lit + _LN_F4)
        if want_tel:
            tracker.offer(n, TELESCOPING, tel)
    cp = ScanCheckpoint(ScanDomain(RANGE, lo, hi), mode, cap, hi, tracker.best, processed, tuple(skipped))
    return cp, walker


def _scan_levels(lo: int, hi: int, mode: str, cap: int) -> ScanCheckpoint:
    modes = modes_of(mode)
    best: dict[str, ModeMinimum | None] = {m: None for m in modes}
    processed = 0
    for level in iter_levels(hi):
        if level.nu < lo:
            continue
        for n in level.elements:
            rec = trajectory(n, cap)
            processed += 1
            for m in modes:
                value = sigma(rec, m)
                best[m] = _better(best[m], ModeMinimum(m, value.exact, n, value.log2_approx))
    return ScanCheckpoint(ScanDomain(LEVELS, lo, hi), mode, cap, hi, best, processed)


def _scan_chunk(args) -> ScanCheckpoint:
    kind, lo, hi, mode, cap = args
    if kind == RANGE:
        return _scan_integers(lo, hi, mode, cap)[0]
    return _scan_levels(lo, hi, mode, cap)


def _split(lo: int, hi: int, size: int) -> list[tuple[int, int]]:
    return [(a, min(a + size - 1, hi)) for a in range(lo, hi + 1, size)]


def scan_min_sigma(
    domain: ScanDomain,
    mode: str = BOTH,
    cap: int = DEFAULT_CAP,
    checkpoint_in: ScanCheckpoint | None = None,
    *,
    workers: int = 1,
    block: int | None = None,
    stop_at: int | None = None,
    on_progress: Callable[[ScanCheckpoint], object] | None = None,
) -> ScanCheckpoint:
    """Exact running minimum of steadiness over the tree members of ``domain``.

    ``stop_at`` ends the scan early (cursor = ``stop_at``), which together with
    ``checkpoint_in`` gives interrupt/resume.  ``on_progress`` receives the
    checkpoint after every completed block.  The result is identical for any
    ``workers`` and ``block``.
    """
    modes_of(mode)
    if cap < 1:
        raise InvalidInputError(f"cap must be >= 1, got {cap}")
    if domain.hi < domain.lo:
        raise EmptyDomainError(f"empty scan domain {domain}")
    if checkpoint_in is None:
        cp = ScanCheckpoint.start(domain, mode, cap)
    else:
        checkpoint_in.validate()
        if (checkpoint_in.domain, checkpoint_in.mode, checkpoint_in.cap) != (domain, mode, cap):
            raise CheckpointError(
                f"checkpoint is for {checkpoint_in.domain} mode={checkpoint_in.mode} cap={checkpoint_in.cap}, "
                f"not {domain} mode={mode} cap={cap}"
            )
        cp = checkpoint_in
    end = domain.hi if stop_at is None else min(stop_at, domain.hi)
    if domain.kind == LEVELS:
        block = block or 1
    else:
        block = block or max(10_000, (domain.hi - domain.lo + 1) // (8 * max(workers, 1)) or 1)
    pieces = _split(cp.cursor + 1, end, block)

    if workers > 1 and len(pieces) > 1:
        jobs = [(domain.kind, a, b, mode, cap) for a, b in pieces]
        with ProcessPoolExecutor(max_workers=workers) as pool:
            for part in pool.map(_scan_chunk, jobs):
                cp = _absorb(cp, part)
                if on_progress is not None:
                    on_progress(cp)
    elif domain.kind == RANGE:
        walker = None
        for a, b in pieces:
            part, walker = _scan_integers(a, b, mode, cap, walker)
            cp = _absorb(cp, part)
            if on_progress is not None:
                on_progress(cp)
    else:
        for a, b in pieces:
            cp = _absorb(cp, _scan_levels(a, b, mode, cap))
            if on_progress is not None:
                on_progress(cp)

    if cp.complete and all(m is None for m in cp.minima.values()):
        raise EmptyDomainError(f"no tree member within cap {cap} in {domain}")
    return cp
