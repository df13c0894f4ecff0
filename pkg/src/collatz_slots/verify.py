"""Invariant suites run by ``collatz-slots verify`` and the acceptance tests."""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import OrbitCapExceeded
from .levels import iter_levels, spawns_odd
from .orbit import DEFAULT_CAP, trajectory
from .slots import (
    DEFAULT_GAP_FACTOR,
    assign_and_verify,
    check_slot_conditions,
    clusters_by_gap,
    clusters_by_kappa,
    compare_partitions,
)
from .steadiness import sigma_literal, sigma_telescoping, verify_level_identity

MAX_REPORTED_FAILURES = 10
GAP_AGREEMENT_NU = 25


@dataclass
class SuiteResult:
    name: str
    checked: int = 0
    failures: list = field(default_factory=list)
    notes: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return not self.failures

    def fail(self, detail) -> None:
        if len(self.failures) < MAX_REPORTED_FAILURES:
            self.failures.append(detail)
        else:
            self.notes["truncated_failures"] = self.notes.get("truncated_failures", 0) + 1


def recurrence_suite(nu_max: int) -> SuiteResult:
    res = SuiteResult("cardinality_recurrence")
    prev = None
    for level in iter_levels(nu_max + 1):
        if prev is not None:
            res.checked += 1
            expected = len(prev) + sum(1 for n in prev.elements if spawns_odd(n))
            if len(level) != expected:
                res.fail({"nu": level.nu, "count": len(level), "expected": expected})
        prev = level
    return res


def level_consistency_suite(nu_max: int, cap: int = DEFAULT_CAP) -> SuiteResult:
    """Forward level of every element, disjointness of levels, the single kappa=0 element."""
    res = SuiteResult("level_consistency")
    seen = set()
    for level in iter_levels(nu_max):
        zero_kappa = []
        for n in level.elements:
            res.checked += 1
            rec = trajectory(n, cap)
            if rec.nu != level.nu:
                res.fail({"n": str(n), "nu": level.nu, "forward_nu": rec.nu})
            if n in seen:
                res.fail({"n": str(n), "nu": level.nu, "duplicate": True})
            seen.add(n)
            if rec.kappa == 0:
                zero_kappa.append(n)
        if zero_kappa != [2**level.nu]:
            res.fail({"nu": level.nu, "kappa_zero_elements": [str(n) for n in zero_kappa]})
    return res


def identity_levels_suite(nu_max: int, cap: int = DEFAULT_CAP) -> SuiteResult:
    res = SuiteResult("telescoping_identity_levels")
    for level in iter_levels(nu_max):
        for n in level.elements:
            res.checked += 1
            verdict = verify_level_identity(trajectory(n, cap))
            if not verdict.holds:
                res.fail({"n": str(n), "lhs": str(verdict.lhs), "rhs": str(verdict.rhs)})
    return res


def identity_random_suite(samples: int, seed: int, bound: int = 10**9, cap: int = DEFAULT_CAP) -> SuiteResult:
    res = SuiteResult("telescoping_identity_random")
    res.notes.update(seed=seed, samples=samples, bound=str(bound))
    rng = random.Random(seed)
    skipped = 0
    for _ in range(samples):
        n = rng.randint(1, bound)
        try:
            rec = trajectory(n, cap)
        except OrbitCapExceeded:
            skipped += 1
            continue
        res.checked += 1
        verdict = verify_level_identity(rec)
        if not verdict.holds:
            res.fail({"n": str(n), "lhs": str(verdict.lhs), "rhs": str(verdict.rhs)})
    res.notes["skipped_cap_exceeded"] = skipped
    return res


def domination_suite(nu_max: int, cap: int = DEFAULT_CAP) -> SuiteResult:
    """``literal <= telescoping <= 1`` and ``literal <= 3/4`` on every level element."""
    res = SuiteResult("domination_and_ceiling")
    ceiling = Fraction(3, 4)
    for level in iter_levels(nu_max):
        for n in level.elements:
            res.checked += 1
            rec = trajectory(n, cap)
            lit = sigma_literal(rec).exact
            tel = sigma_telescoping(rec).exact
            if not (lit <= tel <= 1 and lit <= ceiling):
                res.fail({"n": str(n), "literal": str(lit), "telescoping": str(tel)})
    return res


def min_literal_over_levels(nu_max: int, cap: int = DEFAULT_CAP) -> tuple[Fraction, int]:
    best = None
    for level in iter_levels(nu_max):
        for n in level.elements:
            value = sigma_literal(trajectory(n, cap)).exact
            if best is None or (value, n) < best:
                best = (value, n)
    return best


def containment_suite(nu_max: int, sigma0: Fraction | None = None, cap: int = DEFAULT_CAP) -> SuiteResult:
    """Every level sits inside its slots; the upper bound is attained only by ``2**nu``."""
    res = SuiteResult("slot_containment")
    if sigma0 is None:
        sigma0, argmin = min_literal_over_levels(nu_max, cap)
        res.notes["sigma0_argmin"] = str(argmin)
    res.notes["sigma0"] = f"{sigma0.numerator}/{sigma0.denominator}"
    for level in iter_levels(nu_max):
        assignment = assign_and_verify(level, sigma0, cap)
        res.checked += len(assignment.entries)
        for e in assignment.violations():
            res.fail({"nu": level.nu, "n": str(e.n), "kappa": e.kappa, "ratio": str(e.ratio)})
        for e in assignment.entries:
            if (e.ratio == 1) != (e.n == 2**level.nu):
                res.fail({"nu": level.nu, "n": str(e.n), "upper_bound_equality": str(e.ratio)})
    return res


def slot_conditions_suite(sigma0: Fraction) -> SuiteResult:
    res = SuiteResult("slot_conditions")
    cond = check_slot_conditions(sigma0)
    res.checked = 1
    res.notes.update(disjoint=cond.disjoint, separated=cond.separated, grid_nu_max=cond.grid_nu_max)
    if not cond.grid_ok:
        res.fail({"sigma0": str(sigma0), "grid_ok": False})
    return res


def gap_agreement_suite(nu_max: int, factor: Fraction = DEFAULT_GAP_FACTOR, cap: int = DEFAULT_CAP) -> SuiteResult:
    """Gap and kappa clusterings agree; disagreement above nu=25 is only flagged."""
    res = SuiteResult("cluster_gap_kappa_agreement")
    flagged = []
    for level in iter_levels(nu_max):
        res.checked += 1
        by_kappa = clusters_by_kappa(level, cap)
        same = not by_kappa.interleaved and compare_partitions(by_kappa, clusters_by_gap(level, factor)).equal
        if not same:
            if level.nu <= GAP_AGREEMENT_NU:
                res.fail({"nu": level.nu, "interleaved": by_kappa.interleaved})
            else:
                flagged.append(level.nu)
    res.notes["flagged_levels"] = flagged
    return res


def run_all(nu_max: int, samples: int = 10_000, seed: int = 0, cap: int = DEFAULT_CAP) -> list[SuiteResult]:
    containment = containment_suite(nu_max, cap=cap)
    sigma0 = Fraction(containment.notes["sigma0"])
    return [
        recurrence_suite(nu_max),
        level_consistency_suite(nu_max, cap),
        identity_levels_suite(nu_max, cap),
        identity_random_suite(samples, seed, cap=cap),
        domination_suite(nu_max, cap),
        containment,
        slot_conditions_suite(sigma0),
        gap_agreement_suite(nu_max, cap=cap),
    ]
