"""Exit criteria for the package; one summary line per criterion is printed at the end of the run."""

import random
import time
from fractions import Fraction

import pytest

from collatz_slots import (
    ScanDomain,
    assign_and_verify,
    check_slot_conditions,
    clusters_by_gap,
    clusters_by_kappa,
    compare_partitions,
    generate_levels,
    iter_levels,
    merge_all,
    scan_min_sigma,
    sigma_literal,
    sigma_telescoping,
    trajectory,
    verify_level_identity,
)
from collatz_slots.cli import build_parser, run_command
from collatz_slots.io import dump_report, load_report, read_checkpoint, write_checkpoint
from collatz_slots.levels import spawns_odd
from collatz_slots.slots import slot_bounds
from collatz_slots.steadiness import LITERAL
from collatz_slots.verify import identity_random_suite, min_literal_over_levels

# Cluster list of L_20 as printed, with elided interiors given as (first, count, last).
L20_CLUSTERS = [
    [18, 19],
    [112, 116, 117, 120, 122],
    [704, 720, 724, 725, 736, 738, 739, 744, 746, 753, 802, 803, 804, 805, 806],
    (4352, 20, 4849),
    (24576, 17, 29126),
    [163840, 172032, 174080, 174592, 174720, 174752, 174760, 174762],
    [1048576],
]


def _matches_printed(cluster, printed):
    if isinstance(printed, list):
        return list(cluster) == printed
    first, inner, last = printed
    return cluster[0] == first and cluster[-1] == last and len(cluster) == inner + 2


@pytest.mark.criterion(1, "L_20 golden clusters")
def test_criterion_1_l20_golden():
    started = time.perf_counter()
    levels = []
    generate_levels(20, levels.append)
    l20 = levels[20]
    by_kappa = clusters_by_kappa(l20)
    by_gap = clusters_by_gap(l20, Fraction(5, 2))
    elapsed = time.perf_counter() - started
    assert len(l20) == 72
    assert (l20.elements[0], l20.elements[-1]) == (18, 1048576)
    for partition in (by_kappa, by_gap):
        assert partition.sizes == [2, 5, 15, 22, 19, 8, 1]
        for cluster, printed in zip(partition.clusters, L20_CLUSTERS):
            assert _matches_printed(cluster, printed), (cluster, printed)
    assert compare_partitions(by_kappa, by_gap).equal
    assert elapsed < 1.0


@pytest.mark.criterion(2, "telescoping identity on L_0..L_25 and 10^4 random n <= 10^9")
def test_criterion_2_identity():
    started = time.perf_counter()
    checked = 0
    for level in iter_levels(25):
        for n in level.elements:
            checked += 1
            assert verify_level_identity(trajectory(n)).holds, n
    sample = identity_random_suite(10_000, seed=20201220, bound=10**9)
    elapsed = time.perf_counter() - started
    assert sample.passed and sample.checked == 10_000
    assert checked == sum(len(lv) for lv in iter_levels(25))
    assert elapsed < 60


@pytest.mark.criterion(3, "discrepancy witness at n = 5")
def test_criterion_3_discrepancy():
    rec = trajectory(5)
    lit = sigma_literal(rec).exact
    tel = sigma_telescoping(rec).exact
    scale = Fraction(2**rec.nu, 6**rec.kappa)
    assert scale * lit == Fraction(15, 4) != 5
    assert scale * tel == 5
    assert not verify_level_identity(rec, LITERAL).holds
    assert verify_level_identity(rec).holds
    report, code, _ = run_command(build_parser().parse_args(["sigma", "--n", "5", "--mode", "both"]))
    assert code == 0
    assert any("15/4 != 5" in w for w in load_report(dump_report(report))["warnings"])


@pytest.mark.criterion(4, "domination and ceiling on L_0..L_25")
def test_criterion_4_domination():
    for level in iter_levels(25):
        for n in level.elements:
            rec = trajectory(n)
            lit = sigma_literal(rec).exact
            assert lit <= sigma_telescoping(rec).exact, n
            assert lit <= Fraction(3, 4), n


@pytest.mark.criterion(5, "slot containment up to N = 30")
def test_criterion_5_containment():
    sigma0, _ = min_literal_over_levels(30)
    for level in iter_levels(30):
        assignment = assign_and_verify(level, sigma0)
        assert assignment.contained, (level.nu, assignment.violations()[:3])
        for e in assignment.entries:
            assert e.ratio <= 1
            assert (e.ratio == 1) == (e.n == 2**level.nu)


@pytest.mark.criterion(6, "cardinality recurrence up to nu = 30")
def test_criterion_6_recurrence():
    levels = list(iter_levels(31))
    for prev, nxt in zip(levels, levels[1:]):
        assert len(nxt) == len(prev) + sum(1 for n in prev.elements if spawns_odd(n))


@pytest.mark.slow
@pytest.mark.criterion(7, "sigma_0 scan over n <= 10^6")
def test_criterion_7_sigma0_scan(tmp_path):
    domain = ScanDomain.integers(1, 10**6)
    one_shot = scan_min_sigma(domain, "both")

    # (a) interrupt half way, persist, resume
    path = tmp_path / "scan.json"
    write_checkpoint(scan_min_sigma(domain, "both", stop_at=500_000), path)
    resumed = scan_min_sigma(domain, "both", checkpoint_in=read_checkpoint(path))
    assert resumed == one_shot

    # parallel CLI run must match the sequential library result exactly
    args = build_parser().parse_args(["sigma0", "--n", str(10**6), "--mode", "both", "--workers", "4"])
    report, code, _ = run_command(args)
    assert code == 0
    minima = load_report(dump_report(report))["results"]["minima"]

    # (b) bounds on the observed minimum
    lit = one_shot.minimum("literal")
    assert Fraction(45, 100) <= lit.exact <= Fraction(5407, 10000)

    # (c) value, argmin and mode for both definitions
    for mode in ("literal", "telescoping"):
        m = one_shot.minimum(mode)
        assert minima[mode]["mode"] == mode
        assert minima[mode]["argmin"] == str(m.argmin)
        assert minima[mode]["value"]["exact"] == f"{m.exact.numerator}/{m.exact.denominator}"
    # the published estimate is reproduced at this scale
    assert abs(float(lit.exact) - 0.5152) < 5e-5
    print(f"observed literal minimum {float(lit.exact):.6f} at n = {lit.argmin}")


@pytest.mark.criterion(8, "slot condition checks")
@pytest.mark.parametrize(
    "sigma0, expected",
    [(Fraction(5152, 10000), (True, True)), (Fraction(1, 6), (False, False)), (Fraction(1, 4), (True, False))],
)
def test_criterion_8_conditions(sigma0, expected):
    cond = check_slot_conditions(sigma0)
    assert (cond.disjoint, cond.separated) == expected
    assert cond.grid_ok and cond.grid_nu_max == 30
    if cond.separated:
        for nu in range(31):
            for kappa in range(1, nu + 1):
                assert slot_bounds(nu, kappa, sigma0).upper < slot_bounds(nu, kappa - 1, sigma0).lower / 3


@pytest.mark.criterion(9, "scan merge over 20 random partitions of [1, 10^4]")
def test_criterion_9_merge():
    reference = scan_min_sigma(ScanDomain.integers(1, 10_000), "both")
    rng = random.Random(9)
    for _ in range(20):
        cuts = sorted(rng.sample(range(2, 10_001), rng.randint(1, 12)))
        bounds = [1] + cuts + [10_001]
        parts = [scan_min_sigma(ScanDomain.integers(a, b - 1), "both") for a, b in zip(bounds, bounds[1:])]
        rng.shuffle(parts)
        assert merge_all(parts) == reference
