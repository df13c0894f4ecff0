"""Command-line interface: ``collatz-slots <subcommand> [options]``."""

from __future__ import annotations

import argparse
import csv
from io import StringIO
import sys
import time
from fractions import Fraction
from pathlib import Path

from . import io
from .errors import CollatzError, InvalidInputError, OrbitCapExceeded
from .levels import generate_levels, level_set, level_stats
from .orbit import DEFAULT_CAP, trajectory
from .scan import BOTH, SCAN_MODES, ScanDomain, modes_of, scan_min_sigma
from .slots import (
    DEFAULT_GAP_FACTOR,
    assign_and_verify,
    check_slot_conditions,
    clusters_by_gap,
    clusters_by_kappa,
    compare_partitions,
    slot_bounds,
)
from .steadiness import LITERAL, TELESCOPING, sigma, verify_level_identity
from .verify import min_literal_over_levels, run_all

EXIT_OK = 0
EXIT_VERIFICATION_FAILED = 1
EXIT_USAGE = 2
EXIT_CAP_EXCEEDED = 3

DISCREPANCY_WARNING = (
    "the orbit-set steadiness (literal) includes factors k = 4 (mod 6) reached by halving, "
    "among them the cycle element 4; n = 2**nu / 6**kappa * sigma holds exactly only for the "
    "telescoping product over tripling-step images"
)


def _ratio_arg(text: str) -> Fraction:
    try:
        num, den = text.split("/")
        value = Fraction(int(num), int(den))
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"expected <num>/<den>, got {text!r}") from None
    return value


def _nonneg_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
    if value < 0:
        raise argparse.ArgumentTypeError(f"expected a non-negative integer, got {value}")
    return value


def _pos_int(text: str) -> int:
    value = _nonneg_int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {value}")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="collatz-slots", description=__doc__)
    sub = parser.add_subparsers(dest="subcommand", required=True)

    def add(name, help):
        p = sub.add_parser(name, help=help)
        p.add_argument("--cap", type=_pos_int, default=DEFAULT_CAP, help="step cap per trajectory")
        p.add_argument("--out", type=Path, help="write the output here instead of stdout")
        return p

    p = add("levels", "generate the level set L_nu")
    p.add_argument("--nu", type=_nonneg_int, required=True)
    p.add_argument("--stats", action="store_true", help="include count, min, max and kappa histogram")
    p.add_argument("--format", choices=("report", "csv"), default="report")

    p = add("sigma", "orbit steadiness of a single n")
    p.add_argument("--n", type=_pos_int, required=True)
    p.add_argument("--mode", choices=SCAN_MODES, default=BOTH)

    p = add("sigma0", "running minimum of steadiness over [1, n] or over levels 0..nu")
    target = p.add_mutually_exclusive_group(required=True)
    target.add_argument("--n", type=_pos_int, help="scan the integers 1..n")
    target.add_argument("--nu", type=_nonneg_int, help="scan the elements of L_0..L_nu")
    p.add_argument("--mode", choices=SCAN_MODES, default=BOTH)
    p.add_argument("--workers", type=_pos_int, default=1)
    p.add_argument("--checkpoint", type=Path, help="persist scan progress to this file")
    p.add_argument("--resume", action="store_true", help="continue from --checkpoint if it exists")

    p = add("slots", "assign L_nu to slots and check containment")
    p.add_argument("--nu", type=_nonneg_int, required=True)
    p.add_argument("--sigma0", type=_ratio_arg, help="default: minimum literal steadiness over L_0..L_nu")
    p.add_argument("--emit-plot-data", action="store_true")

    p = add("clusters", "cluster L_nu by kappa and by gap factor")
    p.add_argument("--nu", type=_nonneg_int, required=True)
    p.add_argument("--gap-factor", type=_ratio_arg, default=DEFAULT_GAP_FACTOR)
    p.add_argument("--format", choices=("report", "csv"), default="report")
    p.add_argument("--emit-plot-data", action="store_true")

    p = add("verify", "run every invariant suite up to level nu")
    p.add_argument("--nu", type=_nonneg_int, required=True)
    p.add_argument("--seed", type=int, default=0, help="seed for the random identity sample")
    p.add_argument("--samples", type=_nonneg_int, default=10_000)
    return parser


def _exact(x: Fraction) -> dict:
    return io.exact_json(x)


def _cmd_levels(args) -> tuple[dict, list, int, str | None]:
    level = level_set(args.nu)
    summary = generate_levels(args.nu)
    results = {
        "nu": args.nu,
        "count": len(level),
        "cardinalities": summary.cardinalities,
        "elements": [str(e) for e in level.elements],
    }
    if args.stats:
        st = level_stats(level, args.cap)
        results["stats"] = {
            "count": st.count,
            "min": str(st.min),
            "max": str(st.max),
            "kappa_histogram": {str(k): v for k, v in st.kappa_histogram.items()},
        }
    text = None
    if args.format == "csv":
        buf = StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["element"])
        w.writerows([e] for e in level.elements)
        text = buf.getvalue()
    return results, [], EXIT_OK, text


def _cmd_sigma(args):
    rec = trajectory(args.n, args.cap)
    results = {"n": str(args.n), "nu": rec.nu, "kappa": rec.kappa, "modes": {}}
    warnings = []
    status = EXIT_OK
    for mode in modes_of(args.mode):
        value = sigma(rec, mode)
        verdict = verify_level_identity(rec, mode)
        results["modes"][mode] = {
            "value": _exact(value.exact),
            "log2_approx": value.log2_approx,
            "identity": {"holds": verdict.holds, "lhs": str(verdict.lhs), "rhs": str(verdict.rhs)},
        }
        if mode == TELESCOPING and not verdict.holds:
            status = EXIT_VERIFICATION_FAILED
        if mode == LITERAL and not verdict.holds:
            implied = Fraction(2**rec.nu, 6**rec.kappa) * value.exact
            warnings.append(
                f"literal steadiness does not satisfy the level identity for n={args.n}: "
                f"2**{rec.nu}/6**{rec.kappa} * {value.exact} = {implied} != {args.n}; " + DISCREPANCY_WARNING
            )
    return results, warnings, status, None


def _cmd_sigma0(args):
    domain = ScanDomain.integers(1, args.n) if args.n is not None else ScanDomain.levels(0, args.nu)
    checkpoint_in = None
    if args.resume:
        if args.checkpoint is None:
            raise InvalidInputError("--resume requires --checkpoint")
        if args.checkpoint.exists():
            checkpoint_in = io.read_checkpoint(args.checkpoint)
    on_progress = None
    if args.checkpoint is not None:
        path = args.checkpoint
        on_progress = lambda cp: io.write_checkpoint(cp, path)  # noqa: E731
    cp = scan_min_sigma(domain, args.mode, args.cap, checkpoint_in, workers=args.workers, on_progress=on_progress)
    minima = {}
    for mode, m in cp.minima.items():
        minima[mode] = None if m is None else {"mode": mode, "value": _exact(m.exact), "argmin": str(m.argmin)}
    results = {
        "domain": {"kind": domain.kind, "lo": str(domain.lo), "hi": str(domain.hi)},
        "minima": minima,
        "processed_count": cp.processed_count,
        "skipped_cap_exceeded": [str(n) for n in cp.skipped_cap_exceeded],
        "resumed_from": None if checkpoint_in is None else str(checkpoint_in.cursor),
    }
    warnings = []
    if cp.mode == BOTH:
        warnings.append("minima are reported for both steadiness definitions; " + DISCREPANCY_WARNING)
    if cp.skipped_cap_exceeded:
        warnings.append(f"{len(cp.skipped_cap_exceeded)} inputs exceeded the step cap and were excluded")
    return results, warnings, EXIT_OK, None


def _cmd_slots(args):
    level = level_set(args.nu)
    source = "argument"
    sigma0 = args.sigma0
    if sigma0 is None:
        sigma0, argmin = min_literal_over_levels(args.nu, args.cap)
        source = f"minimum literal steadiness over levels 0..{args.nu} (argmin {argmin})"
    assignment = assign_and_verify(level, sigma0, args.cap)
    cond = check_slot_conditions(sigma0)
    slots = []
    for kappa in assignment.kappas:
        slot = slot_bounds(args.nu, kappa, sigma0)
        members = [e for e in assignment.entries if e.kappa == kappa]
        slots.append({
            "kappa": kappa,
            "lower": _exact(slot.lower),
            "upper": _exact(slot.upper),
            "count": len(members),
            "min": str(members[0].n),
            "max": str(members[-1].n),
            "all_in_slot": all(e.in_slot for e in members),
        })
    results = {
        "nu": args.nu,
        "sigma0": _exact(sigma0),
        "sigma0_source": source,
        "contained": assignment.contained,
        "violations": [
            {"n": str(e.n), "kappa": e.kappa, "ratio": _exact(e.ratio)} for e in assignment.violations()
        ],
        "slots": slots,
        "conditions": {"disjoint": cond.disjoint, "separated": cond.separated, "grid_ok": cond.grid_ok},
    }
    if args.emit_plot_data:
        results["plot_data"] = {
            "slot_bounds": [[s["kappa"], s["lower"]["exact"], s["upper"]["exact"]] for s in slots],
        }
    ok = assignment.contained and cond.grid_ok
    return results, [], EXIT_OK if ok else EXIT_VERIFICATION_FAILED, None


def _partition_json(p) -> dict:
    out = {
        "method": p.method,
        "sizes": p.sizes,
        "clusters": [[str(e) for e in c] for c in p.clusters],
    }
    if p.kappas is not None:
        out["kappas"] = list(p.kappas)
        out["interleaved"] = p.interleaved
    if p.factor is not None:
        out["factor"] = f"{p.factor.numerator}/{p.factor.denominator}"
    return out


def _cmd_clusters(args):
    level = level_set(args.nu)
    by_kappa = clusters_by_kappa(level, args.cap)
    by_gap = clusters_by_gap(level, args.gap_factor)
    cmp = compare_partitions(by_kappa, by_gap)
    results = {
        "nu": args.nu,
        "by_kappa": _partition_json(by_kappa),
        "by_gap": _partition_json(by_gap),
        "agree": cmp.equal,
        "first_difference": cmp.first_difference,
    }
    rows = [(e, i) for i, c in enumerate(by_gap.clusters) for e in c]
    if args.emit_plot_data:
        results["plot_data"] = {"element_cluster": [[str(e), i] for e, i in rows]}
    warnings = []
    if by_kappa.interleaved:
        warnings.append(f"kappa groups interleave in L_{args.nu}: clusters are no longer contiguous")
    if not cmp.equal:
        warnings.append(f"gap and kappa clusterings differ from block {cmp.first_difference}")
    text = None
    if args.format == "csv":
        buf = StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["element", "cluster"])
        w.writerows(rows)
        text = buf.getvalue()
    return results, warnings, EXIT_OK, text


def _cmd_verify(args):
    suites = run_all(args.nu, samples=args.samples, seed=args.seed, cap=args.cap)
    results = {
        "nu": args.nu,
        "seed": args.seed,
        "suites": [
            {"name": s.name, "passed": s.passed, "checked": s.checked, "failures": s.failures, "notes": s.notes}
            for s in suites
        ],
        "all_passed": all(s.passed for s in suites),
    }
    return results, [], EXIT_OK if results["all_passed"] else EXIT_VERIFICATION_FAILED, None


COMMANDS = {
    "levels": _cmd_levels,
    "sigma": _cmd_sigma,
    "sigma0": _cmd_sigma0,
    "slots": _cmd_slots,
    "clusters": _cmd_clusters,
    "verify": _cmd_verify,
}


def _command_echo(args) -> dict:
    echo = {}
    for key, value in vars(args).items():
        if isinstance(value, Fraction):
            value = f"{value.numerator}/{value.denominator}"
        elif isinstance(value, Path):
            value = str(value)
        elif isinstance(value, int) and not isinstance(value, bool):
            value = str(value) if key == "n" else value
        echo[key] = value
    return echo


def run_command(args) -> tuple[dict, int, str | None]:
    """Execute parsed arguments; returns (report, exit code, csv text or None)."""
    started = time.perf_counter()
    warnings: list[str] = []
    text = None
    try:
        results, warnings, status, text = COMMANDS[args.subcommand](args)
    except OrbitCapExceeded as exc:
        results = {"error": "orbit-cap-exceeded", "n": str(exc.n), "cap": exc.cap, "message": str(exc)}
        status = EXIT_CAP_EXCEEDED
    except CollatzError as exc:
        results = {"error": type(exc).__name__, "message": str(exc)}
        status = EXIT_USAGE
    report = {
        "kind": io.REPORT_KIND,
        "schema_version": io.REPORT_SCHEMA_VERSION,
        "command": _command_echo(args),
        "results": results,
        "warnings": warnings,
        "timing": {"seconds_approx": round(time.perf_counter() - started, 6)},
        "exit_code": status,
    }
    if status not in (EXIT_OK, EXIT_VERIFICATION_FAILED):
        text = None
    return report, status, text


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    report, status, text = run_command(args)
    output = text if text is not None else io.dump_report(report)
    if args.out is not None:
        args.out.parent.mkdir(parents=True, exist_ok=True)
        args.out.write_text(output)
    else:
        sys.stdout.write(output)
    return status


if __name__ == "__main__":
    sys.exit(main())
