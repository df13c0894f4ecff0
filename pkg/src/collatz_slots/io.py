"""File formats: level-set text files, scan checkpoints and reports."""

from __future__ import annotations

import json
import os
import tempfile
from fractions import Fraction
from pathlib import Path

from .errors import CheckpointError, IntegrityError, ParseError
from .levels import LevelSet
from .scan import FORMAT_VERSION, ModeMinimum, ScanCheckpoint, ScanDomain, modes_of

LEVELSET_MAGIC = "collatz-levelset"
LEVELSET_VERSION = "v1"
CHECKPOINT_KIND = "collatz-scan-checkpoint"
REPORT_KIND = "collatz-report"
REPORT_SCHEMA_VERSION = 1


def format_levelset(level: LevelSet) -> str:
    lines = [f"{LEVELSET_MAGIC} {LEVELSET_VERSION} nu={level.nu} count={len(level)}"]
    lines.extend(str(e) for e in level.elements)
    return "\n".join(lines) + "\n"


def write_levelset(level: LevelSet, path) -> None:
    _atomic_write(Path(path), format_levelset(level))


def parse_levelset(text: str) -> LevelSet:
    if not text.endswith("\n"):
        raise ParseError("missing final newline", text.count("\n") + 1)
    lines = text[:-1].split("\n")
    header = lines[0].split(" ")
    if len(header) != 4 or header[0] != LEVELSET_MAGIC:
        raise ParseError(f"bad header {lines[0]!r}", 1)
    if header[1] != LEVELSET_VERSION:
        raise ParseError(f"unsupported version {header[1]!r}", 1)
    try:
        key_nu, nu = header[2].split("=")
        key_count, count = header[3].split("=")
        if (key_nu, key_count) != ("nu", "count"):
            raise ValueError
        nu, count = int(nu), int(count)
    except ValueError:
        raise ParseError(f"bad header fields {lines[0]!r}", 1) from None
    elements = []
    for lineno, line in enumerate(lines[1:], start=2):
        if not line.isdigit():
            raise ParseError(f"not a decimal element: {line!r}", lineno)
        elements.append(int(line))
    if len(elements) != count:
        raise IntegrityError(f"header count {count} but {len(elements)} elements")
    level = LevelSet(nu, tuple(elements))
    level.validate()
    return level


def read_levelset(path) -> LevelSet:
    return parse_levelset(Path(path).read_text())


def _ratio(x: Fraction) -> dict:
    return {"num": str(x.numerator), "den": str(x.denominator)}


def _parse_ratio(d: dict) -> Fraction:
    return Fraction(int(d["num"]), int(d["den"]))


def checkpoint_to_dict(cp: ScanCheckpoint) -> dict:
    minima = {}
    for mode, m in cp.minima.items():
        minima[mode] = None if m is None else {**_ratio(m.exact), "argmin": str(m.argmin), "log2_approx": m.log2_approx}
    return {
        "kind": CHECKPOINT_KIND,
        "format_version": cp.format_version,
        "domain": {"kind": cp.domain.kind, "lo": str(cp.domain.lo), "hi": str(cp.domain.hi)},
        "mode": cp.mode,
        "cap": cp.cap,
        "cursor": str(cp.cursor),
        "processed_count": cp.processed_count,
        "skipped_cap_exceeded": [str(n) for n in cp.skipped_cap_exceeded],
        "minima": minima,
    }


def _decimal(s, what: str) -> int:
    if not isinstance(s, str) or not s.lstrip("-").isdigit():
        raise CheckpointError(f"{what} is not a decimal string: {s!r}")
    return int(s)


def checkpoint_from_dict(d: dict) -> ScanCheckpoint:
    if d.get("kind") != CHECKPOINT_KIND:
        raise CheckpointError(f"not a scan checkpoint (kind={d.get('kind')!r})")
    if d.get("format_version") != FORMAT_VERSION:
        raise CheckpointError(f"checkpoint version {d.get('format_version')!r}, expected {FORMAT_VERSION}")
    try:
        dom = d["domain"]
        domain = ScanDomain(dom["kind"], _decimal(dom["lo"], "domain.lo"), _decimal(dom["hi"], "domain.hi"))
        mode = d["mode"]
        modes_of(mode)
        minima = {}
        for key, m in d["minima"].items():
            if m is None:
                minima[key] = None
            else:
                minima[key] = ModeMinimum(key, _parse_ratio(m), _decimal(m["argmin"], "argmin"), float(m["log2_approx"]))
        cp = ScanCheckpoint(
            domain=domain,
            mode=mode,
            cap=int(d["cap"]),
            cursor=_decimal(d["cursor"], "cursor"),
            minima=minima,
            processed_count=int(d["processed_count"]),
            skipped_cap_exceeded=tuple(_decimal(s, "skipped entry") for s in d["skipped_cap_exceeded"]),
            format_version=d["format_version"],
        )
    except CheckpointError:
        raise
    except Exception as exc:
        raise CheckpointError(f"malformed checkpoint: {exc!r}") from exc
    cp.validate()
    return cp


def write_checkpoint(cp: ScanCheckpoint, path) -> None:
    _atomic_write(Path(path), json.dumps(checkpoint_to_dict(cp), indent=2) + "\n")


def read_checkpoint(path) -> ScanCheckpoint:
    try:
        d = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise CheckpointError(f"cannot read checkpoint {path}: {exc}") from exc
    return checkpoint_from_dict(d)


def _atomic_write(path: Path, text: str) -> None:
    # Write-then-rename so an interrupted scan never leaves a torn checkpoint.
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=path.name + ".", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def exact_json(x: Fraction) -> dict:
    """Exact ratio with a labelled float approximation."""
    return {"exact": f"{x.numerator}/{x.denominator}", "approx": float(x)}


def dump_report(report: dict) -> str:
    return json.dumps(report, indent=2) + "\n"


def load_report(text: str) -> dict:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"report is not valid JSON: {exc}") from exc
    if doc.get("kind") != REPORT_KIND or doc.get("schema_version") != REPORT_SCHEMA_VERSION:
        raise ParseError("not a collatz report or unsupported schema version")
    for key in ("command", "results", "warnings", "timing"):
        if key not in doc:
            raise ParseError(f"report lacks {key!r}")
    return doc
