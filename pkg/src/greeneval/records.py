"""Evaluation-record datasets: the delimited records file format.

A records file is a comma-separated table with a declared header. Required
columns: ``label``, ``hardware``, ``gpu_count``, ``train_hours``. Optional
columns: exactly one of ``mos`` or ``quality_loss``, plus ``e_train_kwh``,
``e_train_method``, ``e_gen_wh``, ``gen_workload_desc``, ``param_count``
and any number of free ``config_meta.*`` columns. Unknown columns are
rejected. Cells may be empty, meaning the value is absent for that record.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Callable

from .core import (
    DuplicateError,
    HardwareRef,
    InputError,
    ParseError,
    RunRecord,
    validate_record,
)
from .quality import normalize_mos, quality_from_loss

FORMAT_VERSION = "1"

REQUIRED_COLUMNS = ("label", "hardware", "gpu_count", "train_hours")
OPTIONAL_COLUMNS = ("mos", "quality_loss", "e_train_kwh", "e_train_method",
                    "e_gen_wh", "gen_workload_desc", "param_count")
CONFIG_META_PREFIX = "config_meta."


@dataclass(frozen=True)
class Dataset:
    """A loaded records file: validated records plus their provenance."""

    records: tuple[RunRecord, ...]
    source: str
    format_version: str = FORMAT_VERSION

    def __len__(self) -> int:
        return len(self.records)


@dataclass(frozen=True)
class ObjectiveDef:
    """A record field usable as a minimization objective."""

    key: str
    label: str
    decimals: int
    extract: Callable[[RunRecord], float | None]


OBJECTIVES: dict[str, ObjectiveDef] = {
    o.key: o for o in (
        ObjectiveDef("quality_loss", "1-%MOS", 3,
                     lambda r: r.quality.normalized_loss if r.quality else None),
        ObjectiveDef("e_train_kwh", "E_train (kWh)", 1,
                     lambda r: r.e_train_kwh),
        ObjectiveDef("e_gen_wh", "E_gen (Wh)", 3,
                     lambda r: r.e_gen_wh),
        ObjectiveDef("param_count", "parameters", 0,
                     lambda r: None if r.param_count is None else float(r.param_count)),
        ObjectiveDef("train_hours", "training hours", 1,
                     lambda r: r.train_hours),
    )
}


def objective_value(record: RunRecord, key: str) -> float | None:
    """Value of one objective on one record, or None when absent."""
    if key not in OBJECTIVES:
        raise InputError(
            f"unknown objective {key!r}; available objectives: "
            f"{', '.join(sorted(OBJECTIVES))}")
    return OBJECTIVES[key].extract(record)


# ---------------------------------------------------------------------------
# Loading
# ---------------------------------------------------------------------------

def _parse_float(cell: str, column: str, lineno: int, source: str) -> float:
    try:
        value = float(cell)
    except ValueError:
        raise ParseError(f"column {column!r}: not a number: {cell!r}",
                         source=source, line=lineno) from None
    if not math.isfinite(value):
        raise ParseError(f"column {column!r}: value must be finite, got {cell!r}",
                         source=source, line=lineno)
    return value


def _parse_int(cell: str, column: str, lineno: int, source: str) -> int:
    try:
        return int(cell)
    except ValueError:
        raise ParseError(f"column {column!r}: not an integer: {cell!r}",
                         source=source, line=lineno) from None


def load_records(text: str, *, source: str = "<records>") -> Dataset:
    """Parse and validate a records document.

    Raises ParseError (with line numbers) for malformed rows, InputError
    for header problems or invariant violations, and DuplicateError for
    repeated labels.
    """
    rows = list(csv.reader(io.StringIO(text)))
    if not rows:
        raise InputError(f"{source}: records file is empty (header row required)")
    header = [h.strip() for h in rows[0]]
    _check_header(header, source)
    col = {name: idx for idx, name in enumerate(header)}
    meta_cols = [name for name in header if name.startswith(CONFIG_META_PREFIX)]

    records: list[RunRecord] = []
    labels: set[str] = set()
    for lineno, row in enumerate(rows[1:], start=2):
        if not row or all(not cell.strip() for cell in row):
            continue
        if len(row) != len(header):
            raise ParseError(
                f"expected {len(header)} cells, got {len(row)}",
                source=source, line=lineno)
        cell = lambda name: row[col[name]].strip() if name in col else ""

        label = cell("label")
        if not label:
            raise ParseError("column 'label': must be non-empty",
                             source=source, line=lineno)
        if label in labels:
            raise DuplicateError(f"{source}:{lineno}: duplicate label {label!r}")
        labels.add(label)

        hardware = None
        if cell("hardware"):
            count = _parse_int(cell("gpu_count"), "gpu_count", lineno, source) \
                if cell("gpu_count") else 1
            hardware = HardwareRef(name=cell("hardware"), count=count)

        quality = None
        if "mos" in col and cell("mos"):
            quality = normalize_mos(_parse_float(cell("mos"), "mos", lineno, source))
        elif "quality_loss" in col and cell("quality_loss"):
            quality = quality_from_loss(
                _parse_float(cell("quality_loss"), "quality_loss", lineno, source))

        record = RunRecord(
            label=label,
            hardware=hardware,
            config_meta={name[len(CONFIG_META_PREFIX):]: row[col[name]].strip()
                         for name in meta_cols if row[col[name]].strip()},
            train_hours=_parse_float(cell("train_hours"), "train_hours",
                                     lineno, source)
            if cell("train_hours") else None,
            quality=quality,
            e_train_kwh=_parse_float(cell("e_train_kwh"), "e_train_kwh",
                                     lineno, source)
            if cell("e_train_kwh") else None,
            e_train_method=cell("e_train_method") or None,
            e_gen_wh=_parse_float(cell("e_gen_wh"), "e_gen_wh", lineno, source)
            if cell("e_gen_wh") else None,
            gen_workload_desc=cell("gen_workload_desc"),
            param_count=_parse_int(cell("param_count"), "param_count",
                                   lineno, source)
            if cell("param_count") else None,
        )
        violations = validate_record(record)
        if violations:
            raise InputError(
                f"{source}:{lineno}: record {label!r} is invalid: "
                f"{'; '.join(violations)}")
        records.append(record)
    return Dataset(records=tuple(records), source=source)


def _check_header(header: list[str], source: str) -> None:
    if len(set(header)) != len(header):
        raise InputError(f"{source}: header has repeated column names")
    missing = [c for c in REQUIRED_COLUMNS if c not in header]
    if missing:
        raise InputError(f"{source}: missing required column(s) {missing}")
    if "mos" in header and "quality_loss" in header:
        raise InputError(
            f"{source}: declare either 'mos' or 'quality_loss', not both")
    unknown = [c for c in header
               if c not in REQUIRED_COLUMNS and c not in OPTIONAL_COLUMNS
               and not c.startswith(CONFIG_META_PREFIX)]
    if unknown:
        raise InputError(
            f"{source}: unknown column(s) {unknown}; known columns are "
            f"{list(REQUIRED_COLUMNS + OPTIONAL_COLUMNS)} plus "
            f"'{CONFIG_META_PREFIX}*'")


def load_records_file(path: str | Path) -> Dataset:
    path = Path(path)
    return load_records(path.read_text(encoding="utf-8"), source=str(path))


# ---------------------------------------------------------------------------
# Writing
# ---------------------------------------------------------------------------

def write_records(dataset: Dataset) -> str:
    """Render a dataset back to the records format.

    Numeric cells are written with ``repr`` (shortest round-trip form), so
    loading the output reproduces the exact same values. Quality is always
    written as ``quality_loss``, the canonical minimization form.
    """
    used = lambda attr: any(getattr(r, attr) is not None for r in dataset.records)
    columns = list(REQUIRED_COLUMNS)
    if any(r.quality is not None for r in dataset.records):
        columns.append("quality_loss")
    for name in ("e_train_kwh", "e_train_method", "e_gen_wh", "param_count"):
        if used(name):
            columns.append(name)
    if any(r.gen_workload_desc for r in dataset.records):
        columns.append("gen_workload_desc")
    meta_keys = sorted({k for r in dataset.records for k in r.config_meta})
    columns.extend(CONFIG_META_PREFIX + k for k in meta_keys)

    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(columns)
    for r in dataset.records:
        row = []
        for name in columns:
            if name == "label":
                row.append(r.label)
            elif name == "hardware":
                row.append(r.hardware.name if r.hardware else "")
            elif name == "gpu_count":
                row.append(repr(r.hardware.count) if r.hardware else "")
            elif name == "train_hours":
                row.append("" if r.train_hours is None else repr(r.train_hours))
            elif name == "quality_loss":
                row.append("" if r.quality is None
                           else repr(r.quality.normalized_loss))
            elif name == "e_train_kwh":
                row.append("" if r.e_train_kwh is None else repr(r.e_train_kwh))
            elif name == "e_train_method":
                row.append(r.e_train_method or "")
            elif name == "e_gen_wh":
                row.append("" if r.e_gen_wh is None else repr(r.e_gen_wh))
            elif name == "param_count":
                row.append("" if r.param_count is None else str(r.param_count))
            elif name == "gen_workload_desc":
                row.append(r.gen_workload_desc)
            else:
                row.append(r.config_meta.get(name[len(CONFIG_META_PREFIX):], ""))
        writer.writerow(row)
    return out.getvalue()


def with_estimated_training_energy(record: RunRecord, kwh: float,
                                   method: str) -> RunRecord:
    """Copy a record with its training energy and method filled in."""
    return replace(record, e_train_kwh=kwh, e_train_method=method)
