"""Recorded power traces: parsing, integration, and training extrapolation.

Trace files are delimited text with one ``t_seconds,watts`` sample per
line. ``#``-prefixed comment lines are permitted and a single header line
is auto-detected. Epoch marks live in a separate ``epoch_index,t_seconds``
file with the same conventions.

Energy is integrated with the trapezoidal rule over the piecewise-linear
power curve, which is exact for constant and linear draw. Extrapolation to
a full training uses the arithmetic mean of all completed epochs rather
than the first epoch only, which makes it robust to warm-up effects.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from pathlib import Path

from .core import (
    DomainError,
    EnergyEstimate,
    EstimateMethod,
    InsufficientDataError,
    MalformedTraceError,
    ParseError,
    PowerTrace,
    WH_PER_KWH,
)

SECONDS_PER_HOUR = 3600.0

#: Above this sample spacing the integrator warns that it is bridging a gap.
DEFAULT_GAP_THRESHOLD_S = 60.0


class TraceGapWarning(UserWarning):
    """A trace contains a sampling gap that was integrated as-is."""


@dataclass(frozen=True)
class EpochMark:
    """A trace timestamp at an epoch boundary."""

    epoch_index: int
    t_seconds: float

    def __post_init__(self):
        if not isinstance(self.epoch_index, int) or self.epoch_index < 0:
            raise DomainError(f"epoch_index must be an integer >= 0, "
                              f"got {self.epoch_index!r}")
        if not math.isfinite(self.t_seconds) or self.t_seconds < 0:
            raise DomainError(f"mark t_seconds must be finite and >= 0, "
                              f"got {self.t_seconds!r}")


# ---------------------------------------------------------------------------
# Parsing and serialization
# ---------------------------------------------------------------------------

def _parse_rows(text: str, source: str, n_fields: int,
                field_desc: str) -> list[tuple[int, tuple[float, ...]]]:
    rows: list[tuple[int, tuple[float, ...]]] = []
    seen_data = False
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = [p.strip() for p in line.split(",")]
        if len(parts) != n_fields:
            raise ParseError(
                f"expected {n_fields} comma-separated fields ({field_desc}), "
                f"got {len(parts)}", source=source, line=lineno)
        try:
            values = tuple(float(p) for p in parts)
        except ValueError:
            if not seen_data:
                # Header line: non-numeric fields before any data row.
                continue
            raise ParseError(f"non-numeric value in data row: {line!r}",
                             source=source, line=lineno) from None
        seen_data = True
        rows.append((lineno, values))
    return rows


def parse_trace(text: str, *, source: str = "<trace>") -> PowerTrace:
    """Parse a delimited power trace document.

    Raises ParseError with the offending line number on malformed rows and
    MalformedTraceError with the offending sample index when the parsed
    samples violate trace invariants.
    """
    rows = _parse_rows(text, source, 2, "t_seconds,watts")
    return PowerTrace(samples=tuple(values for _, values in rows))


def serialize_trace(trace: PowerTrace) -> str:
    """Render a trace back to delimited text (round-trips exactly)."""
    lines = ["t_seconds,watts"]
    lines.extend(f"{t!r},{w!r}" for t, w in trace.samples)
    return "\n".join(lines) + "\n"


def parse_marks(text: str, *, source: str = "<marks>") -> list[EpochMark]:
    """Parse an ``epoch_index,t_seconds`` epoch-mark document."""
    marks: list[EpochMark] = []
    for lineno, (idx, t) in _parse_rows(text, source, 2,
                                        "epoch_index,t_seconds"):
        if idx != int(idx):
            raise ParseError(f"epoch_index must be an integer, got {idx!r}",
                             source=source, line=lineno)
        marks.append(EpochMark(epoch_index=int(idx), t_seconds=t))
    _check_marks(marks)
    return marks


def parse_trace_file(path: str | Path) -> PowerTrace:
    path = Path(path)
    return parse_trace(path.read_text(encoding="utf-8"), source=str(path))


def parse_marks_file(path: str | Path) -> list[EpochMark]:
    path = Path(path)
    return parse_marks(path.read_text(encoding="utf-8"), source=str(path))


def _check_marks(marks: list[EpochMark]) -> None:
    for prev, cur in zip(marks, marks[1:]):
        if cur.epoch_index <= prev.epoch_index or cur.t_seconds <= prev.t_seconds:
            raise DomainError(
                f"epoch marks must increase strictly in both index and time: "
                f"({cur.epoch_index}, t={cur.t_seconds}) does not follow "
                f"({prev.epoch_index}, t={prev.t_seconds})")


# ---------------------------------------------------------------------------
# Integration
# ---------------------------------------------------------------------------

def _warn_gaps(trace: PowerTrace, gap_threshold_s: float) -> None:
    for i in range(1, len(trace.samples)):
        dt = trace.samples[i][0] - trace.samples[i - 1][0]
        if dt > gap_threshold_s:
            warnings.warn(
                f"trace gap of {dt:.1f} s between samples {i - 1} and {i} "
                f"(threshold {gap_threshold_s:.1f} s); integrating as-is",
                TraceGapWarning, stacklevel=3)


def _trapezoid_wh(samples) -> float:
    terms = []
    for (t0, w0), (t1, w1) in zip(samples, samples[1:]):
        terms.append((t1 - t0) / SECONDS_PER_HOUR * (w0 + w1) / 2.0)
    return math.fsum(terms)


def integrate_trace(trace: PowerTrace, *,
                    gap_threshold_s: float = DEFAULT_GAP_THRESHOLD_S) -> EnergyEstimate:
    """Trapezoidal energy of a whole trace, tagged measured_integrated.

    The estimate's natural scale is Wh (use ``.wh``); the stored ``kwh``
    field is the same quantity divided by 1000. Requires >= 2 samples.
    Sampling gaps wider than ``gap_threshold_s`` are integrated as-is with
    a :class:`TraceGapWarning`.
    """
    if len(trace.samples) < 2:
        raise InsufficientDataError(
            f"integration needs at least 2 samples, got {len(trace.samples)}")
    _warn_gaps(trace, gap_threshold_s)
    wh = _trapezoid_wh(trace.samples)
    return EnergyEstimate(kwh=wh / WH_PER_KWH,
                          method=EstimateMethod.MEASURED_INTEGRATED)


def _power_at(trace: PowerTrace, t: float) -> float:
    samples = trace.samples
    if not samples[0][0] <= t <= samples[-1][0]:
        raise DomainError(f"t={t!r} lies outside the trace span "
                          f"[{samples[0][0]!r}, {samples[-1][0]!r}]")
    for (t0, w0), (t1, w1) in zip(samples, samples[1:]):
        if t0 <= t <= t1:
            if t == t0:
                return w0
            if t == t1:
                return w1
            return w0 + (w1 - w0) * (t - t0) / (t1 - t0)
    return samples[-1][1]


def integrate_between(trace: PowerTrace, t_start: float, t_end: float) -> float:
    """Trapezoidal energy in Wh between two times inside the trace span.

    Endpoint powers are linearly interpolated when the times fall between
    samples.
    """
    if len(trace.samples) < 2:
        raise InsufficientDataError(
            f"integration needs at least 2 samples, got {len(trace.samples)}")
    if t_start >= t_end:
        raise DomainError(f"need t_start < t_end, got {t_start!r} >= {t_end!r}")
    sub: list[tuple[float, float]] = [(t_start, _power_at(trace, t_start))]
    for t, w in trace.samples:
        if t_start < t < t_end:
            sub.append((t, w))
    sub.append((t_end, _power_at(trace, t_end)))
    return _trapezoid_wh(sub)


def extrapolate_training(trace: PowerTrace, marks: list[EpochMark],
                         total_epochs: int) -> EnergyEstimate:
    """Predict whole-training energy from completed epochs.

    The energy of each completed epoch is the trace integral between its
    consecutive marks; the prediction is mean-per-epoch times
    ``total_epochs``, tagged measured_extrapolated (in kWh).
    """
    if len(marks) < 2:
        raise InsufficientDataError(
            f"extrapolation needs >= 2 epoch marks (one complete epoch), "
            f"got {len(marks)}")
    _check_marks(marks)
    if len(trace.samples) < 2:
        raise InsufficientDataError(
            f"integration needs at least 2 samples, got {len(trace.samples)}")
    t_lo, t_hi = trace.span_seconds
    for mark in marks:
        if not t_lo <= mark.t_seconds <= t_hi:
            raise DomainError(
                f"epoch mark {mark.epoch_index} at t={mark.t_seconds!r} lies "
                f"outside the trace span [{t_lo!r}, {t_hi!r}]")
    completed = len(marks) - 1
    if not isinstance(total_epochs, int) or total_epochs < 1:
        raise DomainError(f"total_epochs must be an integer >= 1, "
                          f"got {total_epochs!r}")
    if total_epochs < completed:
        raise DomainError(
            f"total_epochs ({total_epochs}) is less than the {completed} "
            f"epochs already completed")
    epoch_wh = [integrate_between(trace, a.t_seconds, b.t_seconds)
                for a, b in zip(marks, marks[1:])]
    mean_wh = math.fsum(epoch_wh) / completed
    return EnergyEstimate(kwh=mean_wh * total_epochs / WH_PER_KWH,
                          method=EstimateMethod.MEASURED_EXTRAPOLATED)
