"""Report emission: delimited tables, front documents, and scatter images.

Every emitter is byte-deterministic: identical inputs produce identical
output documents, with no timestamps or randomized identifiers. Numbers in
tables are rounded half-to-even at the per-column decimals given by the
report spec; Pareto classification always happens before any rounding.

The scatter image is a self-contained SVG document. Optimal points carry
the style class ``pareto-optimal`` (blue) and dominated points
``pareto-dominated`` (red), so tests and downstream tooling can recover
the classification by parsing the image.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Sequence
from xml.sax.saxutils import escape

from .core import DimensionError, DomainError, EvalPoint, InputError, RunRecord
from .pareto import FrontResult
from .records import OBJECTIVES, objective_value

FORMAT_DELIMITED_TABLE = "delimited-table"
FORMAT_STRUCTURED_DOCUMENT = "structured-document"
FORMAT_VECTOR_IMAGE = "vector-image"
ALL_FORMATS = frozenset({FORMAT_DELIMITED_TABLE, FORMAT_STRUCTURED_DOCUMENT,
                         FORMAT_VECTOR_IMAGE})

OPTIMAL_CLASS = "pareto-optimal"
DOMINATED_CLASS = "pareto-dominated"

FRONT_DOCUMENT_FORMAT = "greeneval.front/1"


@dataclass(frozen=True)
class ReportSpec:
    """What to report: objective columns, display labels, and rounding."""

    objectives: tuple[str, ...]
    objective_labels: tuple[str, ...]
    rounding: tuple[int, ...]
    formats: frozenset[str] = ALL_FORMATS

    def __post_init__(self):
        if not (len(self.objectives) == len(self.objective_labels)
                == len(self.rounding)):
            raise DimensionError(
                "objectives, objective_labels and rounding must have equal "
                f"lengths, got {len(self.objectives)}, "
                f"{len(self.objective_labels)}, {len(self.rounding)}")
        for d in self.rounding:
            if not isinstance(d, int) or d < 0:
                raise DomainError(f"rounding decimals must be integers >= 0, "
                                  f"got {d!r}")
        bad = set(self.formats) - ALL_FORMATS
        if bad:
            raise DomainError(f"unknown report format(s) {sorted(bad)}; "
                              f"known formats: {sorted(ALL_FORMATS)}")

    @classmethod
    def for_objectives(cls, keys: Sequence[str],
                       formats: frozenset[str] = ALL_FORMATS) -> "ReportSpec":
        """Build a spec from objective keys using their registry defaults."""
        defs = []
        for key in keys:
            if key not in OBJECTIVES:
                raise InputError(
                    f"unknown objective {key!r}; available objectives: "
                    f"{', '.join(sorted(OBJECTIVES))}")
            defs.append(OBJECTIVES[key])
        return cls(objectives=tuple(d.key for d in defs),
                   objective_labels=tuple(d.label for d in defs),
                   rounding=tuple(d.decimals for d in defs),
                   formats=formats)


def format_number(value: float, decimals: int) -> str:
    """Fixed-decimals rendering with round-half-to-even semantics."""
    return format(value, f".{decimals}f")


def _csv_cell(value: str) -> str:
    return '"' + value.replace('"', '""') + '"'


def emit_table(records: Sequence[RunRecord], spec: ReportSpec) -> str:
    """Delimited table: header row, then one row per record.

    Text fields are quoted; numeric cells are unquoted and rounded
    half-to-even at the spec's decimals. Absent values render as empty
    cells. Output is deterministic byte-for-byte.
    """
    lines = [",".join([_csv_cell("label")]
                      + [_csv_cell(label) for label in spec.objective_labels])]
    for record in records:
        cells = [_csv_cell(record.label)]
        for key, decimals in zip(spec.objectives, spec.rounding):
            value = objective_value(record, key)
            cells.append("" if value is None else format_number(value, decimals))
        lines.append(",".join(cells))
    return "\n".join(lines) + "\n"


def front_document(front: FrontResult, points: Sequence[EvalPoint],
                   spec: ReportSpec) -> str:
    """Structured JSON export of a FrontResult.

    Carries the labels, full-precision objective vectors, the optimal set
    and every dominated point's dominator list.
    """
    for p in points:
        if p.dim != len(spec.objective_labels):
            raise DimensionError(
                f"point {p.label!r} has {p.dim} objectives but the spec "
                f"labels {len(spec.objective_labels)}")
    status = _status_map(front, points)
    doc = {
        "format": FRONT_DOCUMENT_FORMAT,
        "objectives": list(spec.objective_labels),
        "points": [
            {
                "label": p.label,
                "objectives": list(p.objectives),
                "status": status[p.label],
            }
            for p in points
        ],
        "optimal": list(front.optimal),
        "dominated": [
            {"label": d.label, "dominated_by": list(d.dominated_by)}
            for d in front.dominated
        ],
    }
    return json.dumps(doc, indent=2, ensure_ascii=False) + "\n"


def _status_map(front: FrontResult, points: Sequence[EvalPoint]) -> dict[str, str]:
    status = {label: "optimal" for label in front.optimal}
    status.update({d.label: "dominated" for d in front.dominated})
    for p in points:
        if p.label not in status:
            raise InputError(f"front result does not cover point {p.label!r}")
    return status


# ---------------------------------------------------------------------------
# Scatter SVG
# ---------------------------------------------------------------------------

_SVG_WIDTH = 640
_SVG_HEIGHT = 480
_MARGIN_LEFT = 72
_MARGIN_RIGHT = 24
_MARGIN_TOP = 24
_MARGIN_BOTTOM = 56
_MARKER_RADIUS = 5

_SVG_STYLE = """\
    text { font-family: Helvetica, Arial, sans-serif; fill: #222222; }
    .axis { stroke: #444444; stroke-width: 1; }
    .tick-label { font-size: 11px; }
    .axis-label { font-size: 13px; }
    .point-label { font-size: 11px; }
    .pareto-optimal { fill: #1f77b4; }
    .pareto-dominated { fill: #d62728; }"""


def _nice_step(raw: float) -> float:
    magnitude = 10.0 ** math.floor(math.log10(raw))
    for mult in (1.0, 2.0, 5.0, 10.0):
        if mult * magnitude >= raw * (1.0 - 1e-12):
            return mult * magnitude
    return 10.0 * magnitude


def _ticks(lo: float, hi: float, target: int = 5) -> list[float]:
    span = hi - lo
    step = _nice_step(span / max(target - 1, 1))
    first = math.ceil(lo / step - 1e-9)
    last = math.floor(hi / step + 1e-9)
    return [k * step for k in range(first, last + 1)]


def _data_range(values: Sequence[float]) -> tuple[float, float]:
    lo, hi = min(values), max(values)
    if lo == hi:
        pad = max(1.0, abs(lo) * 0.1)
    else:
        pad = 0.08 * (hi - lo)
    return lo - pad, hi + pad


def emit_scatter(front: FrontResult, points: Sequence[EvalPoint],
                 spec: ReportSpec) -> str:
    """Two-objective scatter image with the Pareto front highlighted.

    Optimal markers carry class ``pareto-optimal``, dominated markers class
    ``pareto-dominated``; every point is labeled at a fixed offset. Axes
    are labeled from the spec. Output bytes depend only on the inputs.
    """
    points = list(points)
    if len(spec.objective_labels) != 2:
        raise DimensionError(
            f"scatter reports need exactly 2 objectives, spec has "
            f"{len(spec.objective_labels)}")
    for p in points:
        if p.dim != 2:
            raise DimensionError(
                f"scatter reports need 2-D points; {p.label!r} has {p.dim} "
                f"objectives")
    status = _status_map(front, points)

    plot_w = _SVG_WIDTH - _MARGIN_LEFT - _MARGIN_RIGHT
    plot_h = _SVG_HEIGHT - _MARGIN_TOP - _MARGIN_BOTTOM
    if points:
        x_lo, x_hi = _data_range([p.objectives[0] for p in points])
        y_lo, y_hi = _data_range([p.objectives[1] for p in points])
    else:
        x_lo, x_hi, y_lo, y_hi = 0.0, 1.0, 0.0, 1.0

    def px(v: float) -> float:
        return _MARGIN_LEFT + (v - x_lo) / (x_hi - x_lo) * plot_w

    def py(v: float) -> float:
        return _MARGIN_TOP + plot_h - (v - y_lo) / (y_hi - y_lo) * plot_h

    left, right = _MARGIN_LEFT, _MARGIN_LEFT + plot_w
    top, bottom = _MARGIN_TOP, _MARGIN_TOP + plot_h

    out: list[str] = []
    out.append(f'<svg xmlns="http://www.w3.org/2000/svg" width="{_SVG_WIDTH}" '
               f'height="{_SVG_HEIGHT}" '
               f'viewBox="0 0 {_SVG_WIDTH} {_SVG_HEIGHT}">')
    out.append(f"  <style>\n{_SVG_STYLE}\n  </style>")
    out.append(f'  <line class="axis" x1="{left}" y1="{bottom}" x2="{right}" '
               f'y2="{bottom}"/>')
    out.append(f'  <line class="axis" x1="{left}" y1="{top}" x2="{left}" '
               f'y2="{bottom}"/>')
    for t in _ticks(x_lo, x_hi):
        x = px(t)
        out.append(f'  <line class="axis" x1="{x:.2f}" y1="{bottom}" '
                   f'x2="{x:.2f}" y2="{bottom + 5}"/>')
        out.append(f'  <text class="tick-label" x="{x:.2f}" y="{bottom + 18}" '
                   f'text-anchor="middle">{escape(format(t, "g"))}</text>')
    for t in _ticks(y_lo, y_hi):
        y = py(t)
        out.append(f'  <line class="axis" x1="{left - 5}" y1="{y:.2f}" '
                   f'x2="{left}" y2="{y:.2f}"/>')
        out.append(f'  <text class="tick-label" x="{left - 8}" y="{y:.2f}" '
                   f'text-anchor="end" dominant-baseline="middle">'
                   f'{escape(format(t, "g"))}</text>')
    x_label, y_label = spec.objective_labels
    out.append(f'  <text class="axis-label" x="{left + plot_w / 2:.2f}" '
               f'y="{_SVG_HEIGHT - 14}" text-anchor="middle">'
               f'{escape(x_label)}</text>')
    out.append(f'  <text class="axis-label" x="18" y="{top + plot_h / 2:.2f}" '
               f'text-anchor="middle" '
               f'transform="rotate(-90 18 {top + plot_h / 2:.2f})">'
               f'{escape(y_label)}</text>')
    out.append('  <g class="points">')
    for p in points:
        cls = OPTIMAL_CLASS if status[p.label] == "optimal" else DOMINATED_CLASS
        cx, cy = px(p.objectives[0]), py(p.objectives[1])
        out.append(f'    <circle class="{cls}" cx="{cx:.2f}" cy="{cy:.2f}" '
                   f'r="{_MARKER_RADIUS}"/>')
        # Fixed label offset; determinism is preferred over collision avoidance.
        out.append(f'    <text class="point-label" x="{cx + 7:.2f}" '
                   f'y="{cy - 7:.2f}">{escape(p.label)}</text>')
    out.append("  </g>")
    out.append("</svg>")
    return "\n".join(out) + "\n"
