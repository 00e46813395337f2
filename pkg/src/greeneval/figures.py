"""Matplotlib rendering of evaluation spaces for human-facing reports.

The parseable, byte-stable artifact is the SVG from
:func:`greeneval.report.emit_scatter`; this module produces the
publication-style companion figures written by the ``report`` command.
Output is still kept reproducible: the SVG hash salt is pinned and no
creation date is embedded.
"""

from __future__ import annotations

from pathlib import Path
from typing import Sequence

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

from .core import EvalPoint
from .pareto import FrontResult
from .report import ReportSpec

OPTIMAL_COLOR = "#1f77b4"
DOMINATED_COLOR = "#d62728"

_HASH_SALT = "greeneval"


def _draw_panel(ax, front: FrontResult, points: Sequence[EvalPoint],
                spec: ReportSpec, title: str | None) -> None:
    dominated_labels = set(front.dominated_labels)
    for kind, color in (("optimal", OPTIMAL_COLOR), ("dominated", DOMINATED_COLOR)):
        xs, ys = [], []
        for p in points:
            if (p.label in dominated_labels) == (kind == "dominated"):
                xs.append(p.objectives[0])
                ys.append(p.objectives[1])
        ax.scatter(xs, ys, c=color, s=45, label=kind, zorder=3)
    for p in points:
        ax.annotate(p.label, (p.objectives[0], p.objectives[1]),
                    textcoords="offset points", xytext=(6, 6), fontsize=8)
    ax.set_xlabel(spec.objective_labels[0])
    ax.set_ylabel(spec.objective_labels[1])
    if title:
        ax.set_title(title)
    ax.grid(True, linewidth=0.4, alpha=0.5)
    ax.legend(loc="best")


def render_scatter_figure(front: FrontResult, points: Sequence[EvalPoint],
                          spec: ReportSpec, path: str | Path,
                          title: str | None = None) -> None:
    """Render one evaluation space to an SVG file."""
    render_front_panels([(front, list(points), spec, title)], path)


def render_front_panels(panels, path: str | Path) -> None:
    """Render one or more (front, points, spec, title) panels side by side."""
    plt.rcParams["svg.hashsalt"] = _HASH_SALT
    n = len(panels)
    fig, axes = plt.subplots(1, n, figsize=(6.0 * n, 4.6), squeeze=False)
    try:
        for ax, (front, points, spec, title) in zip(axes[0], panels):
            _draw_panel(ax, front, points, spec, title)
        fig.tight_layout()
        fig.savefig(str(path), format="svg", metadata={"Date": None})
    finally:
        plt.close(fig)
