"""Pareto dominance and front extraction over k-objective minimization points.

Dominance is strict: ``a`` dominates ``b`` when a is no worse in every
objective and strictly better in at least one. Points with identical
coordinates therefore never dominate each other and both stay on the
front.

Front extraction uses a sort-then-sweep fast path for two objectives
(O(n log n) for the partition) and a pairwise scan for any other
dimensionality. Dominated points carry the exhaustive list of their
dominators, not just one witness, so reports can explain why a candidate
fell off the front. All output ordering follows input order, making
results independent of any internal evaluation schedule.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .core import DimensionError, EvalPoint, InputError


@dataclass(frozen=True)
class DominatedPoint:
    """A dominated point's label and every point that dominates it."""

    label: str
    dominated_by: tuple[str, ...]


@dataclass(frozen=True)
class FrontResult:
    """Partition of an evaluation space into optimal and dominated points."""

    optimal: tuple[str, ...]
    dominated: tuple[DominatedPoint, ...]

    @property
    def dominated_labels(self) -> tuple[str, ...]:
        return tuple(d.label for d in self.dominated)


def dominates(a: EvalPoint, b: EvalPoint) -> bool:
    """True when ``a`` strictly Pareto-dominates ``b`` (minimization)."""
    if a.dim != b.dim:
        raise DimensionError(
            f"points {a.label!r} and {b.label!r} have different objective "
            f"counts ({a.dim} vs {b.dim})")
    strictly_better = False
    for av, bv in zip(a.objectives, b.objectives):
        if av > bv:
            return False
        if av < bv:
            strictly_better = True
    return strictly_better


def _validate_points(points: Sequence[EvalPoint]) -> None:
    seen: set[str] = set()
    for p in points:
        if p.label in seen:
            raise InputError(f"duplicate point label {p.label!r}")
        seen.add(p.label)
    dims = {p.dim for p in points}
    if len(dims) > 1:
        raise DimensionError(
            f"all points must share one objective count, got {sorted(dims)}")


def _optimal_mask_sweep_2d(points: Sequence[EvalPoint]) -> list[bool]:
    # Sort by (f1 asc, f2 asc); a point is optimal iff its f2 is strictly
    # below the best f2 of every strictly-smaller-f1 point and equals the
    # minimum f2 within its own f1 group.
    order = sorted(range(len(points)),
                   key=lambda i: (points[i].objectives[0],
                                  points[i].objectives[1], i))
    optimal = [False] * len(points)
    best_prev = None
    pos = 0
    while pos < len(order):
        f1 = points[order[pos]].objectives[0]
        group = []
        while pos < len(order) and points[order[pos]].objectives[0] == f1:
            group.append(order[pos])
            pos += 1
        group_min = points[group[0]].objectives[1]
        for i in group:
            f2 = points[i].objectives[1]
            optimal[i] = (f2 == group_min) and (best_prev is None or f2 < best_prev)
        if best_prev is None or group_min < best_prev:
            best_prev = group_min
    return optimal


def _optimal_mask_pairwise(points: Sequence[EvalPoint]) -> list[bool]:
    n = len(points)
    optimal = [True] * n
    for i in range(n):
        for j in range(n):
            if i != j and dominates(points[j], points[i]):
                optimal[i] = False
                break
    return optimal


def pareto_front(points: Sequence[EvalPoint]) -> FrontResult:
    """Partition points into the Pareto-optimal set and the dominated rest.

    Labels must be unique and all points must share one objective count.
    Empty input yields an empty (valid) result. Classification always uses
    the full-precision inputs; any display rounding happens downstream.
    """
    points = list(points)
    _validate_points(points)
    if not points:
        return FrontResult(optimal=(), dominated=())
    if points[0].dim == 2:
        optimal = _optimal_mask_sweep_2d(points)
    else:
        optimal = _optimal_mask_pairwise(points)
    dominated = []
    for i, p in enumerate(points):
        if optimal[i]:
            continue
        dominators = tuple(q.label for q in points if dominates(q, p))
        dominated.append(DominatedPoint(label=p.label, dominated_by=dominators))
    return FrontResult(
        optimal=tuple(p.label for i, p in enumerate(points) if optimal[i]),
        dominated=tuple(dominated),
    )


def dominance_matrix(points: Sequence[EvalPoint]) -> list[list[bool]]:
    """Full pairwise dominance matrix: cell [i][j] = dominates(p_i, p_j).

    The diagonal is always False and no pair is ever True both ways.
    """
    points = list(points)
    _validate_points(points)
    return [[i != j and dominates(points[i], points[j])
             for j in range(len(points))]
            for i in range(len(points))]
