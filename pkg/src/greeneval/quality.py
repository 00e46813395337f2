"""Normalization of subjective quality scores into minimization objectives.

A Mean Opinion Score in [1, 5] maps to the loss 1 - mos/5 in [0, 0.8]:
the higher the perceived quality, the closer the loss is to zero. The map
is strictly decreasing, so Pareto analysis is indifferent to whether the
user thinks in "maximize MOS" or "minimize loss" terms.
"""

from __future__ import annotations

from .core import DomainError, QualityScore

MOS_MIN = 1.0
MOS_MAX = 5.0
LOSS_MIN = 0.0
LOSS_MAX = 0.8


def normalize_mos(mos: float) -> QualityScore:
    """Turn a MOS in [1, 5] into a QualityScore with loss 1 - mos/5."""
    mos = float(mos)
    if not (MOS_MIN <= mos <= MOS_MAX):
        raise DomainError(f"mos must lie in [1,5], got {mos!r}")
    return QualityScore(mos=mos, normalized_loss=1.0 - mos / 5.0)


def denormalize(loss: float) -> float:
    """Invert the normalization: loss in [0, 0.8] back to a MOS.

    Written as 5 - 5*loss rather than 5*(1 - loss): the two agree to one
    ulp everywhere but only the former hits the scale endpoints exactly.
    """
    loss = float(loss)
    if not (LOSS_MIN <= loss <= LOSS_MAX):
        raise DomainError(f"normalized loss must lie in [0,0.8], got {loss!r}")
    return 5.0 - 5.0 * loss


def quality_from_loss(loss: float) -> QualityScore:
    """Build a QualityScore from an already-normalized loss value.

    The loss is kept at full input precision; the MOS is derived.
    """
    return QualityScore(mos=denormalize(loss), normalized_loss=float(loss))


#: Direction conversions for arbitrary quality metrics. The Pareto engine
#: minimizes everything, so higher-is-better metrics must be flipped on the
#: way in, either by negation or, for unit-interval scores, as 1 - x.
DIRECTIONS = ("minimize", "maximize", "unit_complement")


def to_minimization(value: float, direction: str) -> float:
    """Convert a metric value into a minimization objective.

    ``minimize`` passes the value through, ``maximize`` negates it, and
    ``unit_complement`` maps a score in [0, 1] to 1 - value. This is how
    quality measures other than MOS enter an evaluation space.
    """
    value = float(value)
    if direction == "minimize":
        return value
    if direction == "maximize":
        return -value
    if direction == "unit_complement":
        if not (0.0 <= value <= 1.0):
            raise DomainError(
                f"unit_complement needs a value in [0,1], got {value!r}")
        return 1.0 - value
    raise DomainError(f"unknown direction {direction!r}; expected one of "
                      f"{', '.join(DIRECTIONS)}")
