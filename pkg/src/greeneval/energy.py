"""Worst-case training energy and carbon emissions from hardware specs.

The worst-case model charges every device its specification maximum power
for 100% of the wall-clock duration: kWh = W x devices x hours / 1000.
This deliberately overestimates idle phases; the measured path in
:mod:`greeneval.power` exists for accuracy. All arithmetic is plain double
precision; display rounding happens only in the report module.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .core import (
    CarbonIntensity,
    DomainError,
    EnergyEstimate,
    EstimateMethod,
    HardwareSpec,
)


def worst_case_kwh(hw: HardwareSpec, hours: float) -> EnergyEstimate:
    """Worst-case training energy for ``hours`` of wall-clock time.

    kwh = max_power_watts x count x hours / 1000, tagged worst_case_spec.
    """
    if hw.max_power_watts is None or not math.isfinite(hw.max_power_watts) \
            or hw.max_power_watts <= 0:
        raise DomainError(
            f"hardware {hw.name!r}: max_power_watts must be > 0, "
            f"got {hw.max_power_watts!r}")
    if not isinstance(hw.count, int) or hw.count < 1:
        raise DomainError(f"hardware {hw.name!r}: count must be an integer >= 1")
    hours = float(hours)
    if not math.isfinite(hours) or hours < 0:
        raise DomainError(f"hours must be finite and >= 0, got {hours!r}")
    kwh = hw.max_power_watts * hw.count * hours / 1000.0
    return EnergyEstimate(kwh=kwh, method=EstimateMethod.WORST_CASE_SPEC)


def carbon_g(estimate: EnergyEstimate, intensity: CarbonIntensity) -> float:
    """Grams of CO2-equivalent: kWh times the region's g/kWh intensity."""
    return estimate.kwh * intensity.g_co2_per_kwh


@dataclass(frozen=True)
class EnergyComparison:
    """Measured-vs-estimated outcome for one training run.

    ``relative`` is the delta as a fraction of the estimate; it is None
    (undefined) when the estimate is zero, since no meaningful ratio
    exists there.
    """

    estimated_kwh: float
    measured_kwh: float
    delta_kwh: float
    relative: float | None
    estimate_method: EstimateMethod
    measured_method: EstimateMethod


def estimate_vs_measured(estimate: EnergyEstimate,
                         measured: EnergyEstimate) -> EnergyComparison:
    """Compare a measured energy figure against an estimate.

    delta = measured - estimate; relative = delta / estimate (None when the
    estimate is zero). Both methods are carried along so reports can never
    silently mix figures of different provenance.
    """
    delta = measured.kwh - estimate.kwh
    relative = delta / estimate.kwh if estimate.kwh > 0 else None
    return EnergyComparison(
        estimated_kwh=estimate.kwh,
        measured_kwh=measured.kwh,
        delta_kwh=delta,
        relative=relative,
        estimate_method=estimate.method,
        measured_method=measured.method,
    )
