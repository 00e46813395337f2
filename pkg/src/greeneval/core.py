"""Shared domain types and their invariants.

Everything here is a plain immutable value object: no I/O, no algorithms
beyond construction-time checks. Energies are kept in their native units
(kWh for training, Wh for generation) and the unit is part of the field
name; conversions happen only at display or analysis-assembly time.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

WH_PER_KWH = 1000.0

# Maximum drift tolerated between a stored normalized loss and 1 - mos/5.
LOSS_CONSISTENCY_TOL = 1e-12


# ---------------------------------------------------------------------------
# Errors
# ---------------------------------------------------------------------------

class ToolError(Exception):
    """Base class for all errors raised by this package.

    Every subclass carries a stable machine-greppable ``code`` that the CLI
    prefixes to its single-line error output.
    """

    code = "E_ERROR"


class DomainError(ToolError):
    """An argument value lies outside the operation's domain."""

    code = "E_DOMAIN"


class DimensionError(ToolError):
    """Objective vectors or axis specs of mismatched dimensionality."""

    code = "E_DIMENSION"


class ParseError(ToolError):
    """A structured text document could not be parsed."""

    code = "E_PARSE"

    def __init__(self, message: str, *, source: str | None = None,
                 line: int | None = None, column: int | None = None):
        self.source = source
        self.line = line
        self.column = column
        where = ""
        if source is not None:
            where = source
        if line is not None:
            where += f":{line}"
            if column is not None:
                where += f":{column}"
        super().__init__(f"{where}: {message}" if where else message)


class DuplicateError(ToolError):
    """Two entries claim the same identifier."""

    code = "E_DUPLICATE"


class InputError(ToolError):
    """An input dataset is structurally valid but semantically unusable."""

    code = "E_INPUT"


class UnknownHardwareError(ToolError):
    """A record names hardware that the catalog cannot resolve."""

    code = "E_HARDWARE"


class UnsupportedLayerError(ToolError):
    """A layer kind or layer feature outside the supported counting set."""

    code = "E_UNSUPPORTED_LAYER"


class ShapeError(ToolError):
    """A layer cannot be applied to the given input shape."""

    code = "E_SHAPE"


class InsufficientDataError(ToolError):
    """Not enough samples or marks to perform the requested computation."""

    code = "E_INSUFFICIENT_DATA"


class MalformedTraceError(ToolError):
    """A power trace violates its ordering or sign invariants."""

    code = "E_MALFORMED_TRACE"


class OutputExistsError(ToolError):
    """An output file already exists and overwriting was not requested."""

    code = "E_EXISTS"


# ---------------------------------------------------------------------------
# Value objects
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class HardwareSpec:
    """An accelerator model with its vendor maximum power draw.

    ``max_power_watts`` is the per-device specification maximum;
    ``count`` is the number of identical devices used together.
    """

    name: str
    max_power_watts: float
    count: int = 1


@dataclass(frozen=True)
class HardwareRef:
    """Hardware as named in a records file, before catalog resolution.

    Carries no power figure; resolving against a catalog turns it into a
    full :class:`HardwareSpec`.
    """

    name: str
    count: int = 1


@dataclass(frozen=True)
class QualityScore:
    """A subjective quality rating and its minimization form.

    ``mos`` is a Mean Opinion Score in [1, 5]; ``normalized_loss`` is
    1 - mos/5, so perfect quality maps to 0 and the scale floor to 0.8.
    Construct through :func:`greeneval.quality.normalize_mos` or
    :func:`greeneval.quality.quality_from_loss`, which enforce the domain.
    """

    mos: float
    normalized_loss: float


class EstimateMethod(enum.Enum):
    """How an energy figure was obtained. Estimates of different methods
    are never silently mixed in reports."""

    WORST_CASE_SPEC = "worst_case_spec"
    MEASURED_INTEGRATED = "measured_integrated"
    MEASURED_EXTRAPOLATED = "measured_extrapolated"


@dataclass(frozen=True)
class EnergyEstimate:
    """An energy amount tagged with the method that produced it."""

    kwh: float
    method: EstimateMethod

    def __post_init__(self):
        if not isinstance(self.method, EstimateMethod):
            raise DomainError(f"method must be an EstimateMethod, got {self.method!r}")
        if not math.isfinite(self.kwh) or self.kwh < 0:
            raise DomainError(f"energy must be finite and >= 0 kWh, got {self.kwh!r}")

    @property
    def wh(self) -> float:
        return self.kwh * WH_PER_KWH


@dataclass(frozen=True)
class CarbonIntensity:
    """Grams of CO2-equivalent per kWh for some electricity region.

    Always user-supplied; this package ships no intensity values as
    authoritative.
    """

    region: str
    g_co2_per_kwh: float

    def __post_init__(self):
        if not math.isfinite(self.g_co2_per_kwh) or self.g_co2_per_kwh < 0:
            raise DomainError(
                f"g_co2_per_kwh must be finite and >= 0, got {self.g_co2_per_kwh!r}")


@dataclass(frozen=True)
class PowerTrace:
    """A time-ordered series of instantaneous power samples.

    ``samples`` is a sequence of ``(t_seconds, watts)`` pairs with strictly
    increasing timestamps and nonnegative power. Integration additionally
    requires at least two samples; that is checked by the integrator, not
    here, so partially collected traces remain representable.
    """

    samples: tuple[tuple[float, float], ...]

    def __post_init__(self):
        normalized = tuple((float(t), float(w)) for t, w in self.samples)
        object.__setattr__(self, "samples", normalized)
        prev_t = None
        for i, (t, w) in enumerate(normalized):
            if not (math.isfinite(t) and math.isfinite(w)):
                raise MalformedTraceError(f"sample {i} is not finite: ({t!r}, {w!r})")
            if t < 0:
                raise MalformedTraceError(f"sample {i} has negative timestamp {t!r}")
            if w < 0:
                raise MalformedTraceError(f"sample {i} has negative power {w!r} W")
            if prev_t is not None and t <= prev_t:
                raise MalformedTraceError(
                    f"timestamps must be strictly increasing: sample {i} "
                    f"(t={t!r}) does not follow t={prev_t!r}")
            prev_t = t

    def __len__(self) -> int:
        return len(self.samples)

    @property
    def span_seconds(self) -> tuple[float, float]:
        if not self.samples:
            raise InsufficientDataError("empty trace has no time span")
        return self.samples[0][0], self.samples[-1][0]


@dataclass(frozen=True)
class EvalPoint:
    """A labeled point in a k-objective minimization space.

    All objective components must be finite; NaN or infinite values are
    rejected here rather than ordered arbitrarily later.
    """

    label: str
    objectives: tuple[float, ...]

    def __post_init__(self):
        values = tuple(float(v) for v in self.objectives)
        object.__setattr__(self, "objectives", values)
        if len(values) < 1:
            raise DomainError(f"point {self.label!r} needs at least one objective")
        for i, v in enumerate(values):
            if not math.isfinite(v):
                raise DomainError(
                    f"point {self.label!r} objective {i} is not finite: {v!r}")

    @property
    def dim(self) -> int:
        return len(self.objectives)


@dataclass(frozen=True)
class RunRecord:
    """One model configuration's evaluation record.

    Optional fields are explicitly absent (``None``), never sentinel
    numbers. ``config_meta`` holds opaque configuration tags (text only,
    never interpreted numerically). ``train_hours`` may be absent for
    records whose training energy was measured rather than estimated.
    """

    label: str
    hardware: HardwareRef | None = None
    config_meta: dict[str, str] = field(default_factory=dict)
    train_hours: float | None = None
    quality: QualityScore | None = None
    e_train_kwh: float | None = None
    e_train_method: str | None = None
    e_gen_wh: float | None = None
    gen_workload_desc: str = ""
    param_count: int | None = None


def validate_record(record: RunRecord) -> list[str]:
    """Audit a record against its invariants.

    Returns an empty list exactly when every invariant holds; otherwise one
    human-readable violation per broken rule, each naming the field.
    Violations are returned, not raised. Label uniqueness is a dataset-level
    rule checked by the records loader, not here.
    """
    violations: list[str] = []
    if not record.label or not record.label.strip():
        violations.append("label must be non-empty")
    if record.hardware is not None:
        if not record.hardware.name or not record.hardware.name.strip():
            violations.append("hardware name must be non-empty")
        if not isinstance(record.hardware.count, int) or record.hardware.count < 1:
            violations.append("hardware count must be an integer >= 1")
    if record.train_hours is not None:
        if not math.isfinite(record.train_hours) or record.train_hours < 0:
            violations.append("train_hours must be >= 0")
    if record.e_train_kwh is not None:
        if not math.isfinite(record.e_train_kwh) or record.e_train_kwh < 0:
            violations.append("e_train_kwh must be >= 0")
    if record.e_gen_wh is not None:
        if not math.isfinite(record.e_gen_wh) or record.e_gen_wh < 0:
            violations.append("e_gen_wh must be >= 0")
    if record.param_count is not None:
        if not isinstance(record.param_count, int) or record.param_count < 0:
            violations.append("param_count must be an integer >= 0")
    if record.quality is not None:
        q = record.quality
        if not (1.0 <= q.mos <= 5.0):
            violations.append("mos must lie in [1,5]")
        if not (0.0 <= q.normalized_loss <= 0.8):
            violations.append("normalized_loss must lie in [0,0.8]")
        elif abs(q.normalized_loss - (1.0 - q.mos / 5.0)) > LOSS_CONSISTENCY_TOL:
            violations.append("normalized_loss must equal 1 - mos/5")
    return violations
