"""greeneval: joint quality/energy evaluation of ML models.

Estimate or ingest training/generation energy, normalize quality scores,
count parameters and floating-point operations, and classify model
configurations by Pareto dominance over any set of minimization
objectives.
"""

__version__ = "0.1.0"

from .core import (
    CarbonIntensity,
    EnergyEstimate,
    EstimateMethod,
    EvalPoint,
    HardwareRef,
    HardwareSpec,
    PowerTrace,
    QualityScore,
    RunRecord,
    ToolError,
    validate_record,
)
from .catalog import Catalog, CatalogEntry, load_catalog, seed_catalog
from .energy import carbon_g, estimate_vs_measured, worst_case_kwh
from .flops import LayerSpec, TensorShape, layer_fpo, layer_params, \
    output_shape, stack_totals
from .pareto import FrontResult, dominance_matrix, dominates, pareto_front
from .power import EpochMark, extrapolate_training, integrate_trace, parse_trace
from .quality import denormalize, normalize_mos, quality_from_loss, \
    to_minimization

__all__ = [
    "__version__",
    "CarbonIntensity",
    "Catalog",
    "CatalogEntry",
    "EnergyEstimate",
    "EpochMark",
    "EstimateMethod",
    "EvalPoint",
    "FrontResult",
    "HardwareRef",
    "HardwareSpec",
    "LayerSpec",
    "PowerTrace",
    "QualityScore",
    "RunRecord",
    "TensorShape",
    "ToolError",
    "carbon_g",
    "denormalize",
    "dominance_matrix",
    "dominates",
    "estimate_vs_measured",
    "extrapolate_training",
    "integrate_trace",
    "layer_fpo",
    "layer_params",
    "load_catalog",
    "normalize_mos",
    "output_shape",
    "pareto_front",
    "parse_trace",
    "quality_from_loss",
    "seed_catalog",
    "stack_totals",
    "to_minimization",
    "validate_record",
    "worst_case_kwh",
]
