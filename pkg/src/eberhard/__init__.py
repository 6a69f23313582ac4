"""Modeling and analysis of Eberhard-type Bell tests with drifting production rates."""

from .counts import SEQUENCE, CountsBlock, RoundData, StructureError, accumulate, make_round
from .drift import (
    DEFAULT_PATH,
    SMALLEST,
    BaselinePolicy,
    CorrectionFactors,
    NormalizationPath,
    adversarial_series,
    compute_factors,
    j_prime,
    normalize_round,
    normalize_total,
)
from .inequality import (
    SeriesStats,
    eberhard_j,
    poisson_relative_fluctuation,
    series_stats,
    singles_deviations,
)
from .model import (
    PUBLISHED_CONFIG,
    ExperimentConfig,
    ParameterError,
    StateParams,
    build_state,
    compare_model,
    predict_counts,
)

__version__ = "0.1.0"

__all__ = [
    "SEQUENCE",
    "CountsBlock",
    "RoundData",
    "StructureError",
    "accumulate",
    "make_round",
    "DEFAULT_PATH",
    "SMALLEST",
    "BaselinePolicy",
    "CorrectionFactors",
    "NormalizationPath",
    "adversarial_series",
    "compute_factors",
    "j_prime",
    "normalize_round",
    "normalize_total",
    "SeriesStats",
    "eberhard_j",
    "poisson_relative_fluctuation",
    "series_stats",
    "singles_deviations",
    "PUBLISHED_CONFIG",
    "ExperimentConfig",
    "ParameterError",
    "StateParams",
    "build_state",
    "compare_model",
    "predict_counts",
]
