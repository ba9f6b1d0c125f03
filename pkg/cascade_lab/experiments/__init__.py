"""
Experiments built on the cascade and strategy layers: p grids, sweeps,
width scans, utility analysis and the small-graph oracle checks.

The CLI experiment classes live in `experiments.base` and
`experiments.commands` and are imported from there directly.
"""

from .analysis import (
    DEFAULT_THRESHOLD_FRACTION,
    CostKind,
    CostModel,
    UtilityParams,
    UtilityVerdict,
    WidthFit,
    WidthMeasure,
    expected_added_utility_over_prior,
    fit_power_law,
    gain_curve_fwhm,
    gain_curve_std_width,
    gain_curve_width,
    integrated_ratio,
    measure_above,
    optimization_region_width,
    optimization_time,
    peak_location,
    positive_utility_width,
    prior_average,
    utility_condition,
)
from .grid import PGrid
from .oracle import OracleReport, oracle_agreement_suite, picture_equivalence_suite
from .results import SweepPoint, SweepResult
from .sweep import (
    MRatioResult,
    StrategySpec,
    WidthMeasurement,
    local_label,
    m_robustness_ratio,
    sweep,
    width_scan,
)

__all__ = [
    "DEFAULT_THRESHOLD_FRACTION",
    "CostKind",
    "CostModel",
    "UtilityParams",
    "UtilityVerdict",
    "WidthFit",
    "WidthMeasure",
    "expected_added_utility_over_prior",
    "fit_power_law",
    "gain_curve_fwhm",
    "gain_curve_std_width",
    "gain_curve_width",
    "integrated_ratio",
    "measure_above",
    "optimization_region_width",
    "optimization_time",
    "peak_location",
    "positive_utility_width",
    "prior_average",
    "utility_condition",
    "PGrid",
    "OracleReport",
    "oracle_agreement_suite",
    "picture_equivalence_suite",
    "SweepPoint",
    "SweepResult",
    "MRatioResult",
    "StrategySpec",
    "WidthMeasurement",
    "local_label",
    "m_robustness_ratio",
    "sweep",
    "width_scan",
]
