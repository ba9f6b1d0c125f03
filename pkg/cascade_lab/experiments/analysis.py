"""
Derived quantities of sweeps.

- widths: measure of the p-range where the optimizer's marginal gain
  exceeds a fraction of n (`optimization_region_width`) or where the
  utility condition holds (`positive_utility_width`); the spread and
  the half-maximum width of the gain curve as alternatives
- `fit_power_law`: log-log least squares of width against size
- utility: cost models, the optimize-or-not condition, and expected
  added utility under a uniform prior on p
- `integrated_ratio`: prior-integrated performance of one strategy
  relative to another
"""

import logging
import math
from dataclasses import dataclass
from enum import Enum
from typing import Dict, List, Optional, Sequence

import numpy as np
from pydantic import BaseModel, Field
from scipy import stats
from scipy.integrate import trapezoid

from ..errors import DegenerateCostError, FitError, InputError, ParameterError
from ..strategies import StrategyName
from .results import SweepPoint, SweepResult

logger = logging.getLogger(__name__)

DEFAULT_THRESHOLD_FRACTION = 0.01
RANDOM_BENCHMARK_TIME = 1.0


def measure_above(ps: Sequence[float], values: Sequence[float], threshold: float, strict: bool = False) -> float:
    """
    Length of {p : v(p) >= threshold} (or > with strict) under the
    piecewise-linear interpolant of (ps, values).
    """
    p = np.asarray(ps, dtype=np.float64)
    v = np.asarray(values, dtype=np.float64)
    if p.size != v.size:
        raise InputError(f"{p.size} grid points but {v.size} values")
    if p.size < 2:
        raise InputError("need at least 2 grid points to measure a width")

    above = v > threshold if strict else v >= threshold
    p0, p1, v0, v1 = p[:-1], p[1:], v[:-1], v[1:]
    a0, a1 = above[:-1], above[1:]
    span = p1 - p0

    lengths = np.where(a0 & a1, span, 0.0)
    crossing = a0 != a1
    if crossing.any():
        with np.errstate(divide="ignore", invalid="ignore"):
            t = (threshold - v0[crossing]) / (v1[crossing] - v0[crossing])
        t = np.clip(np.nan_to_num(t), 0.0, 1.0)
        lengths[crossing] = np.where(a0[crossing], t, 1.0 - t) * span[crossing]
    return float(lengths.sum())


def optimization_region_width(
    sweep: SweepResult,
    threshold_fraction: float = DEFAULT_THRESHOLD_FRACTION,
    opt_label: Optional[str] = None,
    rand_label: Optional[str] = None
) -> float:
    """Measure of the p-range where opt - rand >= threshold_fraction * n."""
    if len(sweep.ps) < 2:
        raise InputError("need at least 2 grid points to measure a width")
    gain = sweep.marginal_gain(opt_label, rand_label)
    return measure_above(sweep.ps, gain, threshold_fraction * sweep.n)


class WidthMeasure(str, Enum):
    """How the width of the marginal-gain curve is read off a sweep."""
    THRESHOLD = "threshold"  # measure of {gain >= threshold_fraction * n}
    STD = "std"  # standard deviation of the gain curve as a distribution over p
    FWHM = "fwhm"  # full width at half maximum


def _gain_curve(sweep: SweepResult, opt_label: Optional[str], rand_label: Optional[str]):
    if len(sweep.ps) < 2:
        raise InputError("need at least 2 grid points to measure a width")
    return np.asarray(sweep.ps, dtype=np.float64), np.asarray(sweep.marginal_gain(opt_label, rand_label))


def curve_std_width(ps: Sequence[float], values: Sequence[float]) -> float:
    """
    Standard deviation of p under the density proportional to max(v, 0).

    Integrals use the trapezoid rule on the grid; a curve with no positive
    area has width 0.
    """
    p = np.asarray(ps, dtype=np.float64)
    w = np.clip(np.asarray(values, dtype=np.float64), 0.0, None)
    area = trapezoid(w, p)
    if area <= 0.0:
        return 0.0
    mean = trapezoid(p * w, p) / area
    variance = trapezoid((p - mean) ** 2 * w, p) / area
    return float(math.sqrt(max(variance, 0.0)))


def curve_fwhm(ps: Sequence[float], values: Sequence[float]) -> float:
    """Measure of {p : v(p) >= max(v) / 2}; 0 when the curve never rises above 0."""
    v = np.asarray(values, dtype=np.float64)
    peak = float(v.max()) if v.size else 0.0
    if peak <= 0.0:
        return 0.0
    return measure_above(ps, v, 0.5 * peak)


def gain_curve_std_width(sweep: SweepResult, opt_label: Optional[str] = None, rand_label: Optional[str] = None) -> float:
    """Standard deviation over p of the marginal-gain curve."""
    return curve_std_width(*_gain_curve(sweep, opt_label, rand_label))


def gain_curve_fwhm(sweep: SweepResult, opt_label: Optional[str] = None, rand_label: Optional[str] = None) -> float:
    """Full width at half maximum of the marginal-gain curve."""
    return curve_fwhm(*_gain_curve(sweep, opt_label, rand_label))


def gain_curve_width(
    sweep: SweepResult,
    measure: WidthMeasure = WidthMeasure.THRESHOLD,
    threshold_fraction: float = DEFAULT_THRESHOLD_FRACTION,
    opt_label: Optional[str] = None,
    rand_label: Optional[str] = None
) -> float:
    measure = WidthMeasure(measure)
    if measure == WidthMeasure.STD:
        return gain_curve_std_width(sweep, opt_label, rand_label)
    if measure == WidthMeasure.FWHM:
        return gain_curve_fwhm(sweep, opt_label, rand_label)
    return optimization_region_width(sweep, threshold_fraction, opt_label, rand_label)


@dataclass(frozen=True)
class WidthFit:
    """width = amplitude * size^(-exponent), fitted by OLS on logs."""
    sizes: List[float]
    widths: List[float]
    amplitude: float
    amplitude_error: float
    exponent: float
    exponent_error: float
    residuals: List[float]
    size_variable: str = "nodes"
    excluded: int = 0

    def predict(self, size: float) -> float:
        return self.amplitude * size ** (-self.exponent)

    def to_dict(self) -> dict:
        return {
            "sizes": list(self.sizes),
            "widths": list(self.widths),
            "amplitude": self.amplitude,
            "amplitude_error": self.amplitude_error,
            "exponent": self.exponent,
            "exponent_error": self.exponent_error,
            "residuals": list(self.residuals),
            "size_variable": self.size_variable,
            "excluded": self.excluded,
        }


def fit_power_law(sizes: Sequence[float], widths: Sequence[float], size_variable: str = "nodes") -> WidthFit:
    """
    Fit width = A * size^(-a).

    Non-positive widths (or sizes) cannot be logged; they are dropped with
    a warning. Uncertainties are the regression standard errors, the
    amplitude's carried through exp().

    Raises:
        FitError: fewer than 3 usable points
    """
    s = np.asarray(sizes, dtype=np.float64)
    w = np.asarray(widths, dtype=np.float64)
    if s.size != w.size:
        raise FitError(f"{s.size} sizes but {w.size} widths")
    usable = (s > 0) & (w > 0)
    excluded = int((~usable).sum())
    if excluded:
        logger.warning("excluding %d non-positive (size, width) pairs from the power-law fit", excluded)
    s, w = s[usable], w[usable]
    if s.size < 3:
        raise FitError(f"power-law fit needs at least 3 positive widths, have {s.size}")
    if np.unique(s).size < 2:
        raise FitError("power-law fit needs at least 2 distinct sizes")

    x, y = np.log(s), np.log(w)
    reg = stats.linregress(x, y)
    amplitude = math.exp(reg.intercept)
    residuals = y - (reg.intercept + reg.slope * x)
    return WidthFit(
        sizes=s.tolist(),
        widths=w.tolist(),
        amplitude=amplitude,
        amplitude_error=amplitude * float(reg.intercept_stderr),
        exponent=-float(reg.slope),
        exponent_error=float(reg.stderr),
        residuals=residuals.tolist(),
        size_variable=size_variable,
        excluded=excluded,
    )


class CostKind(str, Enum):
    NLOGN = "nlogn"
    LINEAR = "linear"
    CONSTANT = "constant"
    MEASURED_STEPS = "measured_steps"


class CostModel(BaseModel):
    """Running time T(n) charged to an optimizer; `c` is the constant (default k * M)."""
    kind: CostKind = CostKind.NLOGN
    c: Optional[float] = Field(default=None, gt=0)


DEFAULT_COST_MODELS = {
    StrategyName.HILL_CLIMB: CostModel(kind=CostKind.NLOGN),
    StrategyName.LOCAL: CostModel(kind=CostKind.CONSTANT),
}


class UtilityParams(BaseModel):
    """
    Value per influenced node, cost per time unit, and the cost model of
    each strategy (looked up by label, then by strategy name).
    """
    value_per_node: float = Field(default=1.0, gt=0)
    cost_per_time: float = Field(default=1e-3, ge=0)
    cost_models: Dict[str, CostModel] = Field(default_factory=dict)

    @property
    def cost_ratio(self) -> float:
        return self.cost_per_time / self.value_per_node

    def cost_model_for(self, label: str, strategy: StrategyName) -> CostModel:
        if label in self.cost_models:
            return self.cost_models[label]
        if strategy.value in self.cost_models:
            return self.cost_models[strategy.value]
        return DEFAULT_COST_MODELS.get(strategy, CostModel())


def optimization_time(
    model: CostModel,
    n: int,
    k: Optional[int] = None,
    mass: Optional[int] = None,
    measured_steps: Optional[int] = None
) -> float:
    """
    Running time T of an optimizer under a cost model (natural log for nlogn).

    The constant model uses c when set, else k * M.
    """
    if model.kind == CostKind.NLOGN:
        return n * math.log(n)
    if model.kind == CostKind.LINEAR:
        return float(n)
    if model.kind == CostKind.CONSTANT:
        if model.c is not None:
            return float(model.c)
        if k is None or mass is None:
            raise ParameterError("constant cost model needs c, or k and M")
        return float(k * mass)
    if measured_steps is None:
        raise ParameterError("measured_steps cost model needs the measured step count")
    return float(measured_steps)


def point_time(point: SweepPoint, params: UtilityParams, n: int, k: int) -> float:
    """T charged to one sweep point; the random benchmark always costs one unit."""
    if point.strategy == StrategyName.RANDOM:
        return RANDOM_BENCHMARK_TIME
    model = params.cost_model_for(point.label, point.strategy)
    return optimization_time(model, n, k=k, mass=point.mass, measured_steps=point.cost_steps)


def point_utility(point: SweepPoint, params: UtilityParams, n: int, k: int) -> float:
    """U = v * median - C * T."""
    return params.value_per_node * point.median - params.cost_per_time * point_time(point, params, n, k)


@dataclass(frozen=True)
class UtilityVerdict:
    optimize_worthwhile: bool
    lhs: float  # (opt - rand) / (T - 1)
    rhs: float  # C / v
    U_opt: float
    U_rand: float

    def to_dict(self) -> dict:
        return {
            "optimize_worthwhile": self.optimize_worthwhile,
            "lhs": self.lhs,
            "rhs": self.rhs,
            "U_opt": self.U_opt,
            "U_rand": self.U_rand,
        }


def utility_condition(opt: float, rand: float, T: float, C: float, v: float) -> UtilityVerdict:
    """
    Whether optimizing beats the random benchmark: (opt - rand) / (T - 1) > C / v.

    Raises:
        DegenerateCostError: T <= 1
    """
    if T <= 1:
        raise DegenerateCostError(f"optimization time T must exceed 1, got {T}")
    if v <= 0:
        raise ParameterError(f"value per node must be positive, got {v}")
    lhs = (opt - rand) / (T - 1)
    rhs = C / v
    return UtilityVerdict(
        optimize_worthwhile=lhs > rhs,
        lhs=lhs,
        rhs=rhs,
        U_opt=v * opt - C * T,
        U_rand=v * rand - C,
    )


def positive_utility_width(
    sweep: SweepResult,
    params: UtilityParams,
    opt_label: Optional[str] = None,
    rand_label: Optional[str] = None
) -> float:
    """Measure of the p-range where the utility condition holds for the optimizer."""
    opt_label = opt_label or sweep.opt_label
    rand = sweep.curve(rand_label or sweep.rand_label)
    opt_points = sweep.points_for(opt_label)
    margins = []
    for point, r in zip(opt_points, rand):
        verdict = utility_condition(
            point.median, r, point_time(point, params, sweep.n, sweep.k),
            params.cost_per_time, params.value_per_node,
        )
        margins.append(verdict.lhs - verdict.rhs)
    return measure_above(sweep.ps, margins, 0.0, strict=True)


def prior_average(ps: Sequence[float], values: Sequence[float]) -> float:
    """Mean of the piecewise-linear curve under a uniform prior on the grid's range."""
    p = np.asarray(ps, dtype=np.float64)
    if p.size < 2:
        raise InputError("need at least 2 grid points to integrate")
    return float(trapezoid(np.asarray(values, dtype=np.float64), p) / (p[-1] - p[0]))


def expected_added_utility_over_prior(
    sweep: SweepResult,
    params: UtilityParams,
    labels: Optional[Sequence[str]] = None,
    rand_label: Optional[str] = None
) -> Dict[str, float]:
    """
    Per strategy, E_p[(U_strategy(p) - U_rand(p)) / (v * n)] under a
    uniform prior on p.
    """
    rand_label = rand_label or sweep.rand_label
    u_rand = np.asarray([point_utility(pt, params, sweep.n, sweep.k) for pt in sweep.points_for(rand_label)])
    labels = labels or [label for label in sweep.labels() if label != rand_label]
    scale = params.value_per_node * sweep.n
    result = {}
    for label in labels:
        u = np.asarray([point_utility(pt, params, sweep.n, sweep.k) for pt in sweep.points_for(label)])
        result[label] = prior_average(sweep.ps, (u - u_rand) / scale)
    return result


def integrated_ratio(sweep: SweepResult, label: str, reference: Optional[str] = None) -> float:
    """Prior-integrated median influence of `label` over that of `reference` (default: the optimizer)."""
    reference = reference or sweep.opt_label
    denominator = trapezoid(sweep.curve(reference), sweep.ps)
    if denominator <= 0:
        raise InputError(f"reference curve {reference!r} integrates to {denominator}")
    return float(trapezoid(sweep.curve(label), sweep.ps) / denominator)


def peak_location(sweep: SweepResult, opt_label: Optional[str] = None, rand_label: Optional[str] = None) -> float:
    """p of the largest marginal gain (first one on ties)."""
    gain = sweep.marginal_gain(opt_label, rand_label)
    return float(sweep.ps[int(np.argmax(gain))])
