"""
Parameter sweeps.

`sweep` runs every strategy variant at every p of a grid and evaluates
the chosen seeds with fresh realizations. At one p all variants are
evaluated on the same realizations, so their differences carry no
evaluation noise between them; the random benchmark draws a new seed
set at every p.

`width_scan` repeats sweeps over network sizes and instances, and
`m_robustness_ratio` compares local optimization at several sub-network
masses with hill-climbing.
"""

import logging
import time
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Sequence

import numpy as np

from ..audit import RunAction
from ..cascade import CascadeParams, Picture, sample_edge_probabilities
from ..errors import ParameterError
from ..generators import GeneratorSpec, generate
from ..graph import Graph
from ..influence import estimate
from ..percolation import critical_point_from_degrees
from ..rng import EVALUATION_STREAM, INSTANCE_STREAM, NOISE_STREAM, SELECTION_STREAM, derive_seed
from ..strategies import StrategyName, StrategyRegistry
from .analysis import (
    DEFAULT_THRESHOLD_FRACTION,
    UtilityParams,
    WidthMeasure,
    gain_curve_width,
    integrated_ratio,
    positive_utility_width,
)
from .grid import PGrid
from .results import SweepPoint, SweepResult

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class StrategySpec:
    """A strategy variant in a sweep: name, output label and hyper-parameters."""
    name: StrategyName
    label: Optional[str] = None
    mass: Optional[int] = None
    trials_per_eval: Optional[int] = None

    def __post_init__(self):
        object.__setattr__(self, "name", StrategyName(self.name))

    @property
    def display_label(self) -> str:
        return self.label or self.name.value

    def hyper(self) -> Dict[str, Any]:
        if self.name == StrategyName.RANDOM:
            return {}
        hyper: Dict[str, Any] = {"trials_per_eval": self.trials_per_eval}
        if self.name == StrategyName.LOCAL:
            hyper["M"] = self.mass
        return hyper


DEFAULT_STRATEGIES = (
    StrategySpec(StrategyName.HILL_CLIMB),
    StrategySpec(StrategyName.RANDOM),
    StrategySpec(StrategyName.LOCAL, mass=100),
)


def network_descriptor(g: Graph, source: str = "graph", spec: Optional[GeneratorSpec] = None) -> Dict[str, Any]:
    descriptor: Dict[str, Any] = {"source": source, "n": g.n, "edge_count": g.edge_count}
    if spec is not None:
        descriptor.update(family=spec.family.value, rng_seed=spec.rng_seed)
    return descriptor


def sweep(
    g: Graph,
    grid: PGrid,
    k: int,
    strategies: Sequence[StrategySpec] = DEFAULT_STRATEGIES,
    trials: int = 20_000,
    rng_seed: int = 0,
    noise_sigma: float = 0.0,
    picture: Picture = Picture.STATIC,
    registry: Optional[StrategyRegistry] = None,
    workers: Optional[int] = 1,
    network: Optional[Dict[str, Any]] = None
) -> SweepResult:
    """
    Run and evaluate every strategy variant at every grid point.

    Args:
        g: Network
        grid: Contagion probabilities
        k: Seed-set size
        strategies: Variants to run; labels must be distinct
        trials: Evaluation realizations per (p, variant)
        rng_seed: Root seed of the whole sweep
        noise_sigma: Per-edge Gaussian noise on p (sampled once per p)
        picture: Evaluation picture
        registry: Strategy registry (its ledger records every selection)
        workers: Process count for evaluations and hill-climbing
        network: Descriptor echoed into the result

    Returns:
        SweepResult with one point per (p, variant)
    """
    labels = [s.display_label for s in strategies]
    if len(set(labels)) != len(labels):
        raise ParameterError(f"strategy labels must be distinct, got {labels}")
    registry = registry or StrategyRegistry(workers=workers)
    ledger = registry.ledger

    points: List[SweepPoint] = []
    for i, p in enumerate(grid):
        start = time.time()
        g_p = g
        if noise_sigma > 0 and g.edge_probabilities is None:
            g_p = sample_edge_probabilities(g, p, noise_sigma, derive_seed(rng_seed, NOISE_STREAM, i))
        select_params = CascadeParams(p=p, noise_sigma=noise_sigma, rng_seed=derive_seed(rng_seed, SELECTION_STREAM, i))
        eval_params = CascadeParams(
            p=p, noise_sigma=noise_sigma, picture=picture, rng_seed=derive_seed(rng_seed, EVALUATION_STREAM, i)
        )

        for j, spec in enumerate(strategies):
            selection = registry.select(
                spec.name, g_p, k, select_params,
                rng_seed=derive_seed(rng_seed, SELECTION_STREAM, i, j),
                label=spec.display_label,
                **spec.hyper(),
            )
            result = estimate(g_p, selection.seeds, eval_params, trials, workers=workers)
            point = SweepPoint(
                p=p,
                label=spec.display_label,
                strategy=spec.name,
                median=result.median,
                mean=result.mean,
                se=result.std_error,
                cost_steps=selection.cost_steps,
                seeds=selection.seeds,
                mass=selection.wall_params.get("M"),
            )
            points.append(point)
            ledger.log(
                action=RunAction.SWEEP_POINT,
                component="sweep",
                payload_out={"p": p, "strategy": point.label, "median": point.median, "mean": point.mean},
            )
        logger.info("p=%.4f done in %.1fs (%d/%d)", p, time.time() - start, i + 1, len(grid))

    return SweepResult(
        ps=grid.points,
        points=points,
        k=k,
        n=g.n,
        edge_count=g.edge_count,
        trials=trials,
        rng_seed=rng_seed,
        network=network or network_descriptor(g),
    )


@dataclass
class WidthMeasurement:
    """Optimization-region width at one network size, over several instances."""
    n: int
    size: float  # n, or the mean edge count when sizes are measured in edges
    width: float
    width_std: float
    widths: List[float]
    edge_counts: List[int]
    utility_width: Optional[float] = None
    utility_width_std: Optional[float] = None
    utility_widths: List[float] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "size": self.size,
            "width": self.width,
            "width_std": self.width_std,
            "widths": list(self.widths),
            "edge_counts": list(self.edge_counts),
            "utility_width": self.utility_width,
            "utility_width_std": self.utility_width_std,
            "utility_widths": list(self.utility_widths),
        }


def _std(values: Sequence[float]) -> float:
    return float(np.std(values, ddof=1)) if len(values) > 1 else 0.0


def width_scan(
    template: GeneratorSpec,
    sizes: Sequence[int],
    instances: int,
    k: int,
    trials: int,
    rng_seed: int = 0,
    strategies: Sequence[StrategySpec] = (StrategySpec(StrategyName.HILL_CLIMB), StrategySpec(StrategyName.RANDOM)),
    grid: Optional[PGrid] = None,
    threshold_fraction: float = DEFAULT_THRESHOLD_FRACTION,
    measure: WidthMeasure = WidthMeasure.THRESHOLD,
    size_variable: str = "nodes",
    utility: Optional[UtilityParams] = None,
    noise_sigma: float = 0.0,
    picture: Picture = Picture.STATIC,
    registry: Optional[StrategyRegistry] = None,
    workers: Optional[int] = 1
) -> List[WidthMeasurement]:
    """
    Gain-curve width per network size, averaged over instances.

    `measure` picks the width: the threshold region (default), the
    standard deviation or the full width at half maximum of the
    marginal-gain curve.

    Each instance is a fresh network from `template` resized to n. Without
    an explicit grid each instance is swept on the refined grid around its
    own degree-based critical point.
    """
    if instances < 1:
        raise ParameterError(f"instances must be at least 1, got {instances}")
    if size_variable not in ("nodes", "edges"):
        raise ParameterError(f"size_variable must be 'nodes' or 'edges', got {size_variable!r}")

    measurements = []
    for n in sizes:
        widths, utility_widths, edge_counts = [], [], []
        for inst in range(instances):
            spec = template.with_size(n, derive_seed(rng_seed, INSTANCE_STREAM, n, inst))
            g = generate(spec)
            instance_grid = grid or PGrid.around_critical(critical_point_from_degrees(g.degrees))
            result = sweep(
                g, instance_grid, k, strategies, trials,
                rng_seed=derive_seed(rng_seed, INSTANCE_STREAM, n, inst, 1),
                noise_sigma=noise_sigma,
                picture=picture,
                registry=registry,
                workers=workers,
                network=network_descriptor(g, "generator", spec),
            )
            widths.append(gain_curve_width(result, measure, threshold_fraction))
            if utility is not None:
                utility_widths.append(positive_utility_width(result, utility))
            edge_counts.append(g.edge_count)
            logger.info("n=%d instance %d: width %.4f", n, inst, widths[-1])

        measurements.append(WidthMeasurement(
            n=n,
            size=float(n) if size_variable == "nodes" else float(np.mean(edge_counts)),
            width=float(np.mean(widths)),
            width_std=_std(widths),
            widths=widths,
            edge_counts=edge_counts,
            utility_width=float(np.mean(utility_widths)) if utility_widths else None,
            utility_width_std=_std(utility_widths) if utility_widths else None,
            utility_widths=utility_widths,
        ))
    return measurements


@dataclass
class MRatioResult:
    """Prior-integrated local/hill-climbing performance per sub-network mass."""
    ratios: Dict[int, float]
    sweep: SweepResult

    def to_dict(self) -> dict:
        return {"ratios": {str(m): r for m, r in self.ratios.items()}}


def local_label(mass: int) -> str:
    return f"local_M{mass}"


def m_robustness_ratio(
    g: Graph,
    M_values: Sequence[int],
    k: int,
    grid: PGrid,
    trials: int,
    rng_seed: int = 0,
    trials_per_eval: Optional[int] = None,
    noise_sigma: float = 0.0,
    registry: Optional[StrategyRegistry] = None,
    workers: Optional[int] = 1,
    network: Optional[Dict[str, Any]] = None
) -> MRatioResult:
    """
    For each M, the integral over p of local_M's median influence divided
    by that of hill-climbing, from one shared sweep.
    """
    if not M_values or min(M_values) < 1:
        raise ParameterError(f"M values must be at least 1, got {list(M_values)}")
    strategies = [StrategySpec(StrategyName.HILL_CLIMB, trials_per_eval=trials_per_eval)]
    strategies += [
        StrategySpec(StrategyName.LOCAL, label=local_label(m), mass=m, trials_per_eval=trials_per_eval)
        for m in M_values
    ]
    result = sweep(
        g, grid, k, strategies, trials, rng_seed,
        noise_sigma=noise_sigma, registry=registry, workers=workers, network=network,
    )
    ratios = {m: integrated_ratio(result, local_label(m)) for m in M_values}
    return MRatioResult(ratios=ratios, sweep=result)
