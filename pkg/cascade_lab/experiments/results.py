"""Result records shared by the sweep and the analyses built on it."""

from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Tuple

import numpy as np

from ..errors import InputError
from ..strategies import StrategyName


@dataclass(frozen=True)
class SweepPoint:
    """One strategy at one p: its seeds, their influence and what choosing them cost."""
    p: float
    label: str
    strategy: StrategyName
    median: int
    mean: float
    se: float
    cost_steps: int
    seeds: Tuple[int, ...] = ()
    mass: Optional[int] = None  # sub-network mass M of local variants


@dataclass
class SweepResult:
    """
    Per-p performance of every strategy variant on one network.

    Curves are looked up by label; by default the optimizer is the first
    hill-climbing variant and the benchmark the first random one.
    """
    ps: Tuple[float, ...]
    points: List[SweepPoint]
    k: int
    n: int
    edge_count: int
    trials: int
    rng_seed: int
    network: Dict[str, Any] = field(default_factory=dict)

    def labels(self) -> List[str]:
        seen: List[str] = []
        for point in self.points:
            if point.label not in seen:
                seen.append(point.label)
        return seen

    def strategy_of(self, label: str) -> StrategyName:
        for point in self.points:
            if point.label == label:
                return point.strategy
        raise InputError(f"no strategy labelled {label!r} in sweep; have {self.labels()}")

    def _first_label(self, strategy: StrategyName) -> str:
        for point in self.points:
            if point.strategy == strategy:
                return point.label
        raise InputError(f"sweep has no {strategy.value} strategy")

    @property
    def opt_label(self) -> str:
        return self._first_label(StrategyName.HILL_CLIMB)

    @property
    def rand_label(self) -> str:
        return self._first_label(StrategyName.RANDOM)

    def points_for(self, label: str) -> List[SweepPoint]:
        chosen = sorted((pt for pt in self.points if pt.label == label), key=lambda pt: pt.p)
        if len(chosen) != len(self.ps):
            raise InputError(f"strategy {label!r} has {len(chosen)} points, grid has {len(self.ps)}")
        return chosen

    def curve(self, label: str, attribute: str = "median") -> np.ndarray:
        return np.asarray([getattr(pt, attribute) for pt in self.points_for(label)], dtype=np.float64)

    def marginal_gain(self, opt_label: Optional[str] = None, rand_label: Optional[str] = None) -> np.ndarray:
        """opt - rand medians at every p."""
        return self.curve(opt_label or self.opt_label) - self.curve(rand_label or self.rand_label)

    def describe(self) -> Dict[str, Any]:
        return {
            "network": dict(self.network),
            "n": self.n,
            "edge_count": self.edge_count,
            "k": self.k,
            "trials": self.trials,
            "rng_seed": self.rng_seed,
            "grid_points": len(self.ps),
            "labels": self.labels(),
        }
