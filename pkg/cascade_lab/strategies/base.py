"""
Shared types for seed-selection strategies.

A strategy turns (graph, k, cascade parameters, seed) into a
`SeedSelection`: k distinct nodes plus an abstract work counter,
`cost_steps`, the number of simulated realizations spent choosing them.
"""

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Callable, Dict, List, Tuple

import numpy as np

from ..errors import InputError, ParameterError
from ..graph import Graph

DEFAULT_TRIALS_PER_EVAL = 200
DEFAULT_MASS = 100
_TIE_TOLERANCE = 1e-12


class StrategyName(str, Enum):
    RANDOM = "random"
    HILL_CLIMB = "hill_climb"
    LOCAL = "local"


@dataclass(frozen=True)
class SeedSelection:
    """Chosen seeds (in selection order) and what choosing them cost."""
    seeds: Tuple[int, ...]
    strategy: StrategyName
    cost_steps: int
    wall_params: Dict[str, Any] = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "seeds": list(self.seeds),
            "strategy": self.strategy.value,
            "cost_steps": self.cost_steps,
            "wall_params": dict(self.wall_params),
        }


def check_k(g: Graph, k: int) -> None:
    if not 1 <= k <= g.n:
        raise InputError(f"seed-set size k must satisfy 1 <= k <= n={g.n}, got {k}")


def check_trials(trials_per_eval: int) -> None:
    if trials_per_eval < 1:
        raise ParameterError(f"trials_per_eval must be at least 1, got {trials_per_eval}")


def greedy_maximize(n: int, k: int, round_scores: Callable[[List[int]], np.ndarray]) -> List[int]:
    """
    Add k nodes one at a time, each the best-scoring unchosen node.

    `round_scores(chosen)` returns, for every node u, the value of
    chosen + [u]. Ties (up to float rounding) go to the smallest id.
    """
    chosen: List[int] = []
    for _ in range(k):
        scores = np.asarray(round_scores(chosen), dtype=np.float64).copy()
        scores[chosen] = -np.inf
        best = scores.max()
        tied = scores >= best - _TIE_TOLERANCE * max(1.0, abs(best))
        chosen.append(int(np.flatnonzero(tied)[0]))
    return chosen


def suggested_mass(n: int, power: float = 1.5) -> int:
    """Rule-of-thumb sub-network mass, ln(n)^power rounded up (at least 1)."""
    return max(1, math.ceil(math.log(max(n, 2)) ** power))
