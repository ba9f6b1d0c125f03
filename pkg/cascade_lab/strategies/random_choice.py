"""Random benchmark: k distinct nodes drawn uniformly."""

from ..graph import Graph
from ..rng import SELECTION_STREAM, stream
from .base import SeedSelection, StrategyName, check_k


def select_random(g: Graph, k: int, rng_seed: int) -> SeedSelection:
    """
    k distinct uniformly random nodes.

    Costs nothing here; the single time unit charged to the random
    benchmark in the utility comparison is accounted there.
    """
    check_k(g, k)
    rng = stream(rng_seed, SELECTION_STREAM)
    seeds = rng.choice(g.n, size=k, replace=False)
    return SeedSelection(
        seeds=tuple(int(s) for s in seeds),
        strategy=StrategyName.RANDOM,
        cost_steps=0,
        wall_params={"k": k},
    )
