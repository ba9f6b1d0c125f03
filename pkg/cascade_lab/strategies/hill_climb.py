"""
Greedy hill-climbing.

Each of the k rounds scores every unchosen node u by the mean influence
of (chosen + [u]) over `trials_per_eval` static realizations and keeps
the best. Within a round all candidates are scored on the same
realizations: once a realization's clusters are known, the influence of
chosen + [u] is the chosen set's influence plus u's cluster size if that
cluster is not already reached. Each round draws fresh realizations.
"""

from typing import List, Optional

import numpy as np

from ..cascade import CascadeParams, batch_ranges, edge_probability_vector, percolation_batch
from ..graph import Graph
from ..influence import exact_influence
from ..parallel import run_jobs, worker_count
from ..rng import SELECTION_STREAM, derive_seed
from .base import (
    DEFAULT_TRIALS_PER_EVAL,
    SeedSelection,
    StrategyName,
    check_k,
    check_trials,
    greedy_maximize,
)


def candidate_totals(g: Graph, probs: np.ndarray, rng_seed: int, lo: int, hi: int, chosen: List[int]) -> np.ndarray:
    """
    Summed influence of chosen + [u], for every u, over trials lo..hi-1.

    Returns integer totals so ties between candidates are exact.
    """
    totals = np.zeros(g.n, dtype=np.int64)
    for trials in batch_ranges(hi - lo, g.n, start=lo):
        batch = percolation_batch(g, probs, rng_seed, trials)
        node_sizes = batch.node_cluster_sizes()
        if chosen:
            covered = np.zeros(batch.sizes.size, dtype=bool)
            covered[batch.labels[:, chosen].ravel()] = True
            gains = np.where(covered[batch.labels], 0, node_sizes)
            totals += int(batch.influence(chosen).sum()) + gains.sum(axis=0)
        else:
            totals += node_sizes.sum(axis=0)
    return totals


def select_hill_climb(
    g: Graph,
    k: int,
    params: CascadeParams,
    trials_per_eval: int = DEFAULT_TRIALS_PER_EVAL,
    rng_seed: int = 0,
    workers: Optional[int] = 1
) -> SeedSelection:
    """
    Greedy seed set by Monte-Carlo mean influence.

    cost_steps counts candidate evaluations times trials_per_eval, summed
    over rounds: sum over rounds r of (n - r) * trials_per_eval.
    """
    check_k(g, k)
    check_trials(trials_per_eval)
    probs = edge_probability_vector(g, params)
    base_seed = derive_seed(rng_seed, SELECTION_STREAM)
    workers = worker_count(workers)
    cost = 0

    def round_scores(chosen: List[int]) -> np.ndarray:
        nonlocal cost
        start = len(chosen) * trials_per_eval
        step = -(-trials_per_eval // workers)
        jobs = [
            (g, probs, base_seed, lo, min(lo + step, start + trials_per_eval), list(chosen))
            for lo in range(start, start + trials_per_eval, step)
        ]
        cost += (g.n - len(chosen)) * trials_per_eval
        return np.sum(run_jobs(candidate_totals, jobs, workers), axis=0)

    seeds = greedy_maximize(g.n, k, round_scores)
    return SeedSelection(
        seeds=tuple(seeds),
        strategy=StrategyName.HILL_CLIMB,
        cost_steps=cost,
        wall_params={"k": k, "trials_per_eval": trials_per_eval},
    )


def select_hill_climb_exact(g: Graph, k: int, p: float) -> SeedSelection:
    """Greedy with exact enumeration as the influence oracle (small graphs only)."""
    check_k(g, k)
    evaluations = 0

    def round_scores(chosen: List[int]) -> np.ndarray:
        nonlocal evaluations
        scores = np.full(g.n, -np.inf)
        for u in range(g.n):
            if u not in chosen:
                scores[u] = exact_influence(g, chosen + [u], p)
                evaluations += 1
        return scores

    seeds = greedy_maximize(g.n, k, round_scores)
    return SeedSelection(
        seeds=tuple(seeds),
        strategy=StrategyName.HILL_CLIMB,
        cost_steps=evaluations,
        wall_params={"k": k, "oracle": "exact"},
    )
