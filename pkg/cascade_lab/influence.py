"""
Influence of a seed set: Monte-Carlo estimates and exact enumeration.

`estimate` runs independent realizations (static picture by default) and
reports the lower median, the mean and its standard error. Realizations
are split into trial-index chunks that can run on a process pool; each
chunk returns a histogram of influence counts, and histograms are summed,
so serial and parallel runs give identical estimates.

`exact_influence` sums over all 2^E open/closed edge subsets and serves as
the oracle for small graphs.
"""

from dataclasses import dataclass
from typing import Iterable, Optional, Tuple

import numpy as np

from .cascade import (
    CascadeParams,
    Picture,
    batch_ranges,
    edge_probability_vector,
    percolation_batch,
    run_dynamic,
    validate_seeds,
)
from .errors import BudgetError, InputError
from .graph import Graph
from .parallel import run_jobs, worker_count

EXACT_EDGE_BUDGET = 25
TRIAL_CHUNK = 2000
_ENUMERATION_CHUNK = 1 << 14
_TIE_TOLERANCE = 1e-12


@dataclass(frozen=True)
class InfluenceEstimate:
    """Monte-Carlo summary of a seed set's influence (node counts)."""
    median: int
    mean: float
    std_error: float
    trials: int
    samples_kept: bool = False
    histogram: Optional[np.ndarray] = None  # histogram[c] = trials with influence c

    def to_dict(self) -> dict:
        return {
            "median": self.median,
            "mean": self.mean,
            "std_error": self.std_error,
            "trials": self.trials,
        }


def summarize_histogram(histogram: np.ndarray, keep: bool = False) -> InfluenceEstimate:
    """Lower median, mean and standard error of the mean from a count histogram."""
    trials = int(histogram.sum())
    if trials < 1:
        raise InputError("no trials to summarize")
    values = np.arange(histogram.size, dtype=np.float64)
    mean = float(np.dot(values, histogram) / trials)
    if trials > 1:
        squares = float(np.dot((values - mean) ** 2, histogram))
        std_error = float(np.sqrt(squares / (trials - 1) / trials))
    else:
        std_error = 0.0
    cumulative = np.cumsum(histogram)
    median = int(np.searchsorted(cumulative, (trials - 1) // 2, side="right"))
    return InfluenceEstimate(
        median=median,
        mean=mean,
        std_error=std_error,
        trials=trials,
        samples_kept=keep,
        histogram=histogram.copy() if keep else None,
    )


def _static_histogram(g: Graph, probs: np.ndarray, seeds: np.ndarray, rng_seed: int, lo: int, hi: int) -> np.ndarray:
    histogram = np.zeros(g.n + 1, dtype=np.int64)
    for trials in batch_ranges(hi - lo, g.n, start=lo):
        batch = percolation_batch(g, probs, rng_seed, trials)
        histogram += np.bincount(batch.influence(seeds), minlength=g.n + 1)
    return histogram


def _dynamic_histogram(
    g: Graph, probs: np.ndarray, seeds: np.ndarray, params: CascadeParams, lo: int, hi: int
) -> np.ndarray:
    histogram = np.zeros(g.n + 1, dtype=np.int64)
    for t in range(lo, hi):
        histogram[run_dynamic(g, seeds, params, trial=t, probabilities=probs).influenced_count] += 1
    return histogram


def estimate(
    g: Graph,
    seeds: Iterable[int],
    params: CascadeParams,
    trials: int,
    workers: Optional[int] = 1,
    keep_samples: bool = False
) -> InfluenceEstimate:
    """
    Monte-Carlo influence of `seeds`.

    Args:
        g: Network
        seeds: Initially influenced nodes
        params: Contagion probability, noise, picture and seed
        trials: Number of independent realizations
        workers: Process count (None: all available, capped by CASCADE_LAB_THREADS)
        keep_samples: Retain the influence histogram in the result

    Returns:
        InfluenceEstimate with lower median, mean and standard error
    """
    if trials < 1:
        raise InputError(f"trials must be at least 1, got {trials}")
    seed_ids = validate_seeds(g, seeds)
    probs = edge_probability_vector(g, params)

    chunks = [(lo, min(lo + TRIAL_CHUNK, trials)) for lo in range(0, trials, TRIAL_CHUNK)]
    if params.picture == Picture.DYNAMIC:
        jobs = [(g, probs, seed_ids, params, lo, hi) for lo, hi in chunks]
        parts = run_jobs(_dynamic_histogram, jobs, worker_count(workers))
    else:
        jobs = [(g, probs, seed_ids, params.rng_seed, lo, hi) for lo, hi in chunks]
        parts = run_jobs(_static_histogram, jobs, worker_count(workers))

    return summarize_histogram(np.sum(parts, axis=0), keep=keep_samples)


def _probabilities_for_exact(g: Graph, p: Optional[float]) -> np.ndarray:
    if g.edge_count > EXACT_EDGE_BUDGET:
        raise BudgetError(
            f"exact enumeration limited to {EXACT_EDGE_BUDGET} edges, graph has {g.edge_count}"
        )
    if p is not None:
        if not 0.0 <= p <= 1.0:
            raise InputError(f"contagion probability must lie in [0, 1], got {p}")
        return np.full(g.edge_count, float(p))
    if g.edge_probabilities is None:
        raise InputError("exact influence needs p or a graph with edge probabilities")
    return g.edge_probabilities


def _enumerate_clusters(g: Graph, probs: np.ndarray):
    """
    Yield (weights, labels) over chunks of all 2^E edge subsets.

    weights[s] is the probability of subset s; labels[s, u] is the
    smallest node id in u's cluster under that subset.
    """
    m, n = g.edge_count, g.n
    bit = np.arange(m, dtype=np.int64)
    total = 1 << m
    for lo in range(0, total, _ENUMERATION_CHUNK):
        subsets = np.arange(lo, min(lo + _ENUMERATION_CHUNK, total), dtype=np.int64)
        is_open = ((subsets[:, None] >> bit) & 1).astype(bool)
        weights = np.where(is_open, probs, 1.0 - probs).prod(axis=1)
        labels = np.tile(np.arange(n, dtype=np.int64), (subsets.size, 1))

        changed = True
        while changed:
            changed = False
            for e, (u, v) in enumerate(g.edges.tolist()):
                lu, lv = labels[:, u], labels[:, v]
                update = is_open[:, e] & (lu != lv)
                if update.any():
                    low = np.minimum(lu, lv)[update]
                    labels[update, u] = low
                    labels[update, v] = low
                    changed = True
        yield weights, labels


def exact_influence(g: Graph, seeds: Iterable[int], p: Optional[float] = None) -> float:
    """
    Expected influence of `seeds` by enumerating every edge subset.

    Uses uniform probability `p`, or the graph's own p_uv when p is None.
    Raises BudgetError above EXACT_EDGE_BUDGET edges.
    """
    probs = _probabilities_for_exact(g, p)
    seed_ids = validate_seeds(g, seeds)
    total = 0.0
    for weights, labels in _enumerate_clusters(g, probs):
        seed_labels = labels[:, seed_ids]
        reached = (labels[:, :, None] == seed_labels[:, None, :]).any(axis=2).sum(axis=1)
        total += float(np.dot(weights, reached))
    return total


def exact_influence_distribution(g: Graph, seeds: Iterable[int], p: Optional[float] = None) -> np.ndarray:
    """distribution[c] = probability that exactly c nodes end up influenced."""
    probs = _probabilities_for_exact(g, p)
    seed_ids = validate_seeds(g, seeds)
    distribution = np.zeros(g.n + 1, dtype=np.float64)
    for weights, labels in _enumerate_clusters(g, probs):
        seed_labels = labels[:, seed_ids]
        reached = (labels[:, :, None] == seed_labels[:, None, :]).any(axis=2).sum(axis=1)
        distribution += np.bincount(reached, weights=weights, minlength=g.n + 1)
    return distribution


def exact_single_node_influences(g: Graph, p: Optional[float] = None) -> np.ndarray:
    """Exact influence of every single-node seed set, in one enumeration."""
    probs = _probabilities_for_exact(g, p)
    result = np.zeros(g.n, dtype=np.float64)
    for weights, labels in _enumerate_clusters(g, probs):
        sizes = (labels[:, :, None] == labels[:, None, :]).sum(axis=2)
        result += weights @ sizes
    return result


def argmax_smallest(values: np.ndarray, tolerance: float = _TIE_TOLERANCE) -> int:
    """Index of the maximum; near-ties resolve to the smallest index."""
    best = float(values.max())
    return int(np.flatnonzero(values >= best - tolerance * max(1.0, abs(best)))[0])


def best_single_node_exact(g: Graph, p: float) -> int:
    """Node with the largest exact influence; ties go to the smallest id."""
    if g.n == 0:
        raise InputError("graph has no nodes")
    return argmax_smallest(exact_single_node_influences(g, p))


def best_single_nodes_exact(g: Graph, p: float, tolerance: float = _TIE_TOLERANCE) -> Tuple[int, ...]:
    """Every node whose exact influence ties the maximum, in id order."""
    if g.n == 0:
        raise InputError("graph has no nodes")
    values = exact_single_node_influences(g, p)
    best = float(values.max())
    return tuple(int(u) for u in np.flatnonzero(values >= best - tolerance * max(1.0, abs(best))))


def locate_best_node_switch(
    g: Graph,
    p_lo: float,
    p_hi: float,
    tolerance: float = 1e-4
) -> Tuple[float, int, int]:
    """
    Bisection for the p where the exact best single node changes identity.

    Returns:
        (crossing p, best node below it, best node above it)
    """
    below, above = best_single_node_exact(g, p_lo), best_single_node_exact(g, p_hi)
    if below == above:
        raise InputError(f"best node is {below} at both ends of [{p_lo}, {p_hi}]")
    lo, hi = p_lo, p_hi
    while hi - lo > tolerance:
        mid = 0.5 * (lo + hi)
        if best_single_node_exact(g, mid) == below:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi), below, above


def star(leaves: int) -> Graph:
    """Node 0 joined to `leaves` leaf nodes."""
    return Graph.from_edges(leaves + 1, [(0, i) for i in range(1, leaves + 1)])


def two_hub_tree(m: int) -> Graph:
    """
    Node 0 joined to hubs 1 and 2, each hub carrying m leaves.

    For small p a hub is the best single seed; above p* = (m - 1) / m the
    center node 0 overtakes it.
    """
    edges = [(0, 1), (0, 2)]
    edges += [(1, 3 + i) for i in range(m)]
    edges += [(2, 3 + m + i) for i in range(m)]
    return Graph.from_edges(2 * m + 3, edges)


def path(n: int) -> Graph:
    return Graph.from_edges(n, [(i, i + 1) for i in range(n - 1)])


def triangle() -> Graph:
    return Graph.from_edges(3, [(0, 1), (1, 2), (0, 2)])
