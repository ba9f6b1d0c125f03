"""
Percolation theory: where the transition sits and what a random seed set
gets on either side of it.

- `critical_point_from_degrees`: p_c = <k> / (<k^2> - <k>)
- `measure_S`: measured largest-cluster fraction S(p)
- `er_giant_fraction`, `giant_fraction_from_degrees`: analytic S(p)
- `predict_random_influence_low` / `_high`: influence of k random seeds
  below and above the transition
- `measure_critical_point`: empirical p_c as the peak of the mean
  second-largest cluster
"""

import math
from dataclasses import dataclass
from typing import Optional, Sequence, Tuple

import numpy as np
from scipy.optimize import brentq

from .cascade import CascadeParams, batch_ranges, edge_probability_vector, percolation_batch
from .errors import InputError, UndefinedTransitionError
from .graph import Graph
from .parallel import run_jobs, worker_count
from .rng import derive_seed

_TRIAL_CHUNK = 500
_ROOT_MARGIN = 1e-9


@dataclass(frozen=True)
class PercolationSummary:
    """Largest-cluster statistics of static realizations at one p."""
    p: float
    S: float  # mean largest-cluster fraction
    S_std_error: float
    mean_cluster_size: float  # nodes per cluster, averaged over trials
    trials: int

    def to_dict(self) -> dict:
        return {
            "p": self.p,
            "S": self.S,
            "S_std_error": self.S_std_error,
            "mean_cluster_size": self.mean_cluster_size,
            "trials": self.trials,
        }


def degree_moments(degrees: Sequence[int]) -> Tuple[float, float]:
    k = np.asarray(degrees, dtype=np.float64)
    if k.size == 0:
        raise InputError("degree sequence is empty")
    return float(k.mean()), float((k * k).mean())


def critical_point_from_degrees(degrees: Sequence[int]) -> float:
    """
    Bond-percolation threshold <k> / (<k^2> - <k>) of a degree sequence.

    Raises:
        UndefinedTransitionError: <k^2> <= <k> (no giant cluster at any p)
    """
    k1, k2 = degree_moments(degrees)
    if k2 <= k1:
        raise UndefinedTransitionError(
            f"<k^2>={k2:.6g} does not exceed <k>={k1:.6g}; no transition in [0, 1]"
        )
    return k1 / (k2 - k1)


def _cluster_statistics(g: Graph, probs: np.ndarray, rng_seed: int, lo: int, hi: int) -> np.ndarray:
    """(hi - lo, 3) rows of largest, second-largest and cluster count per trial."""
    parts = []
    for trials in batch_ranges(hi - lo, g.n, start=lo):
        batch = percolation_batch(g, probs, rng_seed, trials)
        parts.append(np.column_stack([
            batch.largest_cluster(),
            batch.second_largest_cluster(),
            batch.cluster_counts(),
        ]))
    return np.vstack(parts)


def _run_statistics(g: Graph, p: float, trials: int, rng_seed: int, noise_sigma: float, workers: Optional[int]):
    params = CascadeParams(p=p, noise_sigma=noise_sigma, rng_seed=rng_seed)
    probs = edge_probability_vector(g, params)
    jobs = [
        (g, probs, rng_seed, lo, min(lo + _TRIAL_CHUNK, trials))
        for lo in range(0, trials, _TRIAL_CHUNK)
    ]
    return np.vstack(run_jobs(_cluster_statistics, jobs, worker_count(workers)))


def measure_S(
    g: Graph,
    p: float,
    trials: int,
    rng_seed: int,
    noise_sigma: float = 0.0,
    workers: Optional[int] = 1
) -> PercolationSummary:
    """Mean largest static-picture cluster, as a fraction of n, over `trials` realizations."""
    if trials < 1:
        raise InputError(f"trials must be at least 1, got {trials}")
    if g.n == 0:
        raise InputError("graph has no nodes")
    stats = _run_statistics(g, p, trials, rng_seed, noise_sigma, workers)
    fractions = stats[:, 0] / g.n
    std_error = float(fractions.std(ddof=1) / math.sqrt(trials)) if trials > 1 else 0.0
    return PercolationSummary(
        p=p,
        S=float(fractions.mean()),
        S_std_error=std_error,
        mean_cluster_size=float((g.n / stats[:, 2]).mean()),
        trials=trials,
    )


@dataclass(frozen=True)
class CriticalPointEstimate:
    p_c: float
    ps: Tuple[float, ...]
    mean_second_largest: Tuple[float, ...]


def measure_critical_point(
    g: Graph,
    ps: Sequence[float],
    trials: int,
    rng_seed: int,
    workers: Optional[int] = 1
) -> CriticalPointEstimate:
    """
    Empirical transition point: the p of the largest mean second-largest cluster.

    The second-largest cluster is small on both sides of the transition
    and peaks at it on finite networks; ties go to the smaller p.
    """
    if len(ps) == 0:
        raise InputError("no p values to scan")
    curve = []
    for i, p in enumerate(ps):
        stats = _run_statistics(g, float(p), trials, derive_seed(rng_seed, i), 0.0, workers)
        curve.append(float(stats[:, 1].mean()))
    best = int(np.argmax(curve))
    return CriticalPointEstimate(
        p_c=float(ps[best]),
        ps=tuple(float(p) for p in ps),
        mean_second_largest=tuple(curve),
    )


def er_giant_fraction(mean_degree: float, p: float) -> float:
    """
    Giant-cluster fraction of a large ER graph after bond percolation.

    Solves S = 1 - exp(-<k> p S); zero when <k> p <= 1.
    """
    c = mean_degree * p
    if c <= 1.0:
        return 0.0
    return float(brentq(lambda s: s - 1.0 + math.exp(-c * s), _ROOT_MARGIN, 1.0))


def giant_fraction_from_degrees(degrees: Sequence[int], p: float) -> float:
    """
    Generating-function prediction of the giant cluster for a
    configuration-model graph with this degree sequence.

    u = 1 - p + p G1(u) is the chance an edge end does not lead to the
    giant cluster; S = 1 - G0(u).
    """
    k = np.asarray(degrees, dtype=np.int64)
    if k.size == 0:
        raise InputError("degree sequence is empty")
    pk = np.bincount(k) / k.size
    ks = np.arange(pk.size, dtype=np.float64)
    mean = float(np.dot(ks, pk))
    if mean == 0.0:
        return 0.0

    def g0(x: float) -> float:
        return float(np.dot(pk, x ** ks))

    def g1(x: float) -> float:
        return float(np.dot(ks[1:] * pk[1:], x ** (ks[1:] - 1))) / mean

    def excess(u: float) -> float:
        return 1.0 - p + p * g1(u) - u

    top = 1.0 - _ROOT_MARGIN
    if excess(top) >= 0.0:
        return 0.0
    u = brentq(excess, 0.0, top)
    return max(0.0, 1.0 - g0(u))


def predict_random_influence_low(k: int, n: int) -> float:
    """
    Scale of the influence of k random seeds below the transition: k ln n.

    An order-of-magnitude value (k clusters of size O(ln n)), not a sharp one.
    """
    if k < 1 or n < 2:
        raise InputError(f"need k >= 1 and n >= 2, got k={k}, n={n}")
    return k * math.log(n)


def predict_random_influence_high(k: int, n: int, S: float, correction: bool = True) -> float:
    """
    Influenced fraction of n for k random seeds above the transition.

    f = S [1 - (1 - S)^k] + k (1 - S) ln(n) / n

    The first term is the chance at least one seed falls in the giant
    cluster; the second counts the small clusters the others land in
    (dropped with correction=False). Higher-order overlap between seeds
    is ignored, so large k overshoots slightly.
    """
    if not 0.0 <= S <= 1.0:
        raise InputError(f"S must lie in [0, 1], got {S}")
    if k < 1:
        raise InputError(f"k must be at least 1, got {k}")
    f = S * (1.0 - (1.0 - S) ** k)
    if correction:
        if n < 2:
            raise InputError(f"n must be at least 2, got {n}")
        f += k * (1.0 - S) * math.log(n) / n
    return f
