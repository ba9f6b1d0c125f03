"""
Self-checks of the simulator against exact enumeration.

`oracle_agreement_suite`: on random small graphs the Monte-Carlo mean
influence must fall within 3 standard errors of the exact value.

`picture_equivalence_suite`: the dynamic picture's influence histogram
must match the exact influence distribution (chi-square goodness of fit).
"""

import logging
from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple

import numpy as np
from scipy import stats

from ..cascade import CascadeParams, Picture
from ..graph import Graph
from ..influence import estimate, exact_influence, exact_influence_distribution
from ..rng import INSTANCE_STREAM, derive_seed, stream

logger = logging.getLogger(__name__)

DEFAULT_PROBABILITIES = (0.1, 0.3, 0.5, 0.7, 0.9)
_MIN_EXPECTED_COUNT = 5.0


def random_small_graph(rng: np.random.Generator, max_nodes: int, max_edges: int) -> Graph:
    """Uniformly chosen edge set on 2..max_nodes nodes with 1..max_edges edges."""
    n = int(rng.integers(2, max_nodes + 1))
    pairs = [(u, v) for u in range(n) for v in range(u + 1, n)]
    m = int(rng.integers(1, min(max_edges, len(pairs)) + 1))
    chosen = rng.choice(len(pairs), size=m, replace=False)
    return Graph.from_edges(n, [pairs[i] for i in sorted(chosen)])


def _random_cases(count: int, max_nodes: int, max_edges: int, max_seeds: int, rng_seed: int):
    rng = stream(rng_seed, INSTANCE_STREAM)
    for index in range(count):
        g = random_small_graph(rng, max_nodes, max_edges)
        size = int(rng.integers(1, min(max_seeds, g.n) + 1))
        seeds = tuple(sorted(int(s) for s in rng.choice(g.n, size=size, replace=False)))
        yield index, g, seeds


@dataclass(frozen=True)
class OracleCase:
    graph_index: int
    n: int
    edges: Tuple[Tuple[int, int], ...]
    seeds: Tuple[int, ...]
    p: float
    exact: float
    mean: float
    std_error: float
    passed: bool

    def to_dict(self) -> dict:
        return {
            "graph_index": self.graph_index,
            "n": self.n,
            "edges": [list(e) for e in self.edges],
            "seeds": list(self.seeds),
            "p": self.p,
            "exact": self.exact,
            "mean": self.mean,
            "std_error": self.std_error,
            "passed": self.passed,
        }


@dataclass
class OracleReport:
    cases: List[OracleCase] = field(default_factory=list)

    @property
    def passed(self) -> int:
        return sum(case.passed for case in self.cases)

    @property
    def failed(self) -> int:
        return len(self.cases) - self.passed

    def to_dict(self) -> dict:
        return {
            "total": len(self.cases),
            "passed": self.passed,
            "failed": self.failed,
            "cases": [case.to_dict() for case in self.cases],
        }


def oracle_agreement_suite(
    graphs: int = 20,
    max_nodes: int = 10,
    max_edges: int = 14,
    probabilities: Sequence[float] = DEFAULT_PROBABILITIES,
    trials: int = 50_000,
    max_seeds: int = 3,
    tolerance_se: float = 3.0,
    rng_seed: int = 0,
    picture: Picture = Picture.STATIC,
    workers: Optional[int] = 1
) -> OracleReport:
    """Monte-Carlo mean vs exact influence on random small graphs and seed sets."""
    report = OracleReport()
    for index, g, seeds in _random_cases(graphs, max_nodes, max_edges, max_seeds, rng_seed):
        for j, p in enumerate(probabilities):
            params = CascadeParams(p=p, picture=picture, rng_seed=derive_seed(rng_seed, index, j))
            mc = estimate(g, seeds, params, trials, workers=workers)
            exact = exact_influence(g, seeds, p)
            passed = abs(mc.mean - exact) <= tolerance_se * mc.std_error + 1e-9
            if not passed:
                logger.warning(
                    "graph %d seeds %s p=%.2f: mean %.4f vs exact %.4f (se %.4f)",
                    index, seeds, p, mc.mean, exact, mc.std_error,
                )
            report.cases.append(OracleCase(
                graph_index=index,
                n=g.n,
                edges=tuple((int(u), int(v)) for u, v in g.edges.tolist()),
                seeds=seeds,
                p=p,
                exact=exact,
                mean=mc.mean,
                std_error=mc.std_error,
                passed=passed,
            ))
    return report


def chi_square_against(histogram: np.ndarray, distribution: np.ndarray) -> Tuple[float, float]:
    """
    Chi-square statistic and p-value of observed counts against exact
    probabilities. Neighbouring bins are pooled until each expects at
    least 5 counts; a single pooled bin is a perfect fit.
    """
    trials = histogram.sum()
    expected = distribution * trials
    support = np.flatnonzero(distribution > 0)
    observed_bins, expected_bins = [], []
    obs_acc = exp_acc = 0.0
    for c in support:
        obs_acc += histogram[c]
        exp_acc += expected[c]
        if exp_acc >= _MIN_EXPECTED_COUNT:
            observed_bins.append(obs_acc)
            expected_bins.append(exp_acc)
            obs_acc = exp_acc = 0.0
    if exp_acc > 0 or obs_acc > 0:
        if expected_bins:
            observed_bins[-1] += obs_acc
            expected_bins[-1] += exp_acc
        else:
            observed_bins.append(obs_acc)
            expected_bins.append(exp_acc)
    # counts outside the exact support are impossible outcomes
    outside = trials - histogram[support].sum()
    if outside > 0:
        return float("inf"), 0.0
    if len(expected_bins) < 2:
        return 0.0, 1.0
    f_exp = np.asarray(expected_bins)
    f_obs = np.asarray(observed_bins)
    f_exp *= f_obs.sum() / f_exp.sum()
    result = stats.chisquare(f_obs, f_exp)
    return float(result.statistic), float(result.pvalue)


@dataclass(frozen=True)
class EquivalenceCase:
    graph_index: int
    seeds: Tuple[int, ...]
    p: float
    statistic: float
    p_value: float
    passed: bool

    def to_dict(self) -> dict:
        return {
            "graph_index": self.graph_index,
            "seeds": list(self.seeds),
            "p": self.p,
            "statistic": self.statistic,
            "p_value": self.p_value,
            "passed": self.passed,
        }


def picture_equivalence_suite(
    graphs: int = 20,
    max_nodes: int = 10,
    max_edges: int = 12,
    probabilities: Sequence[float] = (0.2, 0.5, 0.8),
    trials: int = 50_000,
    max_seeds: int = 3,
    alpha: float = 0.01,
    rng_seed: int = 0,
    workers: Optional[int] = 1
) -> List[EquivalenceCase]:
    """Dynamic-picture influence distributions vs exact ones, one chi-square test per case."""
    cases = []
    for index, g, seeds in _random_cases(graphs, max_nodes, max_edges, max_seeds, rng_seed):
        for j, p in enumerate(probabilities):
            params = CascadeParams(p=p, picture=Picture.DYNAMIC, rng_seed=derive_seed(rng_seed, index, j))
            mc = estimate(g, seeds, params, trials, workers=workers, keep_samples=True)
            statistic, p_value = chi_square_against(mc.histogram, exact_influence_distribution(g, seeds, p))
            cases.append(EquivalenceCase(index, seeds, p, statistic, p_value, p_value >= alpha))
    return cases
