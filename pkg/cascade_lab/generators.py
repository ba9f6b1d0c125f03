"""
Synthetic network generators.

Three families, each a pure function of its parameters and a 64-bit seed:
- Erdos-Renyi G(n, p) with p = mean_degree / (n - 1), by geometric skipping
- Watts-Strogatz small world: ring lattice plus random rewiring
- Configuration model with a power-law degree distribution

Identical (parameters, seed) always produce a bit-identical edge list.
"""

import logging
import math
from enum import Enum
from typing import List, Optional, Set, Tuple

import numpy as np
from pydantic import BaseModel, Field, model_validator

from .errors import GenerationError, ParameterError
from .graph import Graph
from .rng import GENERATOR_STREAM, stream

logger = logging.getLogger(__name__)

SW_MAX_REDRAWS = 10
CM_MAX_RESTARTS = 100
CM_MAX_STALLED_PASSES = 50


class Family(str, Enum):
    ER = "er"
    SMALL_WORLD = "small_world"
    CONFIG_POWER_LAW = "config_power_law"


class GeneratorSpec(BaseModel):
    """Parameters of one synthetic network; also the `network.generator` config section."""
    family: Family = Family.ER
    n: int = Field(1000, ge=2)
    er_mean_degree: float = 3.0
    sw_z: int = 4
    sw_mu: float = Field(0.2, ge=0.0, le=1.0)
    pl_alpha: float = 2.5
    pl_kmin: int = 4
    rng_seed: int = Field(0, ge=0, lt=2 ** 64)

    @model_validator(mode="after")
    def _check_family_parameters(self) -> "GeneratorSpec":
        issues = self.issues()
        if issues:
            raise ValueError("; ".join(issues))
        return self

    def issues(self) -> List[str]:
        """Violated preconditions for the selected family."""
        issues = []
        if self.family == Family.ER:
            if not 0 < self.er_mean_degree <= self.n - 1:
                issues.append(f"er_mean_degree must lie in (0, n-1], got {self.er_mean_degree}")
        elif self.family == Family.SMALL_WORLD:
            if self.sw_z % 2 or not 2 <= self.sw_z < self.n:
                issues.append(f"sw_z must be even with 2 <= z < n, got {self.sw_z}")
        elif self.family == Family.CONFIG_POWER_LAW:
            if self.pl_alpha <= 1:
                issues.append(f"pl_alpha must exceed 1, got {self.pl_alpha}")
            if not 1 <= self.pl_kmin < self.n:
                issues.append(f"pl_kmin must satisfy 1 <= kmin < n, got {self.pl_kmin}")
        return issues

    def with_size(self, n: int, rng_seed: Optional[int] = None) -> "GeneratorSpec":
        update = {"n": n}
        if rng_seed is not None:
            update["rng_seed"] = rng_seed
        return GeneratorSpec(**{**self.model_dump(), **update})


def generate(spec: GeneratorSpec) -> Graph:
    """Build the network described by `spec`."""
    if spec.family == Family.ER:
        return generate_er(spec.n, spec.er_mean_degree, spec.rng_seed)
    if spec.family == Family.SMALL_WORLD:
        return generate_small_world(spec.n, spec.sw_z, spec.sw_mu, spec.rng_seed)
    return generate_config_power_law(spec.n, spec.pl_alpha, spec.pl_kmin, spec.rng_seed)


def _pair_from_index(t: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """Map linear indices of the lower triangle (v > w, row-major) to pairs (w, v)."""
    v = ((1 + np.sqrt(1 + 8 * t.astype(np.float64))) // 2).astype(np.int64)
    # Float rounding can be off by one near perfect squares
    v -= (v * (v - 1) // 2) > t
    v += ((v + 1) * v // 2) <= t
    w = t - v * (v - 1) // 2
    return w, v


def generate_er(n: int, mean_degree: float, rng_seed: int) -> Graph:
    """
    Erdos-Renyi G(n, p_edge), p_edge = mean_degree / (n - 1).

    Pairs are visited in lower-triangle order and the gaps between
    successive edges are drawn from a geometric distribution, so the
    expected cost is O(n + E) rather than O(n^2).
    """
    if n < 2:
        raise ParameterError(f"ER needs n >= 2, got {n}")
    if not 0 < mean_degree <= n - 1:
        raise ParameterError(f"ER mean degree must lie in (0, n-1], got {mean_degree}")

    p_edge = mean_degree / (n - 1)
    total = n * (n - 1) // 2
    rng = stream(rng_seed, GENERATOR_STREAM)

    chunk = max(1024, int(total * p_edge * 1.1) + 64)
    picked = []
    position = -1
    while True:
        gaps = rng.geometric(p_edge, size=chunk)
        idx = position + np.cumsum(gaps)
        inside = idx < total
        picked.append(idx[inside])
        if not inside.all():
            break
        position = int(idx[-1])

    indices = np.concatenate(picked)
    w, v = _pair_from_index(indices)
    return Graph(n=n, edges=np.column_stack([w, v]))


def generate_small_world(n: int, z: int, mu: float, rng_seed: int) -> Graph:
    """
    Watts-Strogatz graph.

    Start from a ring where each node links to z/2 neighbors on each side,
    then visit every lattice edge (u, u+j) and, with probability mu, move
    its far end to a uniformly random node. Targets that would make a
    self-loop or a duplicate are re-drawn up to SW_MAX_REDRAWS times; if
    all fail the edge keeps its original end. The edge count stays n*z/2.
    """
    if n < 2:
        raise ParameterError(f"small world needs n >= 2, got {n}")
    if z % 2 or not 2 <= z < n:
        raise ParameterError(f"small world needs even z with 2 <= z < n, got {z}")
    if not 0.0 <= mu <= 1.0:
        raise ParameterError(f"rewiring probability must lie in [0, 1], got {mu}")

    rng = stream(rng_seed, GENERATOR_STREAM)
    edges: List[Tuple[int, int]] = []
    present: Set[Tuple[int, int]] = set()
    for j in range(1, z // 2 + 1):
        for u in range(n):
            pair = (u, (u + j) % n)
            edges.append(pair)
            present.add((min(pair), max(pair)))

    for slot, (u, v) in enumerate(edges):
        if rng.random() >= mu:
            continue
        for _ in range(SW_MAX_REDRAWS):
            w = int(rng.integers(n))
            key = (min(u, w), max(u, w))
            if w != u and key not in present:
                present.discard((min(u, v), max(u, v)))
                present.add(key)
                edges[slot] = (u, w)
                break

    return Graph.from_edges(n, edges)


def power_law_pmf(alpha: float, kmin: int, kmax: int) -> Tuple[np.ndarray, np.ndarray]:
    """Support k = kmin..kmax and Pr(k) proportional to k^-alpha."""
    ks = np.arange(kmin, kmax + 1, dtype=np.int64)
    weights = ks.astype(np.float64) ** (-alpha)
    return ks, weights / weights.sum()


def truncated_power_law_mean(alpha: float, kmin: int, kmax: int) -> float:
    ks, pmf = power_law_pmf(alpha, kmin, kmax)
    return float(np.dot(ks, pmf))


def _pair_stubs(degrees: np.ndarray, rng: np.random.Generator) -> Optional[List[Tuple[int, int]]]:
    """
    One attempt at pairing half-edges without self-loops or duplicates.

    Valid pairs are kept, the stubs of rejected pairs are shuffled again;
    returns None at an impasse (no admissible pair left among the stubs).
    """
    edges: Set[Tuple[int, int]] = set()
    stubs = np.repeat(np.arange(degrees.size), degrees)
    stalled = 0

    while stubs.size:
        rng.shuffle(stubs)
        leftover = []
        for a, b in zip(stubs[0::2].tolist(), stubs[1::2].tolist()):
            key = (a, b) if a < b else (b, a)
            if a != b and key not in edges:
                edges.add(key)
            else:
                leftover.extend(key)

        if len(leftover) == stubs.size:
            stalled += 1
            if stalled >= CM_MAX_STALLED_PASSES or not _has_admissible_pair(leftover, edges):
                return None
        else:
            stalled = 0
        stubs = np.array(leftover, dtype=np.int64)

    return sorted(edges)


def _has_admissible_pair(stubs: List[int], edges: Set[Tuple[int, int]]) -> bool:
    nodes = sorted(set(stubs))
    for i, a in enumerate(nodes):
        for b in nodes[i + 1:]:
            if (a, b) not in edges:
                return True
    return False


def draw_power_law_degrees(n: int, alpha: float, kmin: int, rng: np.random.Generator) -> np.ndarray:
    """n degrees from Pr(k) proportional to k^-alpha on [kmin, n-1], with an even sum."""
    ks, pmf = power_law_pmf(alpha, kmin, n - 1)
    degrees = rng.choice(ks, size=n, p=pmf)
    if degrees.sum() % 2:
        # n * (n - 1) is even, so an odd sum always leaves a node below the cap
        candidates = np.flatnonzero(degrees < n - 1)
        degrees[rng.choice(candidates)] += 1
    return degrees


def generate_config_power_law(n: int, alpha: float, kmin: int, rng_seed: int) -> Graph:
    """
    Configuration-model graph with Pr(k) proportional to k^-alpha on [kmin, n-1].

    The drawn degree sequence is realized exactly: an odd degree sum is
    fixed by adding one to a random node, half-edges are paired at
    random, and an impasse restarts the pairing from scratch (up to
    CM_MAX_RESTARTS times) with the next state of the same stream.
    """
    if n < 2:
        raise ParameterError(f"configuration model needs n >= 2, got {n}")
    if alpha <= 1:
        raise ParameterError(f"power-law exponent must exceed 1, got {alpha}")
    if not 1 <= kmin < n:
        raise ParameterError(f"lower cutoff must satisfy 1 <= kmin < n, got {kmin}")

    rng = stream(rng_seed, GENERATOR_STREAM)
    degrees = draw_power_law_degrees(n, alpha, kmin, rng)

    for restart in range(CM_MAX_RESTARTS + 1):
        edges = _pair_stubs(degrees, rng)
        if edges is not None:
            return Graph.from_edges(n, edges)
        logger.warning("configuration model reached an impasse, restart %d", restart + 1)

    raise GenerationError(
        f"configuration model failed after {CM_MAX_RESTARTS} restarts "
        f"(n={n}, alpha={alpha}, kmin={kmin})"
    )


def mean_degree_of(g: Graph) -> float:
    return 2.0 * g.edge_count / g.n if g.n else 0.0


def expected_er_edge_sd(n: int, mean_degree: float) -> float:
    p_edge = mean_degree / (n - 1)
    return math.sqrt(n * (n - 1) / 2 * p_edge * (1 - p_edge))
