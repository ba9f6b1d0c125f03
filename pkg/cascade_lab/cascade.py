"""
Single realizations of the independent cascade.

Two equivalent pictures of one realization:
- dynamic: rounds of activation; every newly influenced node gets one
  chance to influence each neighbor, then stops spreading
- static: every edge is declared open (with its contagion probability)
  or closed up front; the influenced set is the union of the open-edge
  clusters that contain a seed

Realization number t of a run with seed s draws from `trial_rng(s, t)`.
In the static picture the open-edge mask is the first draw of that
stream, so `run_static` and `percolation_batch` see the same mask for the
same trial.
"""

from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Optional, Sequence

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components

from .errors import InputError, ParameterError
from .graph import DisjointSet, Graph
from .rng import NOISE_STREAM, stream, trial_rng

# Upper bound on nodes in one block-diagonal batch
BATCH_NODE_BUDGET = 2_000_000
NOISE_MAX_REDRAWS = 10_000


class Picture(str, Enum):
    DYNAMIC = "dynamic"
    STATIC = "static"


@dataclass(frozen=True)
class CascadeParams:
    """Contagion probability, noise level, picture and seed of a realization."""
    p: float
    noise_sigma: float = 0.0
    picture: Picture = Picture.STATIC
    rng_seed: int = 0

    def __post_init__(self):
        if not 0.0 <= self.p <= 1.0:
            raise ParameterError(f"contagion probability must lie in [0, 1], got {self.p}")
        if self.noise_sigma < 0:
            raise ParameterError(f"noise_sigma must be non-negative, got {self.noise_sigma}")
        object.__setattr__(self, "picture", Picture(self.picture))

    def replace(self, **changes) -> "CascadeParams":
        values = {
            "p": self.p,
            "noise_sigma": self.noise_sigma,
            "picture": self.picture,
            "rng_seed": self.rng_seed,
        }
        values.update(changes)
        return CascadeParams(**values)


@dataclass(frozen=True)
class CascadeOutcome:
    """
    Result of one realization.

    `steps` is set in the dynamic picture (index of the last round with a
    new activation), `largest_cluster_size` in the static picture.
    """
    influenced: frozenset
    influenced_count: int
    steps: Optional[int] = None
    largest_cluster_size: Optional[int] = None


def validate_seeds(g: Graph, seeds: Iterable[int]) -> np.ndarray:
    """Sorted unique seed ids; raises InputError if empty or out of range."""
    arr = np.unique(np.fromiter((int(s) for s in seeds), dtype=np.int64))
    if arr.size == 0:
        raise InputError("seed set is empty")
    if arr[0] < 0 or arr[-1] >= g.n:
        raise InputError(f"seed id outside 0..{g.n - 1}")
    return arr


def sample_edge_probabilities(g: Graph, p: float, noise_sigma: float, rng_seed: int) -> Graph:
    """
    Assign each edge p_uv ~ Normal(p, noise_sigma^2) truncated to [0, 1].

    Draws falling outside [0, 1] are re-drawn rather than clipped. The
    returned graph keeps the assignment for every later realization.
    """
    if not 0.0 <= p <= 1.0:
        raise ParameterError(f"contagion probability must lie in [0, 1], got {p}")
    if noise_sigma < 0:
        raise ParameterError(f"noise_sigma must be non-negative, got {noise_sigma}")

    m = g.edge_count
    if noise_sigma == 0:
        return g.with_edge_probabilities(np.full(m, float(p)))

    rng = stream(rng_seed, NOISE_STREAM)
    probs = rng.normal(p, noise_sigma, size=m)
    outside = (probs < 0.0) | (probs > 1.0)
    for _ in range(NOISE_MAX_REDRAWS):
        count = int(outside.sum())
        if count == 0:
            break
        probs[outside] = rng.normal(p, noise_sigma, size=count)
        outside = (probs < 0.0) | (probs > 1.0)
    else:
        raise ParameterError(f"could not sample truncated normal around p={p} with sigma={noise_sigma}")
    return g.with_edge_probabilities(probs)


def edge_probability_vector(g: Graph, params: CascadeParams) -> np.ndarray:
    """
    Per-edge contagion probabilities used by a realization.

    A graph that already carries p_uv uses them; otherwise a noisy run
    samples them once from (p, noise_sigma, rng_seed), and a uniform run
    uses p on every edge.
    """
    if g.edge_probabilities is not None:
        return g.edge_probabilities
    if params.noise_sigma > 0:
        return sample_edge_probabilities(g, params.p, params.noise_sigma, params.rng_seed).edge_probabilities
    return np.full(g.edge_count, params.p)


def open_edge_mask(probabilities: np.ndarray, rng: np.random.Generator) -> np.ndarray:
    return rng.random(probabilities.size) < probabilities


def run_static(
    g: Graph,
    seeds: Iterable[int],
    params: CascadeParams,
    trial: int = 0,
    probabilities: Optional[np.ndarray] = None
) -> CascadeOutcome:
    """One static-picture realization: open edges, then clusters via union-find."""
    seed_ids = validate_seeds(g, seeds)
    probs = edge_probability_vector(g, params) if probabilities is None else probabilities
    mask = open_edge_mask(probs, trial_rng(params.rng_seed, trial))

    clusters = DisjointSet(g.n)
    clusters.unite_edges(g.edges[mask].tolist())

    roots = {clusters.find(int(s)) for s in seed_ids}
    influenced = frozenset(x for x in range(g.n) if clusters.find(x) in roots)
    largest = max(clusters.size[r] for r in clusters.roots()) if g.n else 0
    return CascadeOutcome(
        influenced=influenced,
        influenced_count=len(influenced),
        largest_cluster_size=largest,
    )


def run_dynamic(
    g: Graph,
    seeds: Iterable[int],
    params: CascadeParams,
    trial: int = 0,
    probabilities: Optional[np.ndarray] = None
) -> CascadeOutcome:
    """
    One dynamic-picture realization.

    Round 0 activates the seeds. In each later round every node activated
    in the previous round tries each not-yet-influenced neighbor once;
    nodes activated in the same round spread together in the next one.
    """
    seed_ids = validate_seeds(g, seeds)
    probs = edge_probability_vector(g, params) if probabilities is None else probabilities
    rng = trial_rng(params.rng_seed, trial)

    influenced = np.zeros(g.n, dtype=bool)
    influenced[seed_ids] = True
    active = seed_ids.tolist()
    steps = 0
    offsets, neighbor_array, edge_index = g.offsets, g.neighbor_array, g.edge_index

    while active:
        fresh = []
        for u in active:
            for slot in range(offsets[u], offsets[u + 1]):
                v = neighbor_array[slot]
                if influenced[v]:
                    continue
                if rng.random() < probs[edge_index[slot]]:
                    influenced[v] = True
                    fresh.append(int(v))
        if fresh:
            steps += 1
        active = fresh

    ids = np.flatnonzero(influenced)
    return CascadeOutcome(
        influenced=frozenset(int(x) for x in ids),
        influenced_count=int(ids.size),
        steps=steps,
    )


def run_cascade(g: Graph, seeds: Iterable[int], params: CascadeParams, trial: int = 0) -> CascadeOutcome:
    """Dispatch on `params.picture`."""
    if params.picture == Picture.DYNAMIC:
        return run_dynamic(g, seeds, params, trial)
    return run_static(g, seeds, params, trial)


@dataclass(frozen=True)
class PercolationBatch:
    """
    Static realizations of a batch of trials.

    `labels[b, u]` is the cluster id of node u in the b-th trial; cluster
    ids are global to the batch, `sizes[c]` is the node count of cluster c.
    """
    labels: np.ndarray  # (B, n)
    sizes: np.ndarray  # (C,)
    trial_of_cluster: np.ndarray  # (C,)

    @property
    def trials(self) -> int:
        return int(self.labels.shape[0])

    def influence(self, seeds: Sequence[int]) -> np.ndarray:
        """Per-trial size of the union of clusters containing the seeds."""
        seed_labels = np.sort(self.labels[:, np.asarray(seeds, dtype=np.int64)], axis=1)
        first = np.ones_like(seed_labels, dtype=bool)
        first[:, 1:] = seed_labels[:, 1:] != seed_labels[:, :-1]
        return np.where(first, self.sizes[seed_labels], 0).sum(axis=1)

    def node_cluster_sizes(self) -> np.ndarray:
        """(B, n) size of each node's cluster: its single-node influence."""
        return self.sizes[self.labels]

    def largest_cluster(self) -> np.ndarray:
        largest = np.zeros(self.trials, dtype=np.int64)
        np.maximum.at(largest, self.trial_of_cluster, self.sizes)
        return largest

    def second_largest_cluster(self) -> np.ndarray:
        """Per-trial size of the second-largest cluster (0 if there is only one)."""
        order = np.lexsort((self.sizes, self.trial_of_cluster))
        ends = np.cumsum(self.cluster_counts())
        second = np.zeros(self.trials, dtype=np.int64)
        has_two = self.cluster_counts() >= 2
        second[has_two] = self.sizes[order[ends[has_two] - 2]]
        return second

    def cluster_counts(self) -> np.ndarray:
        return np.bincount(self.trial_of_cluster, minlength=self.trials)


def percolation_batch(
    g: Graph,
    probabilities: np.ndarray,
    rng_seed: int,
    trials: Sequence[int]
) -> PercolationBatch:
    """
    Static realizations for the given trial indices.

    The trials are laid side by side as one block-diagonal graph and
    labeled with a single connected-components pass.
    """
    trials = np.asarray(trials, dtype=np.int64)
    b, n, m = trials.size, g.n, g.edge_count
    if b == 0 or n == 0:
        return PercolationBatch(
            labels=np.zeros((b, n), dtype=np.int64),
            sizes=np.zeros(0, dtype=np.int64),
            trial_of_cluster=np.zeros(0, dtype=np.int64),
        )

    masks = np.empty((b, m), dtype=bool)
    for row, t in enumerate(trials):
        masks[row] = open_edge_mask(probabilities, trial_rng(rng_seed, int(t)))

    rows_b, cols_e = np.nonzero(masks)
    offset = rows_b * n
    u = g.edges[cols_e, 0] + offset
    v = g.edges[cols_e, 1] + offset
    total = b * n
    adj = csr_matrix(
        (np.ones(u.size, dtype=np.int8), (u, v)),
        shape=(total, total),
    )
    count, flat = connected_components(adj, directed=False)
    labels = flat.reshape(b, n).astype(np.int64)
    sizes = np.bincount(flat, minlength=count).astype(np.int64)
    trial_of_cluster = np.empty(count, dtype=np.int64)
    trial_of_cluster[labels] = np.arange(b)[:, None]
    return PercolationBatch(labels=labels, sizes=sizes, trial_of_cluster=trial_of_cluster)


def batch_ranges(trials: int, n: int, start: int = 0):
    """Consecutive trial-index ranges whose block graph stays within BATCH_NODE_BUDGET."""
    per_batch = max(1, BATCH_NODE_BUDGET // max(n, 1))
    for lo in range(start, start + trials, per_batch):
        yield range(lo, min(lo + per_batch, start + trials))
