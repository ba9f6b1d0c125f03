"""
Immutable graph representation and connectivity queries.

Nodes are dense integer ids 0..n-1. Edges are undirected and stored once
(as (u, v) with u < v); adjacency is kept in compressed form: node u's
neighbors are `neighbor_array[offsets[u]:offsets[u + 1]]`, and
`edge_index[i]` names the edge behind adjacency slot i.

Graphs never change after construction. All stochastic state (open
edges, activations) lives outside the graph, so one instance can be
shared by any number of concurrent realizations.
"""

from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components as _sparse_components

from .errors import GraphError


def _frozen(array: np.ndarray) -> np.ndarray:
    array.flags.writeable = False
    return array


@dataclass(frozen=True, eq=False)
class Graph:
    """
    Undirected simple graph in compressed adjacency form.

    Build with `Graph.from_edges`; the constructor checks every invariant
    (no self-loops, no duplicate pairs, symmetric adjacency, degree sum
    equal to twice the edge count).
    """
    n: int
    edges: np.ndarray  # (E, 2) int64, u < v
    edge_probabilities: Optional[np.ndarray] = None  # (E,) in [0, 1], noisy variant only
    offsets: np.ndarray = field(init=False, repr=False)
    neighbor_array: np.ndarray = field(init=False, repr=False)
    edge_index: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        edges = np.asarray(self.edges, dtype=np.int64).reshape(-1, 2)
        if self.n < 0:
            raise GraphError(f"node count must be non-negative, got {self.n}")
        if edges.size:
            if edges.min() < 0 or edges.max() >= self.n:
                raise GraphError("edge endpoint outside 0..n-1")
            if np.any(edges[:, 0] == edges[:, 1]):
                raise GraphError("self-loop in edge list")
            edges = np.sort(edges, axis=1)
            keys = edges[:, 0] * self.n + edges[:, 1]
            if np.unique(keys).size != keys.size:
                raise GraphError("duplicate edge in edge list")
        object.__setattr__(self, "edges", _frozen(edges))

        if self.edge_probabilities is not None:
            probs = np.asarray(self.edge_probabilities, dtype=np.float64)
            if probs.shape != (edges.shape[0],):
                raise GraphError("edge_probabilities must have one entry per edge")
            if probs.size and (probs.min() < 0.0 or probs.max() > 1.0):
                raise GraphError("edge probabilities must lie in [0, 1]")
            object.__setattr__(self, "edge_probabilities", _frozen(probs))

        # Each edge contributes two adjacency slots
        m = edges.shape[0]
        sources = np.concatenate([edges[:, 0], edges[:, 1]])
        targets = np.concatenate([edges[:, 1], edges[:, 0]])
        slot_edges = np.concatenate([np.arange(m), np.arange(m)])
        order = np.lexsort((targets, sources))
        counts = np.bincount(sources, minlength=self.n)
        offsets = np.zeros(self.n + 1, dtype=np.int64)
        np.cumsum(counts, out=offsets[1:])

        object.__setattr__(self, "offsets", _frozen(offsets))
        object.__setattr__(self, "neighbor_array", _frozen(targets[order].astype(np.int64)))
        object.__setattr__(self, "edge_index", _frozen(slot_edges[order].astype(np.int64)))

        if int(counts.sum()) != 2 * m:
            raise GraphError("degree sum differs from twice the edge count")

    @classmethod
    def from_edges(
        cls,
        n: int,
        pairs: Iterable[Tuple[int, int]],
        edge_probabilities: Optional[Sequence[float]] = None
    ) -> "Graph":
        """Build a graph from (u, v) pairs; raises GraphError on invalid input."""
        edges = np.array(list(pairs), dtype=np.int64).reshape(-1, 2)
        probs = None if edge_probabilities is None else np.asarray(edge_probabilities, dtype=np.float64)
        return cls(n=n, edges=edges, edge_probabilities=probs)

    @property
    def edge_count(self) -> int:
        return int(self.edges.shape[0])

    @property
    def degrees(self) -> np.ndarray:
        return np.diff(self.offsets)

    def neighbors(self, u: int) -> np.ndarray:
        return self.neighbor_array[self.offsets[u]:self.offsets[u + 1]]

    def edge_slots(self, u: int) -> np.ndarray:
        """Edge ids of u's adjacency slots, aligned with `neighbors(u)`."""
        return self.edge_index[self.offsets[u]:self.offsets[u + 1]]

    def with_edge_probabilities(self, probabilities: Sequence[float]) -> "Graph":
        """Same topology carrying per-edge contagion probabilities."""
        return Graph(n=self.n, edges=self.edges, edge_probabilities=np.asarray(probabilities))

    def to_csr(self, mask: Optional[np.ndarray] = None) -> csr_matrix:
        """Symmetric adjacency matrix, optionally restricted to edges where mask is True."""
        edges = self.edges if mask is None else self.edges[mask]
        rows = np.concatenate([edges[:, 0], edges[:, 1]])
        cols = np.concatenate([edges[:, 1], edges[:, 0]])
        data = np.ones(rows.size, dtype=np.int8)
        return csr_matrix((data, (rows, cols)), shape=(self.n, self.n))

    def subgraph(self, nodes: Iterable[int]) -> Tuple["Graph", Dict[int, int]]:
        """
        Node-induced subgraph.

        Nodes are relabeled 0..m-1 in ascending order of their old ids;
        per-edge probabilities travel with their edges.

        Returns:
            (subgraph, mapping old id -> new id)
        """
        keep = np.unique(np.fromiter(nodes, dtype=np.int64))
        new_id = np.full(self.n, -1, dtype=np.int64)
        new_id[keep] = np.arange(keep.size)
        inside = (new_id[self.edges[:, 0]] >= 0) & (new_id[self.edges[:, 1]] >= 0)
        sub_edges = new_id[self.edges[inside]]
        probs = None if self.edge_probabilities is None else self.edge_probabilities[inside]
        mapping = {int(old): int(new) for new, old in enumerate(keep)}
        return Graph(n=int(keep.size), edges=sub_edges, edge_probabilities=probs), mapping


class DisjointSet:
    """
    Union-find with union by size and path halving.

    Owned by a single worker; never share one instance between threads.
    """

    def __init__(self, n: int):
        self.parent: List[int] = list(range(n))
        self.size: List[int] = [1] * n
        self.n_sets = n

    def __len__(self) -> int:
        return len(self.parent)

    def find(self, x: int) -> int:
        parent = self.parent
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(self, a: int, b: int) -> int:
        """Merge the sets of a and b; returns the surviving root."""
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return ra
        if self.size[ra] < self.size[rb]:
            ra, rb = rb, ra
        self.parent[rb] = ra
        self.size[ra] += self.size[rb]
        self.n_sets -= 1
        return ra

    def unite_edges(self, pairs: Iterable[Tuple[int, int]]) -> None:
        for u, v in pairs:
            self.union(int(u), int(v))

    def cluster_size(self, x: int) -> int:
        return self.size[self.find(x)]

    def roots(self) -> List[int]:
        return [x for x in range(len(self.parent)) if self.parent[x] == x]

    def components(self) -> List[frozenset]:
        """Sets in descending size order, ties by smallest member."""
        groups: Dict[int, List[int]] = {}
        for x in range(len(self.parent)):
            groups.setdefault(self.find(x), []).append(x)
        return _ordered([frozenset(members) for members in groups.values()])


def _ordered(sets: List[frozenset]) -> List[frozenset]:
    return sorted(sets, key=lambda s: (-len(s), min(s)))


def component_labels(g: Graph) -> Tuple[int, np.ndarray]:
    """Number of components and a label per node."""
    if g.n == 0:
        return 0, np.zeros(0, dtype=np.int64)
    count, labels = _sparse_components(g.to_csr(), directed=False)
    return int(count), labels


def connected_components(g: Graph) -> List[frozenset]:
    """
    Partition of the nodes into maximal connected sets.

    Largest first; equal sizes are ordered by their smallest node id.
    """
    count, labels = component_labels(g)
    if count == 0:
        return []
    order = np.argsort(labels, kind="stable")
    bounds = np.cumsum(np.bincount(labels, minlength=count))[:-1]
    groups = np.split(order, bounds)
    return _ordered([frozenset(int(x) for x in group) for group in groups])


def dominant_component(g: Graph) -> Tuple[Graph, Dict[int, int]]:
    """Subgraph induced by the largest component, with its old -> new id map."""
    if g.n == 0:
        raise GraphError("dominant component of an empty graph")
    largest = connected_components(g)[0]
    return g.subgraph(largest)


def clustering_coefficient(g: Graph) -> float:
    """Average local clustering coefficient (nodes of degree < 2 count as 0)."""
    if g.n == 0:
        return 0.0
    adj = g.to_csr().astype(np.int64)
    triangles = np.asarray((adj @ adj).multiply(adj).sum(axis=1)).ravel() / 2.0
    deg = g.degrees.astype(np.float64)
    pairs = deg * (deg - 1) / 2.0
    local = np.divide(triangles, pairs, out=np.zeros_like(pairs), where=pairs > 0)
    return float(local.mean())
