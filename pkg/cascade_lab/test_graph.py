#!/usr/bin/env python3
"""
Tests for the graph core.

Tests:
1. Construction invariants and adjacency
2. Connected components (checked against networkx)
3. Dominant component and induced subgraphs
4. Clustering coefficient (checked against networkx)
5. DisjointSet
"""

import sys
from pathlib import Path

import networkx as nx
import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent.parent))

from cascade_lab.errors import GraphError
from cascade_lab.graph import (
    DisjointSet,
    Graph,
    clustering_coefficient,
    connected_components,
    dominant_component,
)


def _random_graph(n: int, m: int, seed: int) -> Graph:
    rng = np.random.default_rng(seed)
    pairs = set()
    while len(pairs) < m:
        u, v = rng.integers(0, n, size=2)
        if u != v:
            pairs.add((min(u, v), max(u, v)))
    return Graph.from_edges(n, sorted(pairs))


def _to_networkx(g: Graph) -> nx.Graph:
    h = nx.Graph()
    h.add_nodes_from(range(g.n))
    h.add_edges_from(g.edges.tolist())
    return h


def test_construction():
    """Adjacency, degrees and the construction checks."""
    print("\n" + "=" * 60)
    print("TEST: Graph construction")
    print("=" * 60)

    g = Graph.from_edges(4, [(0, 1), (2, 1), (1, 3)])
    print(f"  degrees: {g.degrees.tolist()}")
    assert g.edge_count == 3
    assert g.degrees.tolist() == [1, 3, 1, 1]
    assert g.degrees.sum() == 2 * g.edge_count
    assert sorted(g.neighbors(1).tolist()) == [0, 2, 3]
    # edges are stored with u < v
    assert (g.edges[:, 0] < g.edges[:, 1]).all()
    for u in range(g.n):
        for v, e in zip(g.neighbors(u), g.edge_slots(u)):
            assert u in g.edges[e] and v in g.edges[e]

    with pytest.raises(GraphError):
        Graph.from_edges(3, [(0, 0)])
    with pytest.raises(GraphError):
        Graph.from_edges(3, [(0, 1), (1, 0)])
    with pytest.raises(GraphError):
        Graph.from_edges(3, [(0, 5)])
    with pytest.raises(GraphError):
        Graph.from_edges(3, [(0, 1)], edge_probabilities=[1.5])

    empty = Graph.from_edges(3, [])
    assert empty.edge_count == 0
    assert empty.degrees.tolist() == [0, 0, 0]

    print("\n  [PASS] Construction checks hold")


def test_connected_components():
    """Components agree with networkx and come largest first."""
    print("\n" + "=" * 60)
    print("TEST: Connected components")
    print("=" * 60)

    g = Graph.from_edges(7, [(0, 1), (1, 2), (3, 4), (5, 6), (4, 5)])
    comps = connected_components(g)
    print(f"  components: {[sorted(c) for c in comps]}")
    assert [sorted(c) for c in comps] == [[3, 4, 5, 6], [0, 1, 2]]

    isolated = Graph.from_edges(3, [])
    assert [sorted(c) for c in connected_components(isolated)] == [[0], [1], [2]]

    for seed in range(5):
        g = _random_graph(60, 50, seed)
        ours = {frozenset(c) for c in connected_components(g)}
        theirs = {frozenset(c) for c in nx.connected_components(_to_networkx(g))}
        assert ours == theirs

    print("\n  [PASS] Components match networkx")


def test_dominant_component():
    """Largest component, relabeled ascending."""
    print("\n" + "=" * 60)
    print("TEST: Dominant component")
    print("=" * 60)

    # two disjoint cliques of sizes 5 and 4
    clique5 = [(u, v) for u in range(5) for v in range(u + 1, 5)]
    clique4 = [(u, v) for u in range(5, 9) for v in range(u + 1, 9)]
    g = Graph.from_edges(9, clique5 + clique4)
    sub, mapping = dominant_component(g)
    print(f"  dominant: n={sub.n} E={sub.edge_count}")
    assert sub.n == 5 and sub.edge_count == 10
    assert mapping == {i: i for i in range(5)}

    g = Graph.from_edges(6, [(0, 1), (3, 5), (5, 4), (3, 4)], edge_probabilities=[0.1, 0.2, 0.3, 0.4])
    sub, mapping = dominant_component(g)
    assert mapping == {3: 0, 4: 1, 5: 2}
    assert sub.edge_count == 3
    assert sorted(sub.edge_probabilities.tolist()) == [0.2, 0.3, 0.4]

    with pytest.raises(GraphError):
        dominant_component(Graph.from_edges(0, []))

    print("\n  [PASS] Dominant component extracted")


def test_clustering_coefficient():
    """Average local clustering matches networkx."""
    print("\n" + "=" * 60)
    print("TEST: Clustering coefficient")
    print("=" * 60)

    triangle = Graph.from_edges(3, [(0, 1), (1, 2), (0, 2)])
    assert clustering_coefficient(triangle) == pytest.approx(1.0)

    for seed in range(3):
        g = _random_graph(40, 90, seed)
        ours = clustering_coefficient(g)
        theirs = nx.average_clustering(_to_networkx(g))
        print(f"  seed {seed}: {ours:.4f} vs networkx {theirs:.4f}")
        assert ours == pytest.approx(theirs)

    print("\n  [PASS] Clustering matches networkx")


def test_disjoint_set():
    print("\n" + "=" * 60)
    print("TEST: DisjointSet")
    print("=" * 60)

    ds = DisjointSet(6)
    ds.unite_edges([(0, 1), (2, 3), (1, 3)])
    assert ds.n_sets == 3
    assert ds.cluster_size(0) == 4
    assert ds.find(0) == ds.find(2)
    assert [sorted(c) for c in ds.components()] == [[0, 1, 2, 3], [4], [5]]

    print("\n  [PASS] DisjointSet merges and reports sets")


def main():
    """Run all tests."""
    print("\nGraph Core Tests")
    print("=" * 60)

    test_construction()
    test_connected_components()
    test_dominant_component()
    test_clustering_coefficient()
    test_disjoint_set()

    print("\n" + "=" * 60)
    print("All tests completed!")
    print("=" * 60)


if __name__ == "__main__":
    main()
