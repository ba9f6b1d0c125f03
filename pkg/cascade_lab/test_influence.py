#!/usr/bin/env python3
"""
Tests for influence estimation.

Tests:
1. Exact influence on toy graphs (closed forms)
2. Monte-Carlo agreement with exact enumeration, both pictures
3. Histogram summaries and parallel determinism
4. Monotonicity in p and median/mean agreement
5. Exact distributions and the enumeration budget
6. Best-node switch on the two-hub tree, tied hubs
"""

import math
import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent.parent))

from cascade_lab.cascade import CascadeParams, Picture
from cascade_lab.errors import BudgetError, InputError
from cascade_lab.generators import generate_er
from cascade_lab.graph import Graph
from cascade_lab.influence import (
    EXACT_EDGE_BUDGET,
    best_single_node_exact,
    best_single_nodes_exact,
    estimate,
    exact_influence,
    exact_influence_distribution,
    exact_single_node_influences,
    locate_best_node_switch,
    path,
    star,
    summarize_histogram,
    triangle,
    two_hub_tree,
)
from cascade_lab.strategies import select_hill_climb


def test_exact_closed_forms():
    print("\n" + "=" * 60)
    print("TEST: Exact influence closed forms")
    print("=" * 60)

    for p in (0.0, 0.3, 0.75, 1.0):
        edge = Graph.from_edges(2, [(0, 1)])
        assert exact_influence(edge, [0], p) == pytest.approx(1 + p)
        assert exact_influence(path(3), [0], p) == pytest.approx(1 + p + p * p)
        # a triangle vertex reaches each other vertex directly or via the third
        reach = p + (1 - p) * p * p
        assert exact_influence(triangle(), [0], p) == pytest.approx(1 + 2 * reach)
        assert exact_influence(star(4), [0], p) == pytest.approx(1 + 4 * p)
        print(f"  p={p}: triangle {exact_influence(triangle(), [0], p):.4f}")

    # seeds in one cluster are not double counted
    assert exact_influence(path(3), [0, 1, 2], 0.5) == pytest.approx(3.0)

    # per-edge probabilities carried by the graph
    weighted = Graph.from_edges(3, [(0, 1), (1, 2)], edge_probabilities=[0.5, 0.2])
    assert exact_influence(weighted, [0]) == pytest.approx(1 + 0.5 + 0.5 * 0.2)

    singles = exact_single_node_influences(path(3), 0.5)
    assert singles.tolist() == pytest.approx([1.75, 2.0, 1.75])

    print("\n  [PASS] Exact influence matches closed forms")


def test_monte_carlo_agreement():
    """Monte-Carlo mean within 4 standard errors of the exact value."""
    print("\n" + "=" * 60)
    print("TEST: Monte-Carlo vs exact")
    print("=" * 60)

    g = two_hub_tree(3)
    for picture in Picture:
        for p in (0.2, 0.6):
            params = CascadeParams(p=p, picture=picture, rng_seed=21)
            mc = estimate(g, [0], params, trials=6000)
            exact = exact_influence(g, [0], p)
            print(f"  {picture.value} p={p}: {mc.mean:.4f} +- {mc.std_error:.4f} vs {exact:.4f}")
            assert abs(mc.mean - exact) <= 4 * mc.std_error
            assert mc.trials == 6000

    print("\n  [PASS] Monte-Carlo agrees with enumeration")


def test_summaries_and_determinism():
    print("\n" + "=" * 60)
    print("TEST: Summaries and determinism")
    print("=" * 60)

    # samples 1, 1, 2, 2: lower median 1
    summary = summarize_histogram(np.array([0, 2, 2]))
    assert summary.median == 1
    assert summary.mean == pytest.approx(1.5)
    assert summary.std_error == pytest.approx(np.std([1, 1, 2, 2], ddof=1) / 2)
    with pytest.raises(InputError):
        summarize_histogram(np.zeros(3, dtype=np.int64))

    g = star(6)
    params = CascadeParams(p=0.4, rng_seed=3)
    serial = estimate(g, [1], params, trials=5000, workers=1, keep_samples=True)
    parallel = estimate(g, [1], params, trials=5000, workers=2, keep_samples=True)
    print(f"  serial {serial.mean:.4f}, parallel {parallel.mean:.4f}")
    assert serial.mean == parallel.mean
    assert serial.median == parallel.median
    assert np.array_equal(serial.histogram, parallel.histogram)
    assert serial.histogram.sum() == 5000

    with pytest.raises(InputError):
        estimate(g, [1], params, trials=0)

    print("\n  [PASS] Estimates are deterministic")


def test_monotone_in_p_and_median_mean():
    print("\n" + "=" * 60)
    print("TEST: Monotone in p, median near mean")
    print("=" * 60)

    g = generate_er(300, 3.0, rng_seed=21)
    seeds = [int(np.argmax(g.degrees)), 5]
    previous = None
    for i, p in enumerate((0.1, 0.2, 0.3, 0.4, 0.5, 0.7, 0.9)):
        current = estimate(g, seeds, CascadeParams(p=p, rng_seed=i), trials=3000)
        if previous is not None:
            slack = 3 * math.hypot(previous.std_error, current.std_error)
            assert current.mean >= previous.mean - slack
        previous = current

    # away from the transition the median and the mean agree within 1% of n
    n = 1000
    big = generate_er(n, 3.0, rng_seed=22)
    hub = int(np.argmax(big.degrees))
    for p in (0.05, 0.9):
        result = estimate(big, [hub], CascadeParams(p=p, rng_seed=7), trials=4000)
        print(f"  p={p}: median {result.median}, mean {result.mean:.2f}")
        assert abs(result.median - result.mean) <= 0.01 * n

    print("\n  [PASS] Influence grows with p")


def test_exact_distribution_and_budget():
    print("\n" + "=" * 60)
    print("TEST: Exact distribution and budget")
    print("=" * 60)

    g = two_hub_tree(2)
    dist = exact_influence_distribution(g, [1], 0.4)
    assert dist.sum() == pytest.approx(1.0)
    assert np.dot(np.arange(dist.size), dist) == pytest.approx(exact_influence(g, [1], 0.4))
    assert dist[0] == 0.0

    edge = Graph.from_edges(2, [(0, 1)])
    assert exact_influence_distribution(edge, [0], 0.3).tolist() == pytest.approx([0.0, 0.7, 0.3])

    too_big = path(EXACT_EDGE_BUDGET + 2)
    with pytest.raises(BudgetError):
        exact_influence(too_big, [0], 0.5)
    with pytest.raises(InputError):
        exact_influence(path(3), [0])

    print("\n  [PASS] Distribution sums to one, budget enforced")


def test_best_node_switch():
    """On the two-hub tree the best single seed moves from a hub to the center at (m-1)/m."""
    print("\n" + "=" * 60)
    print("TEST: Best-node switch")
    print("=" * 60)

    m = 5
    g = two_hub_tree(m)
    assert best_single_node_exact(g, 0.5) == 1
    assert best_single_node_exact(g, 0.95) == 0

    crossing, below, above = locate_best_node_switch(g, 0.5, 0.95)
    print(f"  crossing at p={crossing:.5f}, {below} -> {above}")
    assert below == 1 and above == 0
    assert crossing == pytest.approx((m - 1) / m, abs=1e-4)

    with pytest.raises(InputError):
        locate_best_node_switch(g, 0.1, 0.2)

    print("\n  [PASS] Switch located at the analytic crossing")


def test_tied_hubs():
    """Below the crossing both hubs are exact maximizers; any pick among them is right."""
    print("\n" + "=" * 60)
    print("TEST: Tied hubs")
    print("=" * 60)

    g = two_hub_tree(5)
    singles = exact_single_node_influences(g, 0.75)
    print(f"  exact influences of nodes 0..2: {singles[:3].round(6).tolist()}")
    assert singles[1] == pytest.approx(singles[2], rel=1e-12)
    assert singles[1] > singles[0]
    assert best_single_nodes_exact(g, 0.75) == (1, 2)
    assert best_single_node_exact(g, 0.75) == 1
    assert best_single_nodes_exact(g, 0.95) == (0,)

    picks = [
        select_hill_climb(g, 1, CascadeParams(p=0.3), trials_per_eval=2_000, rng_seed=run).seeds[0]
        for run in range(6)
    ]
    print(f"  hill-climbing picks at p=0.3: {picks}")
    assert set(picks) <= {1, 2}

    print("\n  [PASS] Either hub counts as the best node")


def main():
    """Run all tests."""
    print("\nInfluence Tests")
    print("=" * 60)

    test_exact_closed_forms()
    test_monte_carlo_agreement()
    test_summaries_and_determinism()
    test_monotone_in_p_and_median_mean()
    test_exact_distribution_and_budget()
    test_best_node_switch()
    test_tied_hubs()

    print("\n" + "=" * 60)
    print("All tests completed!")
    print("=" * 60)


if __name__ == "__main__":
    main()
