#!/usr/bin/env python3
"""
Tests for single cascade realizations.

Tests:
1. Boundary probabilities in both pictures
2. Static realizations agree with the vectorized batch
3. Batch cluster statistics
4. Noisy edge probabilities
5. Parameter and seed validation
"""

import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent.parent))

from cascade_lab.cascade import (
    CascadeParams,
    Picture,
    edge_probability_vector,
    percolation_batch,
    run_cascade,
    run_dynamic,
    run_static,
    sample_edge_probabilities,
)
from cascade_lab.errors import InputError, ParameterError
from cascade_lab.generators import generate_er
from cascade_lab.graph import Graph
from cascade_lab.influence import path


def test_boundary_probabilities():
    """p=0 reaches only the seeds, p=1 reaches the seeds' components."""
    print("\n" + "=" * 60)
    print("TEST: Boundary probabilities")
    print("=" * 60)

    g = Graph.from_edges(6, [(0, 1), (1, 2), (3, 4)])
    for picture in Picture:
        closed = run_cascade(g, [0, 3], CascadeParams(p=0.0, picture=picture, rng_seed=1))
        assert closed.influenced == frozenset({0, 3})

        opened = run_cascade(g, [0], CascadeParams(p=1.0, picture=picture, rng_seed=1))
        print(f"  {picture.value}: p=1 from 0 reaches {sorted(opened.influenced)}")
        assert opened.influenced == frozenset({0, 1, 2})
        assert opened.influenced_count == 3

    # on a path the dynamic picture needs one round per hop
    dynamic = run_dynamic(path(5), [0], CascadeParams(p=1.0, picture=Picture.DYNAMIC))
    assert dynamic.steps == 4
    static = run_static(path(5), [2], CascadeParams(p=1.0))
    assert static.largest_cluster_size == 5

    print("\n  [PASS] Boundary probabilities behave as expected")


def test_static_matches_batch():
    """Trial t of run_static opens the same edges as trial t of a batch."""
    print("\n" + "=" * 60)
    print("TEST: Static realization vs batch")
    print("=" * 60)

    g = generate_er(60, 2.5, rng_seed=4)
    params = CascadeParams(p=0.45, rng_seed=99)
    probs = edge_probability_vector(g, params)
    seeds = [0, 7, 19]
    batch = percolation_batch(g, probs, params.rng_seed, range(10, 30))
    influence = batch.influence(seeds)
    for row, t in enumerate(range(10, 30)):
        single = run_static(g, seeds, params, trial=t)
        assert single.influenced_count == influence[row]
        assert single.largest_cluster_size == batch.largest_cluster()[row]

    # same trial, same realization
    again = run_static(g, seeds, params, trial=12)
    assert again.influenced == run_static(g, seeds, params, trial=12).influenced

    print("\n  [PASS] Batch and single realizations agree")


def test_batch_cluster_statistics():
    print("\n" + "=" * 60)
    print("TEST: Batch cluster statistics")
    print("=" * 60)

    # every edge open: two components of sizes 3 and 2, plus an isolated node
    g = Graph.from_edges(6, [(0, 1), (1, 2), (3, 4)])
    batch = percolation_batch(g, np.ones(g.edge_count), 0, range(4))
    assert batch.trials == 4
    assert batch.largest_cluster().tolist() == [3, 3, 3, 3]
    assert batch.second_largest_cluster().tolist() == [2, 2, 2, 2]
    assert batch.cluster_counts().tolist() == [3, 3, 3, 3]
    assert batch.node_cluster_sizes()[0].tolist() == [3, 3, 3, 2, 2, 1]
    # seeds in the same cluster count once
    assert batch.influence([0, 2]).tolist() == [3, 3, 3, 3]
    assert batch.influence([0, 3]).tolist() == [5, 5, 5, 5]

    single = percolation_batch(Graph.from_edges(1, []), np.zeros(0), 0, range(2))
    assert single.second_largest_cluster().tolist() == [0, 0]

    print("\n  [PASS] Cluster statistics are correct")


def test_noisy_probabilities():
    """Truncated normal p_uv: inside [0, 1], centered near p, reproducible."""
    print("\n" + "=" * 60)
    print("TEST: Noisy edge probabilities")
    print("=" * 60)

    g = generate_er(2000, 4.0, rng_seed=2)
    noisy = sample_edge_probabilities(g, 0.5, 0.1, rng_seed=8)
    probs = noisy.edge_probabilities
    print(f"  mean {probs.mean():.4f} sd {probs.std():.4f}")
    assert probs.min() >= 0.0 and probs.max() <= 1.0
    assert probs.mean() == pytest.approx(0.5, abs=0.01)
    assert probs.std() == pytest.approx(0.1, abs=0.01)
    assert np.array_equal(probs, sample_edge_probabilities(g, 0.5, 0.1, rng_seed=8).edge_probabilities)

    # near the boundary re-drawing keeps every value inside [0, 1]
    edge = sample_edge_probabilities(g, 0.02, 0.1, rng_seed=3).edge_probabilities
    assert edge.min() >= 0.0 and edge.max() <= 1.0
    # truncation at 0 pushes the mean above p
    print(f"  p=0.02 sigma=0.1: mean {edge.mean():.4f}")
    assert edge.mean() > 0.02

    uniform = sample_edge_probabilities(g, 0.3, 0.0, rng_seed=8)
    assert (uniform.edge_probabilities == 0.3).all()

    # a graph carrying p_uv uses them regardless of params.p
    assert np.array_equal(edge_probability_vector(noisy, CascadeParams(p=0.9)), probs)

    print("\n  [PASS] Noisy probabilities are sampled correctly")


def test_validation():
    print("\n" + "=" * 60)
    print("TEST: Validation")
    print("=" * 60)

    g = path(4)
    with pytest.raises(ParameterError):
        CascadeParams(p=1.5)
    with pytest.raises(ParameterError):
        CascadeParams(p=0.5, noise_sigma=-0.1)
    with pytest.raises(InputError):
        run_static(g, [], CascadeParams(p=0.5))
    with pytest.raises(InputError):
        run_dynamic(g, [4], CascadeParams(p=0.5))

    params = CascadeParams(p=0.2, rng_seed=5)
    changed = params.replace(p=0.7)
    assert changed.p == 0.7 and changed.rng_seed == 5

    print("\n  [PASS] Invalid parameters are rejected")


def main():
    """Run all tests."""
    print("\nCascade Tests")
    print("=" * 60)

    test_boundary_probabilities()
    test_static_matches_batch()
    test_batch_cluster_statistics()
    test_noisy_probabilities()
    test_validation()

    print("\n" + "=" * 60)
    print("All tests completed!")
    print("=" * 60)


if __name__ == "__main__":
    main()
