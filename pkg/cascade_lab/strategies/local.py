"""
Random-local optimization.

Pick k random roots, grow a sub-network of at most M nodes around each
by breadth-first frontier expansion, and in each sub-network keep the
node with the largest Monte-Carlo influence computed on the sub-network
alone (edges leaving it are ignored). The work is k * M * trials_per_eval
realizations at most, whatever the size of the network.
"""

import logging
from typing import List, Optional, Set

import numpy as np

from ..cascade import CascadeParams, edge_probability_vector, percolation_batch
from ..errors import ParameterError
from ..graph import Graph
from ..rng import SELECTION_STREAM, derive_seed, stream
from .base import (
    DEFAULT_MASS,
    DEFAULT_TRIALS_PER_EVAL,
    SeedSelection,
    StrategyName,
    check_k,
    check_trials,
)

logger = logging.getLogger(__name__)

MAX_REROOTS = 10


def grow_subnetwork(g: Graph, root: int, mass: int) -> List[int]:
    """
    Nodes of the sub-network grown around `root`, sorted by id.

    Whole frontiers are added while the sub-network is below `mass`; the
    last frontier is cut to fit, smallest ids first. Stops early when the
    root's component is exhausted.
    """
    members: Set[int] = {root}
    frontier = [root]
    while len(members) < mass and frontier:
        reached = set()
        for u in frontier:
            reached.update(int(v) for v in g.neighbors(u))
        nxt = sorted(reached - members)
        room = mass - len(members)
        if len(nxt) > room:
            nxt = nxt[:room]
        members.update(nxt)
        frontier = nxt
    return sorted(members)


def best_in_subnetwork(
    g: Graph,
    members: List[int],
    params: CascadeParams,
    trials_per_eval: int,
    rng_seed: int
) -> int:
    """Member with the largest mean influence inside the induced sub-network (ties: smallest id)."""
    sub, _ = g.subgraph(members)
    probs = edge_probability_vector(sub, params)
    batch = percolation_batch(sub, probs, rng_seed, range(trials_per_eval))
    totals = batch.node_cluster_sizes().sum(axis=0)
    return members[int(np.argmax(totals))]


def select_local(
    g: Graph,
    k: int,
    mass: int = DEFAULT_MASS,
    params: Optional[CascadeParams] = None,
    trials_per_eval: int = DEFAULT_TRIALS_PER_EVAL,
    rng_seed: int = 0,
    max_reroots: int = MAX_REROOTS
) -> SeedSelection:
    """
    Random-local-optimization seed set.

    When a sub-network's winner was already picked by an earlier one, the
    later sub-network is re-rooted at a fresh random node (up to
    `max_reroots` times); if every retry collides the slot falls back to
    its original root, then to its smallest unpicked member, then to the
    smallest unpicked node.

    Each accepted sub-network is charged min(M, n) nodes, so cost_steps is
    k * min(M, n) * trials_per_eval: a constant for every network larger
    than M, and never above k * M * trials_per_eval. Realizations actually
    run on accepted sub-networks (smaller when a root's component holds
    fewer than M nodes) and re-rooting work are reported in wall_params,
    with their sum as work_steps.
    """
    check_k(g, k)
    check_trials(trials_per_eval)
    if mass < 1:
        raise ParameterError(f"sub-network mass M must be at least 1, got {mass}")
    if params is None:
        raise ParameterError("cascade parameters are required")

    if g.edge_probabilities is None and params.noise_sigma > 0:
        g = g.with_edge_probabilities(edge_probability_vector(g, params))

    charged_mass = min(mass, g.n)
    rng = stream(rng_seed, SELECTION_STREAM)
    roots = [int(r) for r in rng.choice(g.n, size=k, replace=False)]
    used_roots = set(roots)
    chosen: List[int] = []
    evaluated = 0
    reroots = 0
    reroot_cost = 0

    for slot, root in enumerate(roots):
        members = grow_subnetwork(g, root, mass)
        winner = best_in_subnetwork(
            g, members, params, trials_per_eval, derive_seed(rng_seed, SELECTION_STREAM, slot, 0)
        )
        accepted_size = len(members)

        attempt = 0
        while winner in chosen and attempt < max_reroots and len(used_roots) < g.n:
            attempt += 1
            reroots += 1
            fresh = int(rng.integers(g.n))
            while fresh in used_roots:
                fresh = int(rng.integers(g.n))
            used_roots.add(fresh)
            candidate_members = grow_subnetwork(g, fresh, mass)
            reroot_cost += len(candidate_members) * trials_per_eval
            candidate = best_in_subnetwork(
                g, candidate_members, params, trials_per_eval,
                derive_seed(rng_seed, SELECTION_STREAM, slot, attempt)
            )
            logger.warning("sub-network %d collided on node %d, re-rooted at %d", slot, winner, fresh)
            winner, accepted_size = candidate, len(candidate_members)

        if winner in chosen:
            winner = _fallback(g.n, root, members, chosen)
            accepted_size = len(members)

        chosen.append(winner)
        evaluated += accepted_size * trials_per_eval

    return SeedSelection(
        seeds=tuple(chosen),
        strategy=StrategyName.LOCAL,
        cost_steps=k * charged_mass * trials_per_eval,
        wall_params={
            "k": k,
            "M": mass,
            "charged_M": charged_mass,
            "trials_per_eval": trials_per_eval,
            "roots": roots,
            "reroots": reroots,
            "reroot_cost_steps": reroot_cost,
            "evaluated_steps": evaluated,
            "work_steps": evaluated + reroot_cost,
        },
    )


def _fallback(n: int, root: int, members: List[int], chosen: List[int]) -> int:
    if root not in chosen:
        return root
    for u in members:
        if u not in chosen:
            return u
    taken = set(chosen)
    return next(u for u in range(n) if u not in taken)
