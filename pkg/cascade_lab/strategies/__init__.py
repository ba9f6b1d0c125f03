"""Seed-selection strategies: random benchmark, hill-climbing, random-local optimization."""

from .base import (
    DEFAULT_MASS,
    DEFAULT_TRIALS_PER_EVAL,
    SeedSelection,
    StrategyName,
    greedy_maximize,
    suggested_mass,
)
from .hill_climb import select_hill_climb, select_hill_climb_exact
from .local import grow_subnetwork, select_local
from .random_choice import select_random
from .registry import Strategy, StrategyRegistry

__all__ = [
    "DEFAULT_MASS",
    "DEFAULT_TRIALS_PER_EVAL",
    "SeedSelection",
    "StrategyName",
    "greedy_maximize",
    "suggested_mass",
    "select_random",
    "select_hill_climb",
    "select_hill_climb_exact",
    "select_local",
    "grow_subnetwork",
    "Strategy",
    "StrategyRegistry",
]
