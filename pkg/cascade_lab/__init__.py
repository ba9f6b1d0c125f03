"""
cascade_lab - independent-cascade seed selection across the percolation
transition.

Simulates the independent cascade model on networks, compares seed
selection strategies (random, hill-climbing, local sub-network
optimization) across the transmission probability p, and measures where
optimizing is worth its cost.
"""

from .cascade import CascadeParams, Picture, run_cascade
from .errors import CascadeLabError
from .generators import GeneratorSpec, generate
from .graph import Graph
from .influence import estimate, exact_influence

__version__ = "0.1.0"

__all__ = [
    "CascadeParams",
    "Picture",
    "run_cascade",
    "CascadeLabError",
    "GeneratorSpec",
    "generate",
    "Graph",
    "estimate",
    "exact_influence",
]
