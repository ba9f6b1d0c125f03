"""Grids of contagion probabilities for sweeps."""

import math
from dataclasses import dataclass
from typing import Iterable, Tuple

import numpy as np

from ..errors import InputError

FINE_STEP = 0.0025
COARSE_STEP = 0.025
CRITICAL_HALF_WIDTH = 0.1
_DECIMALS = 10


def _lattice(step: float, lo: float, hi: float) -> np.ndarray:
    """Multiples of `step` inside [lo, hi]."""
    first = math.ceil(lo / step - 1e-9)
    last = math.floor(hi / step + 1e-9)
    return np.arange(first, last + 1) * step


@dataclass(frozen=True)
class PGrid:
    """
    Strictly increasing contagion probabilities in [0, 1].

    `construction` records how the grid was built, for the output echo.
    """
    points: Tuple[float, ...]
    construction: str = "explicit"

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=np.float64)
        if pts.size == 0:
            raise InputError("grid has no points")
        if pts[0] < 0.0 or pts[-1] > 1.0:
            raise InputError(f"grid points must lie in [0, 1], got [{pts[0]}, {pts[-1]}]")
        if np.any(np.diff(pts) <= 0):
            raise InputError("grid points must be strictly increasing")
        object.__setattr__(self, "points", tuple(float(p) for p in pts))

    def __len__(self) -> int:
        return len(self.points)

    def __iter__(self):
        return iter(self.points)

    @property
    def array(self) -> np.ndarray:
        return np.asarray(self.points)

    @classmethod
    def explicit(cls, points: Iterable[float]) -> "PGrid":
        return cls(tuple(points), "explicit")

    @classmethod
    def uniform(cls, step: float) -> "PGrid":
        """0, step, 2*step, ... and always 1."""
        if not 0.0 < step <= 1.0:
            raise InputError(f"grid step must lie in (0, 1], got {step}")
        pts = np.union1d(np.round(_lattice(step, 0.0, 1.0), _DECIMALS), [0.0, 1.0])
        return cls(tuple(pts), f"uniform(step={step})")

    @classmethod
    def refined(cls, coarse_step: float, fine_step: float, fine_lo: float, fine_hi: float) -> "PGrid":
        """
        Fine step inside [fine_lo, fine_hi], coarse step elsewhere.

        Both lattices are multiples of their step; 0 and 1 are always
        included and the window is clipped to [0, 1].
        """
        if not 0.0 < fine_step <= coarse_step <= 1.0:
            raise InputError(
                f"need 0 < fine_step <= coarse_step <= 1, got fine={fine_step}, coarse={coarse_step}"
            )
        lo, hi = max(0.0, fine_lo), min(1.0, fine_hi)
        if lo > hi:
            raise InputError(f"fine window [{fine_lo}, {fine_hi}] does not meet [0, 1]")
        coarse = _lattice(coarse_step, 0.0, 1.0)
        coarse = coarse[(coarse < lo) | (coarse > hi)]
        fine = _lattice(fine_step, lo, hi)
        pts = np.union1d(np.round(np.concatenate([coarse, fine]), _DECIMALS), [0.0, 1.0])
        return cls(
            tuple(pts),
            f"refined(coarse={coarse_step}, fine={fine_step}, window=[{lo:.6g}, {hi:.6g}])",
        )

    @classmethod
    def around_critical(
        cls,
        p_c: float,
        half_width: float = CRITICAL_HALF_WIDTH,
        fine_step: float = FINE_STEP,
        coarse_step: float = COARSE_STEP
    ) -> "PGrid":
        """Default sweep grid: fine steps within half_width of p_c."""
        return cls.refined(coarse_step, fine_step, p_c - half_width, p_c + half_width)
