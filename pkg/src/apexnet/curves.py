"""Random ground-truth curve synthesis.

A curve is drawn by picking c in {4..32} equally spaced knots on [0,1],
assigning each a uniform random y in [0,1], passing a natural cubic spline
through them, and sampling the spline on the fixed grid.  Splines through
[0,1] knots can overshoot, so sampled values are clamped back to [0,1];
the spline itself is left untouched.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.interpolate import CubicSpline

from .core import NormalizedCurve, SampleGrid

MIN_KNOTS = 4
MAX_KNOTS = 32


@dataclass(frozen=True)
class ControlPoints:
    """c spline knots: equally spaced x-positions with y-values in [0,1]."""

    knot_xs: np.ndarray = field(repr=False)
    knot_ys: np.ndarray = field(repr=False)

    def __post_init__(self):
        xs = np.asarray(self.knot_xs, dtype=np.float64)
        ys = np.asarray(self.knot_ys, dtype=np.float64)
        c = len(xs)
        if not MIN_KNOTS <= c <= MAX_KNOTS:
            raise ValueError(f"knot count must be in [{MIN_KNOTS}, {MAX_KNOTS}], got {c}")
        if ys.shape != xs.shape:
            raise ValueError("knot_xs and knot_ys must have the same length")
        expected = np.arange(c, dtype=np.float64) / (c - 1)
        if not np.allclose(xs, expected, rtol=0.0, atol=1e-12):
            raise ValueError("knot_xs must be equally spaced on [0, 1]")
        if ys.min() < 0.0 or ys.max() > 1.0:
            raise ValueError("knot_ys must lie in [0, 1]")
        xs, ys = expected, ys.copy()
        xs.setflags(write=False)
        ys.setflags(write=False)
        object.__setattr__(self, "knot_xs", xs)
        object.__setattr__(self, "knot_ys", ys)

    @property
    def c(self) -> int:
        return len(self.knot_xs)

    @classmethod
    def from_ys(cls, knot_ys) -> "ControlPoints":
        ys = np.asarray(knot_ys, dtype=np.float64)
        xs = np.arange(len(ys), dtype=np.float64) / max(len(ys) - 1, 1)
        return cls(knot_xs=xs, knot_ys=ys)


def spline_interpolate(knots: ControlPoints, query_xs) -> np.ndarray:
    """Evaluate the natural cubic spline through `knots` at `query_xs`.

    Natural boundary conditions: zero second derivative at both end knots.
    Interpolation is exact at knot locations; queries must lie in [0, 1].
    """
    q = np.asarray(query_xs, dtype=np.float64)
    if q.size and (q.min() < 0.0 or q.max() > 1.0):
        raise ValueError("query positions must lie in [0, 1]")
    spline = CubicSpline(knots.knot_xs, knots.knot_ys, bc_type="natural")
    return spline(q)


def generate_curve(rng: np.random.Generator, grid: SampleGrid) -> NormalizedCurve:
    """Draw one random curve on `grid`, deterministic given the rng state.

    Draw order is fixed (knot count first, then knot y-values) so corpus
    regeneration from the same seed is byte-identical.
    """
    c = int(rng.integers(MIN_KNOTS, MAX_KNOTS + 1))
    knot_ys = rng.random(c)
    knots = ControlPoints.from_ys(knot_ys)
    ys = spline_interpolate(knots, grid.xs)
    return NormalizedCurve(ys=np.clip(ys, 0.0, 1.0))
