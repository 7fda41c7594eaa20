"""Shared domain types and the normalized-to-real coordinate transforms.

Everything downstream (generation, training, extraction, the HTTP service)
speaks in terms of curves sampled on a fixed grid of x-positions inside the
unit square.  Calibration maps those normalized coordinates to real axis
units; it is the only place unit conversion happens, so the CLI and the
service export identical numbers by construction.

All values on this path are float64.  Types are immutable after
construction and every function here is pure.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np

DEFAULT_N_POINTS = 1024
DEFAULT_MAX_PLOTS = 10

# Predicted values this far outside [0,1] are treated as numeric noise and
# clamped; anything worse is a real bug and rejected.
_CLAMP_SLACK = 1e-6


class AxisScale(str, enum.Enum):
    LINEAR = "linear"
    LOG = "log"


@dataclass(frozen=True)
class SampleGrid:
    """`n_points` equally spaced x-positions spanning [0, 1]."""

    n_points: int
    xs: np.ndarray = field(repr=False)

    def __len__(self) -> int:
        return self.n_points


def make_sample_grid(n_points: int = DEFAULT_N_POINTS) -> SampleGrid:
    """Build the fixed sample grid with xs[i] = i / (n_points - 1)."""
    if n_points < 2:
        raise ValueError(f"n_points must be >= 2, got {n_points}")
    xs = np.arange(n_points, dtype=np.float64) / (n_points - 1)
    xs.setflags(write=False)
    return SampleGrid(n_points=int(n_points), xs=xs)


@dataclass(frozen=True)
class NormalizedCurve:
    """y-values on the sample grid, unitless.

    Ground-truth curves always lie in [0, 1]; model outputs do too up to
    sigmoid rounding, which `PredictionSet` clamps away.
    """

    ys: np.ndarray = field(repr=False)

    def __post_init__(self):
        ys = np.asarray(self.ys, dtype=np.float64)
        if ys.ndim != 1:
            raise ValueError(f"curve must be 1-D, got shape {ys.shape}")
        if not np.all(np.isfinite(ys)):
            raise ValueError("curve contains non-finite values")
        ys = ys.copy()
        ys.setflags(write=False)
        object.__setattr__(self, "ys", ys)

    def __len__(self) -> int:
        return len(self.ys)


@dataclass(frozen=True)
class AxisCalibration:
    """User-supplied axis extents plus per-axis scale kind.

    The identity calibration is (0, 1, 0, 1, linear, linear): applying it
    returns normalized coordinates unchanged.
    """

    x_min: float
    x_max: float
    y_min: float
    y_max: float
    x_scale: AxisScale = AxisScale.LINEAR
    y_scale: AxisScale = AxisScale.LINEAR

    def __post_init__(self):
        object.__setattr__(self, "x_scale", AxisScale(self.x_scale))
        object.__setattr__(self, "y_scale", AxisScale(self.y_scale))
        for name in ("x_min", "x_max", "y_min", "y_max"):
            v = float(getattr(self, name))
            if not np.isfinite(v):
                raise ValueError(f"{name} must be finite")
            object.__setattr__(self, name, v)
        if self.x_min >= self.x_max:
            raise ValueError("x_min must be < x_max")
        if self.y_min >= self.y_max:
            raise ValueError("y_min must be < y_max")
        if self.x_scale is AxisScale.LOG and self.x_min <= 0:
            raise ValueError("log x-axis requires positive x_min and x_max")
        if self.y_scale is AxisScale.LOG and self.y_min <= 0:
            raise ValueError("log y-axis requires positive y_min and y_max")


IDENTITY_CALIBRATION = AxisCalibration(0.0, 1.0, 0.0, 1.0)


@dataclass(frozen=True)
class PlotImage:
    """RGB raster with channel values in [0, 1], shape (height, width, 3)."""

    pixels: np.ndarray = field(repr=False)

    def __post_init__(self):
        px = np.asarray(self.pixels, dtype=np.float64)
        if px.ndim != 3 or px.shape[2] != 3:
            raise ValueError(f"pixels must have shape (m, n, 3), got {px.shape}")
        if px.size == 0:
            raise ValueError("image is empty")
        if px.min() < 0.0 or px.max() > 1.0:
            raise ValueError("channel values must lie in [0, 1]")
        px = px.copy()
        px.setflags(write=False)
        object.__setattr__(self, "pixels", px)

    @property
    def height(self) -> int:
        return self.pixels.shape[0]

    @property
    def width(self) -> int:
        return self.pixels.shape[1]


@dataclass(frozen=True)
class PredictionSet:
    """Fixed-size set of candidate curves with confidence scores.

    `curves` has shape (max_plots, n_points) and `scores` shape
    (max_plots,).  Values marginally outside [0, 1] (sigmoid rounding
    noise) are clamped on construction.
    """

    curves: np.ndarray = field(repr=False)
    scores: np.ndarray = field(repr=False)

    def __post_init__(self):
        curves = np.asarray(self.curves, dtype=np.float64)
        scores = np.asarray(self.scores, dtype=np.float64)
        if curves.ndim != 2:
            raise ValueError(f"curves must be 2-D, got shape {curves.shape}")
        if scores.shape != (curves.shape[0],):
            raise ValueError(
                f"scores shape {scores.shape} does not match {curves.shape[0]} curves"
            )
        for name, arr in (("curves", curves), ("scores", scores)):
            if not np.all(np.isfinite(arr)):
                raise ValueError(f"{name} contain non-finite values")
            if arr.size and (arr.min() < -_CLAMP_SLACK or arr.max() > 1.0 + _CLAMP_SLACK):
                raise ValueError(f"{name} lie outside [0, 1] beyond numeric noise")
        curves = np.clip(curves, 0.0, 1.0)
        scores = np.clip(scores, 0.0, 1.0)
        curves.setflags(write=False)
        scores.setflags(write=False)
        object.__setattr__(self, "curves", curves)
        object.__setattr__(self, "scores", scores)

    @property
    def max_plots(self) -> int:
        return self.curves.shape[0]

    @property
    def n_points(self) -> int:
        return self.curves.shape[1]


@dataclass(frozen=True)
class GroundTruthSet:
    """The k true curves of one training example, shape (k, n_points)."""

    curves: np.ndarray = field(repr=False)
    max_plots: int = DEFAULT_MAX_PLOTS

    def __post_init__(self):
        curves = np.asarray(self.curves, dtype=np.float64)
        if curves.ndim != 2:
            raise ValueError(f"curves must be 2-D, got shape {curves.shape}")
        if not 1 <= curves.shape[0] <= self.max_plots:
            raise ValueError(
                f"plot count must be in [1, {self.max_plots}], got {curves.shape[0]}"
            )
        if not np.all(np.isfinite(curves)):
            raise ValueError("curves contain non-finite values")
        if curves.min() < 0.0 or curves.max() > 1.0:
            raise ValueError("ground-truth values must lie in [0, 1]")
        curves = curves.copy()
        curves.setflags(write=False)
        object.__setattr__(self, "curves", curves)

    @property
    def k(self) -> int:
        return self.curves.shape[0]


def _check_bounds(lo, hi) -> None:
    if not lo < hi:
        raise ValueError(f"bounds must satisfy lo < hi, got lo={lo}, hi={hi}")


def unnormalize_linear(v, lo: float, hi: float):
    """Map v in [0,1] onto [lo, hi] linearly: v*hi + (1-v)*lo."""
    _check_bounds(lo, hi)
    v = np.asarray(v, dtype=np.float64)
    out = v * hi + (1.0 - v) * lo
    return float(out) if out.ndim == 0 else out


def normalize_linear(x, lo: float, hi: float):
    """Inverse of `unnormalize_linear`."""
    _check_bounds(lo, hi)
    x = np.asarray(x, dtype=np.float64)
    out = (x - lo) / (hi - lo)
    return float(out) if out.ndim == 0 else out


def unnormalize_log(v, lo: float, hi: float):
    """Map v in [0,1] onto [lo, hi] geometrically: lo * (hi/lo)**v."""
    if lo <= 0 or hi <= 0:
        raise ValueError(f"log bounds must be positive, got lo={lo}, hi={hi}")
    _check_bounds(lo, hi)
    v = np.asarray(v, dtype=np.float64)
    out = lo * (hi / lo) ** v
    return float(out) if out.ndim == 0 else out


def normalize_log(x, lo: float, hi: float):
    """Inverse of `unnormalize_log`."""
    if lo <= 0 or hi <= 0:
        raise ValueError(f"log bounds must be positive, got lo={lo}, hi={hi}")
    _check_bounds(lo, hi)
    x = np.asarray(x, dtype=np.float64)
    out = np.log(x / lo) / np.log(hi / lo)
    return float(out) if out.ndim == 0 else out


_UNNORMALIZE = {
    AxisScale.LINEAR: unnormalize_linear,
    AxisScale.LOG: unnormalize_log,
}


def unnormalize(v, lo: float, hi: float, scale: AxisScale):
    """Dispatch to the linear or log transform by scale kind."""
    return _UNNORMALIZE[AxisScale(scale)](v, lo, hi)


def apply_calibration(
    curve: NormalizedCurve, grid: SampleGrid, calib: AxisCalibration
) -> np.ndarray:
    """Convert one normalized curve to real axis units.

    Returns an array of shape (n_points, 2) whose rows are (x, y) pairs in
    the calibrated units.  The identity calibration returns the grid and
    curve values unchanged.
    """
    if len(curve) != grid.n_points:
        raise ValueError(
            f"curve length {len(curve)} does not match grid length {grid.n_points}"
        )
    xs = _UNNORMALIZE[calib.x_scale](grid.xs, calib.x_min, calib.x_max)
    ys = _UNNORMALIZE[calib.y_scale](curve.ys, calib.y_min, calib.y_max)
    return np.column_stack([xs, ys])
