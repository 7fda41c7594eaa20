"""End-user extraction: inference, confidence filtering, calibrated CSV.

Curves survive the filter only when their score strictly exceeds 0.5 and
are reported in descending-score order.  CSV output always has the header
plus one row per grid point; values are printed with 9 significant digits
and LF line endings so the CLI and the HTTP service emit identical bytes.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from PIL import Image

from .core import (
    AxisCalibration,
    PredictionSet,
    SampleGrid,
    make_sample_grid,
    unnormalize,
)
from .errors import InputError
from .model import load_checkpoint, predict

SCORE_THRESHOLD = 0.5


@dataclass(frozen=True)
class ExtractionResult:
    """Curves kept after thresholding, sorted by descending score."""

    curves: np.ndarray = field(repr=False)  # (kept, n_points)
    scores: np.ndarray = field(repr=False)
    indices: tuple  # original prediction slots

    def __len__(self) -> int:
        return len(self.indices)


def filter_predictions(pred: PredictionSet, threshold: float = SCORE_THRESHOLD) -> ExtractionResult:
    """Keep predictions whose score strictly exceeds the threshold."""
    keep = np.flatnonzero(pred.scores > threshold)
    # Descending score; mergesort keeps slot order stable among equal scores.
    order = keep[np.argsort(-pred.scores[keep], kind="stable")]
    return ExtractionResult(
        curves=pred.curves[order],
        scores=pred.scores[order],
        indices=tuple(int(i) for i in order),
    )


def load_image_file(path) -> np.ndarray:
    try:
        with Image.open(path) as im:
            return np.asarray(im.convert("RGB"), dtype=np.float64) / 255.0
    except (OSError, ValueError) as exc:
        raise InputError(f"cannot read image {path}: {exc}") from exc


def extract(image, checkpoint) -> ExtractionResult:
    """Forward pass plus strict 0.5 score filter.

    `image` is a path, a PlotImage, or an (H, W, 3) array in [0, 1];
    `checkpoint` is a path or an already loaded model.
    """
    if isinstance(image, (str, Path)):
        image = load_image_file(image)
    model = checkpoint if hasattr(checkpoint, "forward") else load_checkpoint(checkpoint)
    return filter_predictions(predict(model, image))


def export_csv(
    curves,
    calib: AxisCalibration,
    grid: SampleGrid | None = None,
    allow_empty: bool = False,
) -> str:
    """Render calibrated curves as CSV text.

    `curves` is a sequence of normalized curves (each grid-length) or an
    ExtractionResult.  Header is "x,y_1,...,y_M"; every grid point
    produces one row regardless of how many curves were kept.
    """
    if isinstance(curves, ExtractionResult):
        curves = curves.curves
    grid = grid or make_sample_grid()
    matrix = np.asarray(curves, dtype=np.float64)
    if matrix.size == 0:
        matrix = matrix.reshape(0, grid.n_points)
    if matrix.ndim != 2:
        raise ValueError(f"curves must be a 2-D matrix, got shape {matrix.shape}")
    if matrix.shape[0] == 0 and not allow_empty:
        raise ValueError("no curves to export (pass allow_empty=True to emit x only)")
    if matrix.shape[0] and matrix.shape[1] != grid.n_points:
        raise ValueError(
            f"curve length {matrix.shape[1]} does not match grid length {grid.n_points}"
        )

    xs = unnormalize(grid.xs, calib.x_min, calib.x_max, calib.x_scale)
    ys = unnormalize(matrix, calib.y_min, calib.y_max, calib.y_scale) if matrix.size else matrix

    header = "x" + "".join(f",y_{j + 1}" for j in range(matrix.shape[0]))
    lines = [header]
    for i in range(grid.n_points):
        row = f"{xs[i]:.9g}" + "".join(f",{ys[j, i]:.9g}" for j in range(matrix.shape[0]))
        lines.append(row)
    return "\n".join(lines) + "\n"
