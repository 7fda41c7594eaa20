"""Plot digitization toolkit: synthetic corpora, set-prediction curve
regression, and calibrated raw-data export."""

from .core import (
    AxisCalibration,
    AxisScale,
    GroundTruthSet,
    IDENTITY_CALIBRATION,
    NormalizedCurve,
    PlotImage,
    PredictionSet,
    SampleGrid,
    apply_calibration,
    make_sample_grid,
    normalize_linear,
    normalize_log,
    unnormalize_linear,
    unnormalize_log,
)
from .curves import ControlPoints, generate_curve, spline_interpolate
from .corpus import (
    CorpusManifest,
    GeneratorConfig,
    RenderSpec,
    generate_corpus,
    generate_example,
    load_gt,
    load_image_array,
    load_manifest,
    render_plot_image,
    sample_render_spec,
)
from .losses import (
    LossBreakdown,
    assignment_set,
    loss_plot,
    loss_score,
    loss_total,
    pairwise_distances,
)
from .model import ApexNet, ArchitectureConfig, load_checkpoint, predict, save_checkpoint
from .training import EvalReport, TrainConfig, evaluate, predicted_count, train
from .extraction import ExtractionResult, export_csv, extract, filter_predictions
from .service import create_app

__version__ = "0.1.0"

__all__ = [
    "ApexNet",
    "ArchitectureConfig",
    "AxisCalibration",
    "AxisScale",
    "ControlPoints",
    "CorpusManifest",
    "EvalReport",
    "ExtractionResult",
    "GeneratorConfig",
    "GroundTruthSet",
    "IDENTITY_CALIBRATION",
    "LossBreakdown",
    "NormalizedCurve",
    "PlotImage",
    "PredictionSet",
    "RenderSpec",
    "SampleGrid",
    "TrainConfig",
    "apply_calibration",
    "assignment_set",
    "create_app",
    "evaluate",
    "export_csv",
    "extract",
    "filter_predictions",
    "generate_corpus",
    "generate_curve",
    "generate_example",
    "load_checkpoint",
    "load_gt",
    "load_image_array",
    "load_manifest",
    "loss_plot",
    "loss_score",
    "loss_total",
    "make_sample_grid",
    "normalize_linear",
    "normalize_log",
    "pairwise_distances",
    "predict",
    "predicted_count",
    "render_plot_image",
    "sample_render_spec",
    "save_checkpoint",
    "spline_interpolate",
    "train",
    "unnormalize_linear",
    "unnormalize_log",
]
