"""Convolutional set-prediction network and checkpoint serialization.

The network stretches its input to a fixed square size, runs a stack of
conv + batch-norm + ReLU blocks (most followed by 2x2 max-pooling), and
reads out two sigmoid heads from 1x1 convolutions: a (max_plots,
points_per_plot) curve tensor and a (max_plots,) score vector.

Checkpoints are a single file: a JSON header carrying the architecture
config and its hash, followed by the torch-serialized parameters.  A
loader given an expected architecture refuses any header whose config
hash differs.
"""

from __future__ import annotations

import hashlib
import io
import json
import struct
from dataclasses import dataclass, field

import numpy as np
import torch
from torch import nn
from torch.nn import functional as F

from .core import DEFAULT_MAX_PLOTS, DEFAULT_N_POINTS, PlotImage, PredictionSet
from .errors import InputError, ModelConfigError

_CHECKPOINT_MAGIC = b"APEXNET1"

DEFAULT_INPUT_SIZE = 512
# (out_channels, has_pool) per block; nine pooled blocks take 512 -> 1.
DEFAULT_BLOCKS = (
    (16, True),
    (32, True),
    (64, True),
    (128, True),
    (256, True),
    (256, True),
    (512, True),
    (512, True),
    (512, True),
)


@dataclass(frozen=True)
class ArchitectureConfig:
    """Shape of the network; hashable so checkpoints can be validated."""

    input_size: int = DEFAULT_INPUT_SIZE
    blocks: tuple = DEFAULT_BLOCKS
    max_plots: int = DEFAULT_MAX_PLOTS
    points_per_plot: int = DEFAULT_N_POINTS

    def __post_init__(self):
        blocks = tuple((int(ch), bool(pool)) for ch, pool in self.blocks)
        object.__setattr__(self, "blocks", blocks)
        if not blocks:
            raise ModelConfigError("at least one block is required")
        if any(ch < 1 for ch, _ in blocks):
            raise ModelConfigError("block channel counts must be positive")
        if self.max_plots < 1 or self.points_per_plot < 2:
            raise ModelConfigError("head dimensions are out of range")
        size = self.input_size
        if size < 1:
            raise ModelConfigError("input_size must be positive")
        for _, pool in blocks:
            if pool:
                if size < 2:
                    raise ModelConfigError(
                        f"input_size {self.input_size} pools below 1 pixel"
                    )
                size //= 2

    def to_dict(self) -> dict:
        return {
            "input_size": self.input_size,
            "blocks": [list(b) for b in self.blocks],
            "max_plots": self.max_plots,
            "points_per_plot": self.points_per_plot,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "ArchitectureConfig":
        return cls(
            input_size=int(d["input_size"]),
            blocks=tuple((int(ch), bool(p)) for ch, p in d["blocks"]),
            max_plots=int(d["max_plots"]),
            points_per_plot=int(d["points_per_plot"]),
        )

    def hash(self) -> str:
        canon = json.dumps(self.to_dict(), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(canon.encode("utf-8")).hexdigest()


class ApexNet(nn.Module):
    """Conv/BN/ReLU block stack with sigmoid curve and score heads."""

    def __init__(self, config: ArchitectureConfig | None = None):
        super().__init__()
        self.config = config or ArchitectureConfig()
        layers = []
        in_ch = 3
        for out_ch, pool in self.config.blocks:
            layers.append(nn.Conv2d(in_ch, out_ch, kernel_size=3, padding=1))
            layers.append(nn.BatchNorm2d(out_ch))
            layers.append(nn.ReLU(inplace=True))
            if pool:
                layers.append(nn.MaxPool2d(2))
            in_ch = out_ch
        self.features = nn.Sequential(*layers)
        # Collapses any leftover spatial extent; identity for the default
        # stack, which already pools down to 1x1.
        self.squeeze = nn.AdaptiveAvgPool2d(1)
        k, n = self.config.max_plots, self.config.points_per_plot
        self.curve_head = nn.Conv2d(in_ch, k * n, kernel_size=1)
        self.score_head = nn.Conv2d(in_ch, k, kernel_size=1)

    def forward(self, x: torch.Tensor) -> tuple[torch.Tensor, torch.Tensor]:
        """Batch of RGB images -> (curves, scores), both sigmoid-squashed.

        x: (B, 3, H, W); any H, W is stretched to the configured square
        input size.  Returns shapes (B, max_plots, points_per_plot) and
        (B, max_plots).
        """
        size = self.config.input_size
        if x.shape[-2:] != (size, size):
            x = F.interpolate(x, size=(size, size), mode="bilinear", align_corners=False)
        h = self.squeeze(self.features(x))
        k, n = self.config.max_plots, self.config.points_per_plot
        curves = torch.sigmoid(self.curve_head(h)).reshape(-1, k, n)
        scores = torch.sigmoid(self.score_head(h)).reshape(-1, k)
        return curves, scores


def image_to_input(image) -> torch.Tensor:
    """PlotImage or (H, W, 3) array in [0,1] -> (1, 3, H, W) float32 tensor."""
    if isinstance(image, PlotImage):
        image = image.pixels
    arr = np.asarray(image, dtype=np.float32)
    if arr.ndim != 3 or arr.shape[2] != 3 or arr.size == 0:
        raise ValueError(f"expected a nonempty (H, W, 3) image, got shape {arr.shape}")
    return torch.from_numpy(np.ascontiguousarray(arr.transpose(2, 0, 1)))[None]


def predict(model: ApexNet, image) -> PredictionSet:
    """Run one image through the network in eval mode.

    Outputs are widened to float64 before entering the calibration path.
    """
    was_training = model.training
    model.eval()
    try:
        with torch.no_grad():
            curves, scores = model(image_to_input(image))
    finally:
        model.train(was_training)
    return PredictionSet(
        curves=curves[0].double().numpy(),
        scores=scores[0].double().numpy(),
    )


def save_checkpoint(path, model: ApexNet, meta: dict | None = None) -> None:
    """Write a single-file checkpoint: JSON header + parameters."""
    header = {
        "format": "apexnet-checkpoint",
        "version": 1,
        "config": model.config.to_dict(),
        "config_hash": model.config.hash(),
        "meta": meta or {},
    }
    header_bytes = json.dumps(header, sort_keys=True).encode("utf-8")
    payload = io.BytesIO()
    torch.save(model.state_dict(), payload)
    with open(path, "wb") as fh:
        fh.write(_CHECKPOINT_MAGIC)
        fh.write(struct.pack(">I", len(header_bytes)))
        fh.write(header_bytes)
        fh.write(payload.getvalue())


def read_checkpoint_header(path) -> dict:
    with open(path, "rb") as fh:
        magic = fh.read(len(_CHECKPOINT_MAGIC))
        if magic != _CHECKPOINT_MAGIC:
            raise InputError(f"{path} is not an apexnet checkpoint")
        (length,) = struct.unpack(">I", fh.read(4))
        return json.loads(fh.read(length).decode("utf-8"))


def load_checkpoint(path, expected: ArchitectureConfig | None = None) -> ApexNet:
    """Load a checkpoint, rejecting it if the architecture hash differs.

    With `expected=None` the embedded config is trusted (its hash is still
    recomputed and verified against the header).
    """
    with open(path, "rb") as fh:
        magic = fh.read(len(_CHECKPOINT_MAGIC))
        if magic != _CHECKPOINT_MAGIC:
            raise InputError(f"{path} is not an apexnet checkpoint")
        (length,) = struct.unpack(">I", fh.read(4))
        header = json.loads(fh.read(length).decode("utf-8"))
        payload = fh.read()
    config = ArchitectureConfig.from_dict(header["config"])
    if config.hash() != header.get("config_hash"):
        raise ModelConfigError(f"{path}: header config hash does not match its config")
    if expected is not None and expected.hash() != header["config_hash"]:
        raise ModelConfigError(
            f"{path}: checkpoint architecture {header['config_hash'][:12]} "
            f"differs from requested {expected.hash()[:12]}"
        )
    model = ApexNet(config)
    try:
        state = torch.load(io.BytesIO(payload), map_location="cpu", weights_only=True)
        model.load_state_dict(state)
    except Exception as exc:
        raise ModelConfigError(f"{path}: parameters do not match architecture: {exc}") from exc
    model.eval()
    return model


def checkpoint_file_hash(path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 20), b""):
            h.update(chunk)
    return h.hexdigest()
