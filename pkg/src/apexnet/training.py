"""Training and evaluation on a generated corpus.

A batch is a stack of resized images with per-example ground truth; the
batch objective is the sum of per-example totals, so each example's plot
loss runs over its true plot count only.  Checkpoint selection uses a
small held-out slice of the train split; the test split stays untouched
until `evaluate`.

The training log is JSONL with one record per optimizer step:
    {"step", "epoch", "loss_plot", "loss_score", "loss_total"}
(values are per-example means within the batch).
"""

from __future__ import annotations

import json
import logging
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
import torch
from torch.nn import functional as F

from .corpus import CorpusManifest, load_gt, load_image_array, load_manifest
from .errors import DataError, TrainingAbortedError
from .losses import loss_plot, loss_total
from .model import (
    ApexNet,
    ArchitectureConfig,
    load_checkpoint,
    predict,
    save_checkpoint,
)

log = logging.getLogger(__name__)

HOLDOUT_FRACTION = 0.05


@dataclass(frozen=True)
class TrainConfig:
    corpus: Path
    out_dir: Path
    epochs: int = 10
    batch_size: int = 16
    learning_rate: float = 1e-3
    optimizer: str = "adam"
    eval_interval: int = 1
    seed: int = 0
    arch: ArchitectureConfig = field(default_factory=ArchitectureConfig)

    def __post_init__(self):
        if self.batch_size < 1:
            raise ValueError(f"batch_size must be >= 1, got {self.batch_size}")
        if self.learning_rate <= 0:
            raise ValueError(f"learning_rate must be > 0, got {self.learning_rate}")
        if self.epochs < 0:
            raise ValueError(f"epochs must be >= 0, got {self.epochs}")
        if self.optimizer not in ("adam", "sgd"):
            raise ValueError(f"unknown optimizer {self.optimizer!r}")


@dataclass(frozen=True)
class TrainResult:
    best_checkpoint: Path
    last_checkpoint: Path
    log_path: Path
    initial_plot_loss: float
    final_plot_loss: float
    steps: int


@dataclass(frozen=True)
class EvalReport:
    e_plot: float
    e_count: float
    n_examples: int

    def __post_init__(self):
        if self.e_plot < 0 or self.e_count < 0:
            raise ValueError("metrics must be nonnegative")

    def to_json(self, checkpoint) -> str:
        return json.dumps(
            {
                "e_plot": self.e_plot,
                "e_count": self.e_count,
                "n_examples": self.n_examples,
                "checkpoint": str(checkpoint),
            }
        )


class _Examples:
    """Caches resized image tensors and ground-truth tensors for a split."""

    def __init__(self, manifest: CorpusManifest, entries, input_size: int):
        if not entries:
            raise DataError(f"no examples in split under {manifest.root}")
        self.root = manifest.root
        self.entries = list(entries)
        self.input_size = input_size
        self._cache: dict = {}

    def __len__(self) -> int:
        return len(self.entries)

    def __getitem__(self, i: int):
        if i not in self._cache:
            entry = self.entries[i]
            arr = load_image_array(self.root, entry)
            x = torch.from_numpy(arr.astype(np.float32).transpose(2, 0, 1))[None]
            x = F.interpolate(
                x, size=(self.input_size, self.input_size), mode="bilinear", align_corners=False
            )[0]
            # .copy() because the domain type's array is read-only.
            gt = torch.from_numpy(load_gt(self.root, entry).curves.copy()).float()
            self._cache[i] = (x, gt)
        return self._cache[i]


def _mean_plot_loss(model: ApexNet, data: _Examples, indices) -> float:
    """Per-example mean of the plot loss, evaluated in eval mode."""
    was_training = model.training
    model.eval()
    total = 0.0
    with torch.no_grad():
        for i in indices:
            x, gt = data[i]
            curves, _ = model(x[None])
            total += float(loss_plot(gt, curves[0]))
    model.train(was_training)
    return total / len(indices)


def _make_optimizer(config: TrainConfig, model: ApexNet):
    if config.optimizer == "adam":
        return torch.optim.Adam(model.parameters(), lr=config.learning_rate)
    return torch.optim.SGD(model.parameters(), lr=config.learning_rate)


def train(config: TrainConfig) -> TrainResult:
    """Minimize the total loss over the train split; returns checkpoint paths.

    Best/last checkpoints land in config.out_dir.  A non-finite loss
    aborts training with the most recent good checkpoints left on disk.
    """
    manifest = load_manifest(config.corpus)
    train_entries = manifest.split("train")
    if not train_entries:
        raise DataError(f"corpus {config.corpus} has no train split")

    torch.manual_seed(config.seed)
    shuffle_rng = np.random.default_rng(config.seed)

    # Held-out slice for checkpoint selection; test stays untouched.
    n = len(train_entries)
    n_hold = max(1, round(HOLDOUT_FRACTION * n)) if n >= 2 else 0
    fit_entries = train_entries[: n - n_hold]
    hold_entries = train_entries[n - n_hold :] if n_hold else []

    data = _Examples(manifest, fit_entries, config.arch.input_size)
    hold = _Examples(manifest, hold_entries, config.arch.input_size) if hold_entries else None

    model = ApexNet(config.arch)
    optimizer = _make_optimizer(config, model)

    out_dir = Path(config.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    best_path = out_dir / "best.ckpt"
    last_path = out_dir / "last.ckpt"
    log_path = out_dir / "train_log.jsonl"

    initial = _mean_plot_loss(model, data, range(len(data)))
    save_checkpoint(last_path, model, meta={"epoch": 0, "steps": 0})
    save_checkpoint(best_path, model, meta={"epoch": 0, "steps": 0})
    best_heldout = _mean_plot_loss(model, hold, range(len(hold))) if hold else math.inf

    step = 0
    with open(log_path, "w") as log_fh:
        for epoch in range(1, config.epochs + 1):
            order = shuffle_rng.permutation(len(data))
            model.train()
            for start in range(0, len(order), config.batch_size):
                batch = order[start : start + config.batch_size]
                xs = torch.stack([data[int(i)][0] for i in batch])
                curves, scores = model(xs)
                plot_sum = curves.new_zeros(())
                score_sum = curves.new_zeros(())
                for b, i in enumerate(batch):
                    _, gt = data[int(i)]
                    breakdown = loss_total(gt, curves[b], scores[b])
                    plot_sum = plot_sum + breakdown.plot_loss
                    score_sum = score_sum + breakdown.score_loss
                objective = plot_sum + score_sum
                if not torch.isfinite(objective):
                    raise TrainingAbortedError(
                        f"non-finite loss at step {step}; last checkpoint: {last_path}"
                    )
                optimizer.zero_grad()
                objective.backward()
                optimizer.step()
                step += 1
                plot_mean = float(plot_sum.detach()) / len(batch)
                score_mean = float(score_sum.detach()) / len(batch)
                record = {
                    "step": step,
                    "epoch": epoch,
                    "loss_plot": plot_mean,
                    "loss_score": score_mean,
                    # Summed after the float conversion so the logged identity
                    # loss_total == loss_plot + loss_score is exact.
                    "loss_total": plot_mean + score_mean,
                }
                log_fh.write(json.dumps(record) + "\n")

            if epoch % config.eval_interval == 0 or epoch == config.epochs:
                save_checkpoint(last_path, model, meta={"epoch": epoch, "steps": step})
                if hold:
                    heldout = _mean_plot_loss(model, hold, range(len(hold)))
                    log.info("epoch %d heldout plot loss %.4f", epoch, heldout)
                    if heldout < best_heldout:
                        best_heldout = heldout
                        save_checkpoint(
                            best_path, model, meta={"epoch": epoch, "steps": step}
                        )
                else:
                    save_checkpoint(best_path, model, meta={"epoch": epoch, "steps": step})

    final = _mean_plot_loss(model, data, range(len(data)))
    return TrainResult(
        best_checkpoint=best_path,
        last_checkpoint=last_path,
        log_path=log_path,
        initial_plot_loss=initial,
        final_plot_loss=final,
        steps=step,
    )


def predicted_count(pred) -> int:
    """Number of plots the model claims: scores strictly greater than 0.5."""
    scores = pred.scores if hasattr(pred, "scores") else np.asarray(pred)
    return int(np.sum(np.asarray(scores) > 0.5))


def evaluate(checkpoint, corpus_dir, split: str = "test") -> EvalReport:
    """Mean plot loss and mean relative count error over a corpus split."""
    model = load_checkpoint(checkpoint)
    manifest = load_manifest(corpus_dir)
    entries = manifest.split(split)
    if not entries:
        raise ValueError(f"corpus {corpus_dir} has no examples in split {split!r}")
    plot_sum = 0.0
    count_sum = 0.0
    for entry in entries:
        arr = load_image_array(manifest.root, entry)
        gt = load_gt(manifest.root, entry)
        pred = predict(model, arr)
        plot_sum += float(loss_plot(gt.curves, pred.curves))
        count_sum += abs(gt.k - predicted_count(pred)) / gt.k
    return EvalReport(
        e_plot=plot_sum / len(entries),
        e_count=count_sum / len(entries),
        n_examples=len(entries),
    )
