"""Min-matching set-prediction losses for curve regression.

Each ground-truth curve is matched to its nearest predicted curve under
the (unsquared, unaveraged) l2 norm; the plot loss is the sum of those
nearest distances, so several ground-truth curves may share one
prediction slot.  The matched slot indices form the assignment set, and
the score loss is a binary cross-entropy pushing matched slots' scores
toward 1 and all others toward 0.

Conventions, fixed here and relied on by the tests:
  - slot indices are 0-based; ties in the argmin go to the smallest index;
  - the assignment is a constant during differentiation (recomputed every
    step, never differentiated through);
  - the l2 subgradient at zero distance is zero;
  - the score log is natural, with probabilities clamped at 1e-7.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import torch

from .core import GroundTruthSet, PredictionSet

SCORE_CLAMP = 1e-7


@dataclass(frozen=True)
class LossBreakdown:
    """Plot and score terms of one loss evaluation plus the matched slots.

    The tensor fields stay differentiable when the inputs carried
    gradients; `total` is exactly `plot_loss + score_loss`.
    """

    plot_loss: torch.Tensor
    score_loss: torch.Tensor
    total: torch.Tensor
    assignment: frozenset


def _as_curves(x) -> torch.Tensor:
    if isinstance(x, (GroundTruthSet, PredictionSet)):
        x = x.curves
    if isinstance(x, np.ndarray) and not x.flags.writeable:
        x = x.copy()  # torch cannot wrap read-only arrays
    t = torch.as_tensor(x)
    if t.ndim != 2:
        raise ValueError(f"expected a (count, n_points) curve matrix, got shape {tuple(t.shape)}")
    return t


def _as_scores(x) -> torch.Tensor:
    if isinstance(x, PredictionSet):
        x = x.scores
    if isinstance(x, np.ndarray) and not x.flags.writeable:
        x = x.copy()
    t = torch.as_tensor(x)
    if t.ndim != 1:
        raise ValueError(f"expected a 1-D score vector, got shape {tuple(t.shape)}")
    return t


def pairwise_distances(gt_curves, pred_curves) -> torch.Tensor:
    """l2 distance between every (ground truth, prediction) curve pair.

    Returns shape (k, max_plots).  Built from vector_norm so the
    subgradient at coincident curves is zero rather than NaN.
    """
    gt = _as_curves(gt_curves)
    pred = _as_curves(pred_curves)
    if gt.shape[1] != pred.shape[1]:
        raise ValueError(
            f"curve lengths differ: ground truth {gt.shape[1]} vs prediction {pred.shape[1]}"
        )
    diff = gt.unsqueeze(1) - pred.unsqueeze(0)
    return torch.linalg.vector_norm(diff, dim=-1)


def assignment_set(gt_curves, pred_curves) -> frozenset:
    """Slot indices that are nearest to at least one ground-truth curve."""
    d = pairwise_distances(gt_curves, pred_curves).detach().cpu().numpy()
    # np.argmin picks the first (smallest) index on ties.
    return frozenset(int(j) for j in np.argmin(d, axis=1))


def loss_plot(gt_curves, pred_curves) -> torch.Tensor:
    """Sum over ground-truth curves of the distance to the nearest prediction."""
    d = pairwise_distances(gt_curves, pred_curves)
    return d.min(dim=1).values.sum()


def loss_score(scores, assignment) -> torch.Tensor:
    """Binary cross-entropy of slot scores against assignment membership."""
    s = _as_scores(scores)
    member = torch.zeros(s.shape[0], dtype=torch.bool)
    idx = sorted(assignment)
    if idx and not 0 <= idx[0] <= idx[-1] < s.shape[0]:
        raise ValueError(f"assignment indices {idx} out of range for {s.shape[0]} slots")
    member[idx] = True
    pos = torch.log(torch.clamp(s, min=SCORE_CLAMP))
    neg = torch.log(torch.clamp(1.0 - s, min=SCORE_CLAMP))
    return -torch.where(member, pos, neg).sum()


def loss_total(gt_curves, pred_curves, scores=None) -> LossBreakdown:
    """Plot loss plus score loss, sharing one distance computation.

    `scores` may be omitted when `pred_curves` is a PredictionSet.
    """
    if scores is None:
        if not isinstance(pred_curves, PredictionSet):
            raise ValueError("scores are required unless pred_curves is a PredictionSet")
        scores = pred_curves.scores
    d = pairwise_distances(gt_curves, pred_curves)
    a = frozenset(int(j) for j in np.argmin(d.detach().cpu().numpy(), axis=1))
    plot = d.min(dim=1).values.sum()
    score = loss_score(scores, a)
    return LossBreakdown(plot_loss=plot, score_loss=score, total=plot + score, assignment=a)
