"""
The set-matching loss, step by step
===================================

The network always emits ten candidate curves with confidence scores,
while an image holds between one and ten real curves.  Training needs a
loss that (a) pulls the nearest candidate onto each real curve and (b)
pushes the matched candidates' scores toward 1 and the rest toward 0,
without any fixed pairing between slots and curves.
"""

import numpy as np
import torch

from apexnet import loss_plot, loss_score, loss_total, pairwise_distances

# Two ground-truth "curves" on a 4-point grid, and three candidates.
gt = np.array(
    [
        [0.0, 0.0, 0.0, 0.0],
        [1.0, 1.0, 1.0, 1.0],
    ]
)
pred = np.array(
    [
        [0.5, 0.5, 0.5, 0.5],
        [1.0, 1.0, 1.0, 1.0],
        [0.2, 0.2, 0.2, 0.2],
    ]
)

# Every (ground truth, candidate) l2 distance.
d = pairwise_distances(gt, pred)
print("distance matrix:")
print(d.numpy())

# Each ground-truth curve claims its nearest candidate; candidates can be
# shared.  Here the zero curve picks slot 2 (distance 0.4) and the ones
# curve picks slot 1 (exact hit), so the assignment set is {1, 2} and
# slot 0 goes unmatched.
out = loss_total(gt, pred, scores=[0.4, 0.9, 0.2])
print(f"assignment set: {sorted(out.assignment)}")
print(f"plot loss (sum of nearest distances): {float(out.plot_loss):.6f}")

# The score loss is binary cross-entropy against assignment membership:
# matched slots 1 and 2 should score high (0.9 is rewarded, 0.2 punished),
# unmatched slot 0 should score low (its 0.4 is pushed down).
print(f"score loss: {float(out.score_loss):.6f}")
print(f"total: {float(out.total):.6f}")

# The pieces are also available separately.
print(f"loss_plot alone: {float(loss_plot(gt, pred)):.6f}")
print(f"loss_score alone: {float(loss_score([0.4, 0.9, 0.2], out.assignment)):.6f}")

# Everything stays differentiable: gradients flow to candidate curves and
# scores, while the assignment itself is recomputed each step rather than
# differentiated through.
pred_t = torch.tensor(pred, requires_grad=True)
scores_t = torch.tensor([0.4, 0.9, 0.2], requires_grad=True)
loss_total(gt, pred_t, scores_t).total.backward()
print("score gradients follow assignment membership:")
print(f"  d(total)/d(score_0) = {float(scores_t.grad[0]):+.4f}  (unmatched: positive, score drops)")
print(f"  d(total)/d(score_1) = {float(scores_t.grad[1]):+.4f}  (matched: negative, score rises)")
print(f"  d(total)/d(score_2) = {float(scores_t.grad[2]):+.4f}  (matched but low: strong pull up)")
