"""
Training on a generated corpus
==============================

The trainer consumes a corpus directory, minimizes the total matching
loss with Adam, logs one JSONL record per optimizer step, and keeps two
checkpoints: the latest one and the one that scored best on a small
held-out slice of the train split.

A short run on a small network is enough to watch the loss move; real
accuracy needs far more data and the full-size default architecture.
"""

import json
from pathlib import Path

from apexnet import (
    ArchitectureConfig,
    GeneratorConfig,
    TrainConfig,
    evaluate,
    generate_corpus,
    train,
)

out = Path(__file__).parent / "output"
corpus = out / "train_corpus"

config = GeneratorConfig(width_range=(256, 384), aspect_range=(0.6, 1.0), dpi_range=(80, 100))
generate_corpus(20, base_seed=7100, out_dir=corpus, config=config)

# A reduced network keeps this demo to roughly a minute on a laptop CPU.
# Dropping `arch` selects the full 512-pixel, nine-block default.
arch = ArchitectureConfig(
    input_size=96,
    blocks=((16, True), (32, True), (32, True), (64, True), (64, True), (64, True)),
)

result = train(
    TrainConfig(
        corpus=corpus,
        out_dir=out / "run",
        epochs=40,
        batch_size=8,
        learning_rate=1e-3,
        eval_interval=10,
        seed=0,
        arch=arch,
    )
)

print(f"ran {result.steps} optimizer steps")
print(f"train plot loss: {result.initial_plot_loss:.2f} -> {result.final_plot_loss:.2f}")
print(f"checkpoints: {result.best_checkpoint.name}, {result.last_checkpoint.name}")

# The log has one record per step; plot and score terms are tracked
# separately and always sum to the total.
records = [json.loads(line) for line in result.log_path.read_text().splitlines()]
for rec in records[:: max(1, len(records) // 5)]:
    print(
        f"  step {rec['step']:3d}  epoch {rec['epoch']:2d}  "
        f"plot {rec['loss_plot']:7.2f}  score {rec['loss_score']:6.3f}"
    )

# Evaluation reports the mean plot loss and the mean relative count error
# |K - K_hat| / K over the untouched test split.
report = evaluate(result.best_checkpoint, corpus)
print(f"test split: e_plot={report.e_plot:.2f} e_count={report.e_count:.2f} "
      f"over {report.n_examples} examples")
