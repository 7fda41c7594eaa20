"""`apex` command line: generate, train, evaluate, extract, serve.

Exit codes: 0 success, 2 invalid arguments, 3 data/model errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .core import AxisCalibration, make_sample_grid
from .corpus import GeneratorConfig, generate_corpus
from .errors import (
    CorpusWriteError,
    DataError,
    InputError,
    ModelConfigError,
    RenderError,
    TrainingAbortedError,
)
from .extraction import export_csv, extract
from .training import TrainConfig, evaluate, train

_DATA_ERRORS = (
    DataError,
    InputError,
    ModelConfigError,
    CorpusWriteError,
    RenderError,
    TrainingAbortedError,
    OSError,
)


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="apex", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("gen", help="generate a synthetic corpus")
    gen.add_argument("--count", type=int, required=True)
    gen.add_argument("--seed", type=int, required=True)
    gen.add_argument("--out", type=Path, required=True)
    gen.add_argument("--config", type=Path, help="JSON file of generator config overrides")

    tr = sub.add_parser("train", help="train on a generated corpus")
    tr.add_argument("--corpus", type=Path, required=True)
    tr.add_argument("--out", type=Path, required=True)
    tr.add_argument("--epochs", type=int, default=10)
    tr.add_argument("--batch", type=int, default=16)
    tr.add_argument("--lr", type=float, default=1e-3)
    tr.add_argument("--seed", type=int, default=0)

    ev = sub.add_parser("eval", help="evaluate a checkpoint on the test split")
    ev.add_argument("--corpus", type=Path, required=True)
    ev.add_argument("--checkpoint", type=Path, required=True)
    ev.add_argument("--out", type=Path, required=True)

    ex = sub.add_parser("extract", help="extract calibrated curve data from an image")
    ex.add_argument("--image", type=Path, required=True)
    ex.add_argument("--checkpoint", type=Path, required=True)
    ex.add_argument("--xmin", type=float, required=True)
    ex.add_argument("--xmax", type=float, required=True)
    ex.add_argument("--ymin", type=float, required=True)
    ex.add_argument("--ymax", type=float, required=True)
    ex.add_argument("--xscale", choices=("linear", "log"), default="linear")
    ex.add_argument("--yscale", choices=("linear", "log"), default="linear")
    ex.add_argument("--out", type=Path, required=True)

    sv = sub.add_parser("serve", help="run the extraction HTTP service")
    sv.add_argument("--checkpoint", type=Path, required=True)
    sv.add_argument("--port", type=int, default=None)
    return parser


def _cmd_gen(args) -> int:
    config = None
    if args.config:
        config = GeneratorConfig.from_dict(json.loads(args.config.read_text()))
    manifest = generate_corpus(args.count, args.seed, args.out, config)
    n_train = len(manifest.split("train"))
    print(f"wrote {len(manifest)} examples ({n_train} train, {len(manifest) - n_train} test) to {args.out}")
    return 0


def _cmd_train(args) -> int:
    config = TrainConfig(
        corpus=args.corpus,
        out_dir=args.out,
        epochs=args.epochs,
        batch_size=args.batch,
        learning_rate=args.lr,
        seed=args.seed,
    )
    result = train(config)
    print(
        f"trained {result.steps} steps; plot loss {result.initial_plot_loss:.4f} -> "
        f"{result.final_plot_loss:.4f}"
    )
    print(f"best checkpoint: {result.best_checkpoint}")
    return 0


def _cmd_eval(args) -> int:
    report = evaluate(args.checkpoint, args.corpus)
    args.out.write_text(report.to_json(args.checkpoint) + "\n")
    print(f"e_plot={report.e_plot:.4f} e_count={report.e_count:.4f} n={report.n_examples}")
    return 0


def _cmd_extract(args) -> int:
    calib = AxisCalibration(
        x_min=args.xmin,
        x_max=args.xmax,
        y_min=args.ymin,
        y_max=args.ymax,
        x_scale=args.xscale,
        y_scale=args.yscale,
    )
    result = extract(args.image, args.checkpoint)
    if len(result) == 0:
        print("no curves passed the 0.5 confidence threshold", file=sys.stderr)
    csv_text = export_csv(result, calib, grid=make_sample_grid(), allow_empty=True)
    args.out.write_bytes(csv_text.encode("utf-8"))
    print(f"wrote {len(result)} curve(s) to {args.out}")
    return 0


def _cmd_serve(args) -> int:
    from .service import run

    run(str(args.checkpoint), args.port)
    return 0


_COMMANDS = {
    "gen": _cmd_gen,
    "train": _cmd_train,
    "eval": _cmd_eval,
    "extract": _cmd_extract,
    "serve": _cmd_serve,
}


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    # InputError/ModelConfigError subclass ValueError; data errors go first.
    except _DATA_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
