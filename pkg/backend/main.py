"""
SPAN localization command-line entry point.

Commands:
    gen-data   write a synthetic tampered dataset (images, masks, index.tsv)
    train      train a model, write checkpoint + epoch history
    predict    soft or thresholded tampering mask for one image
    eval       pixel AUC / F1 report on a dataset, optional robustness table
    ablate     train and compare attention variants under identical seeds
    analyze    receptive-field scales and attention block-size costs

Usage:
    python main.py gen-data --out-dir data/eval --count 50
    python main.py train --config toy.conf --out runs/toy
    python main.py predict --model runs/toy/model.span --input img.png --output mask.png
    python main.py eval --model runs/toy/model.span --data-dir data/eval --transforms config
    python main.py analyze --receptive-field 5 1 --complexity 243

Exit codes: 0 success, 2 usage or configuration, 3 numeric failure,
4 corrupt artifact.
"""

import argparse
import logging
import os
import sys
from pathlib import Path
from typing import List, Optional

# Load environment variables from .env file
try:
    from dotenv import load_dotenv
    _project_root = Path(__file__).parent
    env_path = _project_root / ".env"
    if env_path.exists():
        load_dotenv(env_path)
except ImportError:
    pass

from app.commands import cmd_ablate, cmd_analyze, cmd_eval, cmd_gen_data, cmd_predict, cmd_train
from lib.span_localization.core import SpanError, set_thread_count

logger = logging.getLogger(__name__)

LOG_LEVEL_ENV = "SPAN_LOG_LEVEL"
USAGE_EXIT = 2


def configure_logging(verbose: bool = False) -> None:
    level_name = "DEBUG" if verbose else os.environ.get(LOG_LEVEL_ENV, "INFO").upper()
    logging.basicConfig(
        level=getattr(logging, level_name, logging.INFO),
        format='%(asctime)s - %(name)s - %(levelname)s - %(message)s'
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="span", description="Multi-scale local self-attention manipulation localization")
    parser.add_argument("--verbose", action="store_true", help="Debug logging")
    parser.add_argument("--threads", type=int, default=None, help="Internal parallelism cap (0 = auto; default SPAN_THREADS)")
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("gen-data", help="Write a synthetic dataset")
    gen.add_argument("--config", default=None, help="Run config file")
    gen.add_argument("--out-dir", required=True)
    gen.add_argument("--count", type=int, required=True)
    gen.add_argument("--seed", type=int, default=None, help="Stream seed (default: data.eval_seed)")

    train = sub.add_parser("train", help="Train a model")
    train.add_argument("--config", default=None)
    train.add_argument("--out", required=True, help="Output directory")
    train.add_argument("--resume", action="store_true", help="Not supported; rejected with exit code 2")

    predict = sub.add_parser("predict", help="Predict a tampering mask")
    predict.add_argument("--model", required=True)
    predict.add_argument("--input", required=True)
    predict.add_argument("--output", required=True)
    predict.add_argument("--threshold", type=float, default=None, help="Binarize to 0/255 at this probability")

    evaluate = sub.add_parser("eval", help="Evaluate on a dataset")
    evaluate.add_argument("--model", default=None)
    evaluate.add_argument("--data-dir", required=True)
    evaluate.add_argument("--config", default=None)
    evaluate.add_argument(
        "--transforms", nargs="?", const="config", default=None,
        help="Comma-separated robustness transforms; bare flag uses eval.transforms",
    )
    evaluate.add_argument("--predictions-dir", default=None, help="Score stored mask files instead of a model")
    evaluate.add_argument("--format", dest="output_format", choices=["text", "lines"], default="text")

    ablate = sub.add_parser("ablate", help="Compare attention variants")
    ablate.add_argument("--config", default=None)
    ablate.add_argument("--variants", default="res,res_pe,res_pp")

    analyze = sub.add_parser("analyze", help="Receptive field and block-size analysis")
    analyze.add_argument("--receptive-field", nargs=2, type=int, metavar=("H", "N"), default=None)
    analyze.add_argument("--complexity", type=int, metavar="S", default=None)
    return parser


def run_command(args: argparse.Namespace) -> int:
    if args.command == "gen-data":
        return cmd_gen_data(args.config, args.out_dir, args.count, args.seed)
    if args.command == "train":
        return cmd_train(args.config, args.out, args.resume, args.threads)
    if args.command == "predict":
        return cmd_predict(args.model, args.input, args.output, args.threshold)
    if args.command == "eval":
        return cmd_eval(
            args.model, args.data_dir, args.transforms, args.config,
            args.predictions_dir, args.output_format, args.threads,
        )
    if args.command == "ablate":
        return cmd_ablate(args.config, args.variants, args.threads)
    return cmd_analyze(args.receptive_field, args.complexity)


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return USAGE_EXIT if e.code else 0
    configure_logging(args.verbose)
    if args.threads is not None:
        set_thread_count(args.threads)

    try:
        return run_command(args)
    except SpanError as e:
        logger.error(f"❌ {type(e).__name__}: {e}")
        return e.exit_code
    except OSError as e:
        logger.error(f"❌ {e}")
        return USAGE_EXIT


if __name__ == "__main__":
    sys.exit(main())
