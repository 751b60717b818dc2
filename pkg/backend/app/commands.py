"""
Command implementations behind the `span` CLI.

Each command returns a process exit code and prints its result (tables,
reports) to stdout. Library errors propagate as SpanError subclasses and are
mapped to exit codes by main.py.
"""

import dataclasses
import logging
from pathlib import Path
from typing import List, Optional, Sequence, Tuple

from lib.span_localization.core import ConfigError, FusionMode, PositionMode, Rng
from lib.span_localization.datagen import SampleBatch, batch_source, dump_dataset, generate_samples, load_dataset
from lib.span_localization.io import load_model, read_image, read_soft_mask, save_model, write_mask
from lib.span_localization.metrics import (
    evaluate,
    format_report_lines,
    format_report_text,
    format_table,
    parse_transforms,
    robustness_suite,
    score_predictions,
)
from lib.span_localization.network import SpanModel, parameter_count
from lib.span_localization.pyramid import complexity_table, receptive_field, scale_list
from lib.span_localization.training import Trainer

from .config import RunConfig

logger = logging.getLogger(__name__)

CHECKPOINT_NAME = "model.span"
HISTORY_NAME = "history.txt"
CONFIG_NAME = "run.conf"

# Ablation variant -> (fusion, position mode)
VARIANTS = {
    "res": (FusionMode.RESIDUAL, PositionMode.NONE),
    "res_pe": (FusionMode.RESIDUAL, PositionMode.PE),
    "res_pp": (FusionMode.RESIDUAL, PositionMode.PP),
    "none_pp": (FusionMode.NONE, PositionMode.PP),
}

REPORT_FORMATS = ("text", "lines")


def _training_sources(run: RunConfig) -> Tuple[object, SampleBatch]:
    """Training stream and fixed validation set, both derived from the data seeds."""
    train_rng = Rng(run.data.train_seed).child(run.train.seed)
    train = batch_source(run.data, train_rng, run.train.batch_size)
    validation = generate_samples(run.data, run.data.val_seed, run.train.val_batches * run.train.batch_size)
    return train, validation


def cmd_gen_data(config_path: Optional[str], out_dir: str, count: int, seed: Optional[int] = None) -> int:
    """Write `count` generated samples (default seed: data.eval_seed) to out_dir."""
    run = RunConfig.load(config_path)
    if count < 0:
        raise ConfigError("--count", f"must be >= 0, got {count}")
    seed = run.data.eval_seed if seed is None else seed
    index_path = dump_dataset(run.data, out_dir, count, seed)
    print(f"{count} samples written to {Path(out_dir)} (index {index_path.name}, seed {seed})")
    return 0


def cmd_train(config_path: Optional[str], out_dir: str, resume: bool = False, threads: Optional[int] = None) -> int:
    """
    Train a model and write the best-validation checkpoint and the epoch history.

    Outputs under out_dir: model.span, history.txt and run.conf (the full
    effective configuration).
    """
    if resume:
        raise ConfigError("--resume", "resuming training is not supported; start a new run")
    run = RunConfig.load(config_path)
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    (out_dir / CONFIG_NAME).write_text(run.dump(), encoding="utf-8")

    model = SpanModel.initialize(run.model)
    logger.info(f"Model: {parameter_count(model)} learnable parameters")
    train, validation = _training_sources(run)
    trainer = Trainer(model, run.train, threads)
    result = trainer.fit(train, validation, out_dir / HISTORY_NAME)
    checkpoint = save_model(result.model, out_dir / CHECKPOINT_NAME)

    val_loss, precision, recall, f1 = trainer.validate(validation)
    print(format_table(
        ["metric", "value"],
        [
            ["epochs", str(len(result.history))],
            ["best_epoch", str(result.best_epoch)],
            ["val_loss", f"{val_loss:.6f}"],
            ["val_precision", f"{precision:.6f}"],
            ["val_recall", f"{recall:.6f}"],
            ["val_f1", f"{f1:.6f}"],
        ],
    ), end="")
    logger.info(f"✅ Checkpoint written to {checkpoint}")
    return 0


def cmd_predict(model_path: str, input_path: str, output_path: str, threshold: Optional[float] = None) -> int:
    """Soft (or thresholded) tampering mask of one image."""
    model = load_model(model_path)
    image = read_image(input_path)
    mask = model.predict(image)
    write_mask(output_path, mask, threshold)
    logger.info(f"✅ Mask written to {output_path}")
    return 0


def _stored_predictions(samples: SampleBatch, predictions_dir: Path) -> list:
    # Prediction files share the dataset's relative mask paths
    return [read_soft_mask(predictions_dir / name) for name in samples.names]


def cmd_eval(
    model_path: Optional[str],
    data_dir: str,
    transforms: Optional[str] = None,
    config_path: Optional[str] = None,
    predictions_dir: Optional[str] = None,
    output_format: str = "text",
    threads: Optional[int] = None,
) -> int:
    """
    Evaluate a checkpoint (or stored prediction masks) on a dumped dataset.

    Args:
        transforms: Comma-separated robustness transforms; "config" uses
            eval.transforms from the run config
        predictions_dir: Score mask files found at the dataset's relative
            mask paths under this directory instead of running a model
    """
    if output_format not in REPORT_FORMATS:
        raise ConfigError("--format", f"must be one of {', '.join(REPORT_FORMATS)}, got {output_format!r}")
    if (model_path is None) == (predictions_dir is None):
        raise ConfigError("--model", "give exactly one of --model and --predictions-dir")
    run = RunConfig.load(config_path)
    samples = load_dataset(data_dir)

    robustness = None
    if predictions_dir is not None:
        if transforms:
            raise ConfigError("--transforms", "robustness needs a model, not stored predictions")
        preds = _stored_predictions(samples, Path(predictions_dir))
        report = score_predictions(
            preds, samples.masks, samples.manipulation_types, run.eval.threshold, run.eval.sweep_grid
        )
    else:
        model = load_model(model_path)
        report = evaluate(model.predict, samples, run.eval, threads)
        if transforms:
            names = run.eval.transforms if transforms == "config" else [t.strip() for t in transforms.split(",")]
            robustness = robustness_suite(
                model.predict,
                samples,
                parse_transforms(names),
                threshold=run.eval.threshold,
                noise_seed=run.eval.noise_seed,
                threads=threads,
            )

    if output_format == "lines":
        print(format_report_lines(report, robustness), end="")
    else:
        print(format_report_text(report, robustness), end="")
    return 0


def parse_variants(text: str) -> List[str]:
    variants = [v.strip() for v in text.split(",") if v.strip()]
    if not variants:
        raise ConfigError("--variants", "no variant given")
    for variant in variants:
        if variant not in VARIANTS:
            raise ConfigError("--variants", f"unknown variant {variant!r}; choose from {', '.join(VARIANTS)}")
    return variants


def cmd_ablate(config_path: Optional[str], variants: str, threads: Optional[int] = None) -> int:
    """
    Train every requested variant with identical seeds and budget and compare
    them on data.eval_count held-out samples.
    """
    names = parse_variants(variants)
    run = RunConfig.load(config_path)
    eval_samples = generate_samples(run.data, run.data.eval_seed, run.data.eval_count)

    rows = []
    for name in names:
        fusion, position_mode = VARIANTS[name]
        model_config = dataclasses.replace(run.model, fusion=fusion, position_mode=position_mode)
        logger.info(f"Ablation variant {name}: fusion={fusion.value} position={position_mode.value}")
        model = SpanModel.initialize(model_config)
        train, validation = _training_sources(run)
        result = Trainer(model, run.train, threads).fit(train, validation)
        report = evaluate(result.model.predict, eval_samples, run.eval, threads)
        rows.append([
            name,
            fusion.value,
            position_mode.value,
            str(parameter_count(result.model)),
            str(result.best_epoch),
            f"{result.best_val_loss:.6f}",
            f"{report.pixel_auc:.6f}",
            f"{report.f1:.6f}",
        ])

    print(format_table(
        ["variant", "fusion", "position", "params", "best_epoch", "val_loss", "pixel_auc", "f1"], rows
    ), end="")
    return 0


def cmd_analyze(
    receptive: Optional[Sequence[int]] = None,
    complexity: Optional[int] = None,
    block_sides: Sequence[int] = (3, 5, 7, 9),
) -> int:
    """Receptive-field scales of a pyramid and/or attention cost per block side."""
    if receptive is None and complexity is None:
        raise ConfigError("analyze", "give --receptive-field H N and/or --complexity S")

    if receptive is not None:
        layers, radius = receptive
        scales = scale_list(layers, radius)
        print(f"scales: {' '.join(str(s) for s in scales)}")
        print(f"receptive_field: {receptive_field(layers, radius)}")

    if complexity is not None:
        costs, best = complexity_table(complexity, block_sides)
        if receptive is not None:
            print()
        print(format_table(
            ["block_side", "cost", "min"],
            [[str(m), f"{cost:.6g}", "*" if m == best else ""] for m, cost in costs.items()],
        ), end="")
        print(f"argmin: {best}")
    return 0
