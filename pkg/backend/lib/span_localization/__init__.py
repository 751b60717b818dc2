"""
SPAN Localization
=================

A from-scratch library for pixel-level image manipulation localization with
multi-scale local self-attention.

Key Features:
- Dilated local self-attention with positional projection / embedding
- Residual attention pyramid (dilations 1, 3, 9, ... by default)
- Float64 reverse-mode differentiation on an explicit tape
- SRM + constrained-convolution feature extractor
- Deterministic synthetic copy-move / splice / removal data
- Pixel AUC, F1, threshold sweep and robustness evaluation

Quick Start:
    from lib.span_localization import (
        DataConfig, ModelConfig, Rng, SpanModel, TrainConfig,
        batch_source, evaluate, fit, generate_samples,
    )

    data = DataConfig(image_side=32)
    model = SpanModel.initialize(ModelConfig(layers=3))
    result = fit(
        model,
        batch_source(data, Rng(data.train_seed), batch_size=4),
        generate_samples(data, data.val_seed, 8),
        TrainConfig(max_epochs=10),
    )
    report = evaluate(model.predict, generate_samples(data, data.eval_seed, 50))

Components:
- core: FeatureMap, enums, errors, Rng, parallel map, config text format
- numerics: ParamTensor, Tape, differentiable ops, finite differences
- attention: NeighborhoodSpec, AttentionParams, lsa_forward / lsa_backward
- pyramid: PyramidConfig, pyramid_forward, receptive-field and cost analysis
- network: ModelConfig, extractor, SpanModel
- training: bce_loss, Adam, plateau schedule, fit loop
- datagen: synthetic tampering, dataset dump / load
- metrics: pixel AUC, P/R/F1, sweep, robustness suite, reports
- io: checkpoints and PNG images
"""

__version__ = "1.0.0"

# Core
from .core import (
    CheckpointError,
    ConfigError,
    DatasetError,
    FeatureMap,
    FusionMode,
    ManipulationType,
    MetricError,
    NonFiniteError,
    PlacementError,
    PositionMode,
    Rng,
    ShapeMismatchError,
    SpanError,
    TapeError,
    map_ordered,
    set_thread_count,
)

# Numerics
from .numerics import Node, ParamTensor, Tape, check_gradients, finite_difference_gradient, ops

# Attention / pyramid
from .attention import AttentionParams, NeighborhoodSpec, gather_neighborhood, lsa_backward, lsa_forward
from .pyramid import (
    PyramidConfig,
    PyramidParams,
    complexity_estimate,
    complexity_table,
    pyramid_forward,
    receptive_field,
    scale_list,
)

# Model
from .network import ExtractorParams, ModelConfig, SpanModel, extract_features, parameter_count, predict

# Training
from .training import FitResult, OptimizerState, TrainConfig, Trainer, adam_step, bce_loss, fit

# Data
from .datagen import (
    DataConfig,
    SampleBatch,
    apply_copy_move,
    apply_removal,
    apply_splice,
    batch_source,
    dump_dataset,
    generate_background,
    generate_samples,
    load_dataset,
)

# Metrics
from .metrics import EvalConfig, EvalReport, evaluate, pixel_auc, prf1, robustness_suite, threshold_sweep

# I/O
from .io import load_model, read_image, save_model, write_mask

__all__ = [
    "__version__",
    # Core
    "FeatureMap",
    "PositionMode",
    "FusionMode",
    "ManipulationType",
    "Rng",
    "map_ordered",
    "set_thread_count",
    # Errors
    "SpanError",
    "ShapeMismatchError",
    "TapeError",
    "NonFiniteError",
    "ConfigError",
    "PlacementError",
    "MetricError",
    "CheckpointError",
    "DatasetError",
    # Numerics
    "ops",
    "Node",
    "Tape",
    "ParamTensor",
    "finite_difference_gradient",
    "check_gradients",
    # Attention / pyramid
    "NeighborhoodSpec",
    "AttentionParams",
    "gather_neighborhood",
    "lsa_forward",
    "lsa_backward",
    "PyramidConfig",
    "PyramidParams",
    "pyramid_forward",
    "receptive_field",
    "scale_list",
    "complexity_estimate",
    "complexity_table",
    # Model
    "ModelConfig",
    "ExtractorParams",
    "SpanModel",
    "extract_features",
    "predict",
    "parameter_count",
    # Training
    "TrainConfig",
    "OptimizerState",
    "Trainer",
    "FitResult",
    "bce_loss",
    "adam_step",
    "fit",
    # Data
    "DataConfig",
    "SampleBatch",
    "generate_background",
    "apply_copy_move",
    "apply_splice",
    "apply_removal",
    "generate_samples",
    "batch_source",
    "dump_dataset",
    "load_dataset",
    # Metrics
    "EvalConfig",
    "EvalReport",
    "pixel_auc",
    "prf1",
    "threshold_sweep",
    "evaluate",
    "robustness_suite",
    # I/O
    "save_model",
    "load_model",
    "read_image",
    "write_mask",
]
