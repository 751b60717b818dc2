"""
Pixel-level localization metrics and robustness evaluation.
"""

from .evaluation import (
    EvalConfig,
    EvalReport,
    RobustnessRow,
    TypeScore,
    default_grid,
    evaluate,
    predict_all,
    robustness_suite,
    score_predictions,
)
from .report import format_report_lines, format_report_text, format_robustness_text, format_table
from .scores import Confusion, confusion, pixel_auc, pool, prf1, threshold_sweep
from .transforms import (
    DEFAULT_TRANSFORMS,
    Transform,
    apply_transform,
    gaussian_blur,
    gaussian_kernel,
    gaussian_noise,
    parse_transform,
    parse_transforms,
    resize_pair,
)

__all__ = [
    # Scores
    "pool",
    "pixel_auc",
    "Confusion",
    "confusion",
    "prf1",
    "threshold_sweep",
    # Transforms
    "DEFAULT_TRANSFORMS",
    "Transform",
    "parse_transform",
    "parse_transforms",
    "apply_transform",
    "resize_pair",
    "gaussian_kernel",
    "gaussian_blur",
    "gaussian_noise",
    # Evaluation
    "EvalConfig",
    "EvalReport",
    "TypeScore",
    "RobustnessRow",
    "default_grid",
    "score_predictions",
    "predict_all",
    "evaluate",
    "robustness_suite",
    # Rendering
    "format_table",
    "format_report_text",
    "format_report_lines",
    "format_robustness_text",
]
