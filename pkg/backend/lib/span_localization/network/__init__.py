"""
End-to-end localization network: SRM / constrained-conv feature extractor,
channel adaptation, attention pyramid and sigmoid decision head.
"""

from .config import MIN_IMAGE_SIDE, ModelConfig
from .extractor import (
    SRM_KERNELS,
    ExtractorParams,
    extract_features,
    extractor_node,
    project_constrained,
    srm_kernel_bank,
)
from .model import SpanModel, parameter_count, predict

__all__ = [
    # Config
    "ModelConfig",
    "MIN_IMAGE_SIDE",
    # Extractor
    "SRM_KERNELS",
    "ExtractorParams",
    "srm_kernel_bank",
    "project_constrained",
    "extractor_node",
    "extract_features",
    # Model
    "SpanModel",
    "predict",
    "parameter_count",
]
