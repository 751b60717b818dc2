"""Multi-scale attention pyramid and its analysis utilities."""

from .analysis import complexity_estimate, complexity_table, receptive_field, scale_list
from .config import PyramidConfig, default_dilations
from .propagation import PyramidParams, pyramid_forward, pyramid_node

__all__ = [
    "PyramidConfig",
    "PyramidParams",
    "default_dilations",
    "pyramid_forward",
    "pyramid_node",
    "receptive_field",
    "scale_list",
    "complexity_estimate",
    "complexity_table",
]
