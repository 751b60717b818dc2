"""Core types, errors, randomness and parallel helpers."""

from .errors import (
    CheckpointError,
    ConfigError,
    DatasetError,
    MetricError,
    NonFiniteError,
    PlacementError,
    ShapeMismatchError,
    SpanError,
    TapeError,
)
from .config_text import build_section, dump_section, format_value, parse_lines
from .parallel import get_thread_count, map_ordered, resolve_threads, set_thread_count
from .rng import Rng
from .types import FeatureMap, FusionMode, ManipulationType, PositionMode

__all__ = [
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
    # Types
    "FeatureMap",
    "FusionMode",
    "ManipulationType",
    "PositionMode",
    # Config text
    "dump_section",
    "parse_lines",
    "build_section",
    "format_value",
    # Randomness / parallelism
    "Rng",
    "map_ordered",
    "get_thread_count",
    "set_thread_count",
    "resolve_threads",
]
