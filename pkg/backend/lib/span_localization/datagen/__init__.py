"""
Deterministic synthetic tampering data: procedural backgrounds edited by
copy-move, splice or removal, with pixel-exact masks.
"""

from .background import generate_background, quantize
from .config import DataConfig
from .dataset import INDEX_COLUMNS, INDEX_NAME, dump_dataset, load_dataset
from .manipulations import Region, apply_copy_move, apply_removal, apply_splice, sample_regions
from .source import MANIPULATION_TYPES, SampleBatch, batch_source, generate_sample, generate_samples, type_counts

__all__ = [
    # Config / containers
    "DataConfig",
    "SampleBatch",
    "MANIPULATION_TYPES",
    # Generation
    "generate_background",
    "quantize",
    "Region",
    "sample_regions",
    "apply_copy_move",
    "apply_splice",
    "apply_removal",
    "generate_sample",
    "generate_samples",
    "batch_source",
    "type_counts",
    # Files
    "INDEX_NAME",
    "INDEX_COLUMNS",
    "dump_dataset",
    "load_dataset",
]
