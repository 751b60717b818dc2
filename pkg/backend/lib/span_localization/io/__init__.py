"""Checkpoint and image file formats."""

from .checkpoint import MAGIC, VERSION, decode_checkpoint, encode_checkpoint, load_model, save_model
from .images import read_image, read_mask, read_soft_mask, to_uint8, write_image, write_mask

__all__ = [
    # Checkpoints
    "MAGIC",
    "VERSION",
    "encode_checkpoint",
    "decode_checkpoint",
    "save_model",
    "load_model",
    # Images
    "read_image",
    "read_mask",
    "read_soft_mask",
    "write_image",
    "write_mask",
    "to_uint8",
]
