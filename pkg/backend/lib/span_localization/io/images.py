"""
8-bit PNG I/O through Pillow: RGB images in [0, 1], grayscale masks.
"""

import logging
from pathlib import Path
from typing import Optional, Union

import numpy as np
from PIL import Image, UnidentifiedImageError

from ..core.errors import DatasetError, MetricError
from ..core.types import FeatureMap

logger = logging.getLogger(__name__)

PathLike = Union[str, Path]


def to_uint8(values: np.ndarray) -> np.ndarray:
    """round(255·v), clipped to [0, 255]."""
    return np.clip(np.rint(np.asarray(values, dtype=np.float64) * 255.0), 0, 255).astype(np.uint8)


def _open(path: PathLike, mode: str) -> np.ndarray:
    path = Path(path)
    if not path.is_file():
        raise DatasetError("image file not found", str(path))
    try:
        with Image.open(path) as image:
            return np.asarray(image.convert(mode))
    except (UnidentifiedImageError, OSError):
        raise DatasetError("unreadable image file", str(path)) from None


def read_image(path: PathLike) -> FeatureMap:
    """H×W×3 float image in [0, 1]."""
    return FeatureMap(_open(path, "RGB").astype(np.float64) / 255.0)


def read_mask(path: PathLike) -> FeatureMap:
    """H×W×1 binary mask (pixel >= 128 is tampered)."""
    return FeatureMap((_open(path, "L") >= 128).astype(np.float64))


def read_soft_mask(path: PathLike) -> FeatureMap:
    """H×W×1 soft mask in [0, 1]."""
    return FeatureMap(_open(path, "L").astype(np.float64) / 255.0)


def write_image(path: PathLike, image: FeatureMap) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    Image.fromarray(to_uint8(image.values)).save(path, format="PNG")
    return path


def write_mask(path: PathLike, mask: FeatureMap, threshold: Optional[float] = None) -> Path:
    """
    Write a one-channel mask.

    Args:
        path: Output PNG path
        mask: H×W×1 values in [0, 1]
        threshold: If given, pixels >= threshold become 255 and others 0;
            otherwise the soft value is written as round(255·p)
    """
    values = mask.values[:, :, 0]
    if threshold is not None:
        if not 0.0 < threshold < 1.0:
            raise MetricError(f"threshold must lie in (0, 1), got {threshold}")
        pixels = np.where(values >= threshold, 255, 0).astype(np.uint8)
    else:
        pixels = to_uint8(values)
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    Image.fromarray(pixels).save(path, format="PNG")
    return path
