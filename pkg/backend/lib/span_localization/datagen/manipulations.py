"""
Copy-move, splice and removal edits with pixel-exact masks.

Each edit overwrites exactly the pixels of its returned mask; every other
pixel is left bit-identical. Regions are rectangles or ellipses whose
bounding box keeps a margin of at least one pixel from the image border.
"""

import logging
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from ..core.errors import PlacementError, ShapeMismatchError
from ..core.rng import Rng
from ..core.types import FeatureMap, ManipulationType
from .background import quantize

logger = logging.getLogger(__name__)

MARGIN = 1
MIN_REGION_SIDE = 3
RING_WIDTH = 2


@dataclass(frozen=True)
class Region:
    """Shape mask placed at (top, left) in the image."""
    top: int
    left: int
    shape: np.ndarray        # (h, w) bool

    @property
    def height(self) -> int:
        return int(self.shape.shape[0])

    @property
    def width(self) -> int:
        return int(self.shape.shape[1])

    @property
    def area(self) -> int:
        return int(self.shape.sum())

    def mask(self, size: int) -> np.ndarray:
        full = np.zeros((size, size), dtype=bool)
        full[self.top:self.top + self.height, self.left:self.left + self.width] = self.shape
        return full

    def overlaps(self, other: "Region") -> bool:
        return not (
            self.top + self.height <= other.top
            or other.top + other.height <= self.top
            or self.left + self.width <= other.left
            or other.left + other.width <= self.left
        )


def _shape(rng: Rng, height: int, width: int) -> np.ndarray:
    if rng.uniform() < 0.5:
        return np.ones((height, width), dtype=bool)
    cy, cx = (height - 1) / 2.0, (width - 1) / 2.0
    rows, cols = np.meshgrid(np.arange(height), np.arange(width), indexing="ij")
    return ((rows - cy) / (height / 2.0)) ** 2 + ((cols - cx) / (width / 2.0)) ** 2 <= 1.0


def _place(rng: Rng, size: int, shape: np.ndarray) -> Region:
    h, w = shape.shape
    top = int(rng.integers(MARGIN, size - MARGIN - h + 1))
    left = int(rng.integers(MARGIN, size - MARGIN - w + 1))
    return Region(top, left, shape)


def sample_regions(
    kind: ManipulationType,
    rng: Rng,
    size: int,
    count: int = 1,
    min_fraction: float = 0.02,
    max_fraction: float = 0.5,
    max_attempts: int = 100,
) -> Tuple[Region, ...]:
    """
    Rejection-sample `count` non-overlapping placements of one shape whose
    area is within [min_fraction, max_fraction] of the image.

    Raises:
        PlacementError: If no valid placement is found in `max_attempts` tries
    """
    max_side = size - 2 * MARGIN
    if max_side < MIN_REGION_SIDE:
        raise PlacementError(kind.value, 0)
    for attempt in range(1, max_attempts + 1):
        h = int(rng.integers(MIN_REGION_SIDE, max_side + 1))
        w = int(rng.integers(MIN_REGION_SIDE, max_side + 1))
        shape = _shape(rng, h, w)
        fraction = shape.sum() / float(size * size)
        if not min_fraction <= fraction <= max_fraction:
            continue
        regions = [_place(rng, size, shape) for _ in range(count)]
        if any(a.overlaps(b) for i, a in enumerate(regions) for b in regions[i + 1:]):
            continue
        if attempt > max_attempts // 2:
            logger.debug(f"{kind.value}: region placed after {attempt} attempts")
        return tuple(regions)
    logger.warning(f"⚠️ {kind.value}: no valid region after {max_attempts} attempts")
    raise PlacementError(kind.value, max_attempts)


def _check_image(op: str, image: FeatureMap) -> None:
    if image.height != image.width or image.depth != 3:
        raise ShapeMismatchError(op, image.shape, ("S", "S", 3), "expected a square RGB image")


def apply_copy_move(
    image: FeatureMap,
    rng: Rng,
    min_fraction: float = 0.02,
    max_fraction: float = 0.5,
    max_attempts: int = 100,
) -> Tuple[FeatureMap, FeatureMap]:
    """
    Copy a region of the image onto a non-overlapping location.

    Returns:
        (edited image, S×S×1 mask of the destination pixels)
    """
    _check_image("apply_copy_move", image)
    size = image.height
    source, target = sample_regions(
        ManipulationType.COPY_MOVE, rng, size, 2, min_fraction, max_fraction, max_attempts
    )
    values = image.values.copy()
    patch = image.values[source.top:source.top + source.height, source.left:source.left + source.width]
    window = values[target.top:target.top + target.height, target.left:target.left + target.width]
    window[target.shape] = patch[source.shape]
    return FeatureMap(values), FeatureMap(target.mask(size).astype(np.float64))


def apply_splice(
    image: FeatureMap,
    donor: FeatureMap,
    rng: Rng,
    min_fraction: float = 0.02,
    max_fraction: float = 0.5,
    max_attempts: int = 100,
) -> Tuple[FeatureMap, FeatureMap]:
    """
    Paste a region of an independently generated donor image.

    Returns:
        (edited image, S×S×1 mask of the pasted pixels)
    """
    _check_image("apply_splice", image)
    if donor.shape != image.shape:
        raise ShapeMismatchError("apply_splice", image.shape, donor.shape, "donor must match image")
    size = image.height
    (target,) = sample_regions(ManipulationType.SPLICE, rng, size, 1, min_fraction, max_fraction, max_attempts)
    source = _place(rng, size, target.shape)
    values = image.values.copy()
    patch = donor.values[source.top:source.top + source.height, source.left:source.left + source.width]
    window = values[target.top:target.top + target.height, target.left:target.left + target.width]
    window[target.shape] = patch[target.shape]
    return FeatureMap(values), FeatureMap(target.mask(size).astype(np.float64))


def apply_removal(
    image: FeatureMap,
    rng: Rng,
    min_fraction: float = 0.02,
    max_fraction: float = 0.5,
    max_attempts: int = 100,
    fill_noise: Optional[float] = None,
) -> Tuple[FeatureMap, FeatureMap]:
    """
    Erase a region: fill with the mean color of the surrounding ring plus
    Gaussian noise (σ drawn in [0.02, 0.05] unless given).

    Returns:
        (edited image, S×S×1 mask of the filled pixels)
    """
    _check_image("apply_removal", image)
    size = image.height
    (region,) = sample_regions(ManipulationType.REMOVAL, rng, size, 1, min_fraction, max_fraction, max_attempts)
    mask = region.mask(size)

    top = max(region.top - RING_WIDTH, 0)
    left = max(region.left - RING_WIDTH, 0)
    bottom = min(region.top + region.height + RING_WIDTH, size)
    right = min(region.left + region.width + RING_WIDTH, size)
    ring = np.zeros_like(mask)
    ring[top:bottom, left:right] = True
    ring &= ~mask
    color = image.values[ring].mean(axis=0)

    sigma = rng.uniform(0.02, 0.05) if fill_noise is None else fill_noise
    fill = quantize(color + rng.normal(0.0, sigma, size=(region.area, 3)))
    values = image.values.copy()
    values[mask] = fill
    return FeatureMap(values), FeatureMap(mask.astype(np.float64))
