"""
Post-processing attacks for robustness evaluation.

Transforms are written `kind[:value]`:

    identity        no change
    resize:0.78     area resize by factor 0.78 (mask resized and re-binarized)
    blur:3          Gaussian blur, odd kernel side 3, σ = 0.3·((k−1)/2 − 1) + 0.8
    noise:15        additive Gaussian noise, σ = 15 on the 0–255 scale, clipped to [0, 1]
"""

import logging
from dataclasses import dataclass
from typing import List, Optional, Tuple

import numpy as np
from scipy.ndimage import correlate1d

from ..core.errors import ConfigError, ShapeMismatchError
from ..core.rng import Rng
from ..core.types import FeatureMap
from ..numerics.ops import area_matrix

logger = logging.getLogger(__name__)

MIN_RESIZED_SIDE = 8

DEFAULT_TRANSFORMS = ["identity", "resize:0.78", "resize:0.25", "blur:3", "blur:15", "noise:3", "noise:15"]


@dataclass(frozen=True)
class Transform:
    kind: str                    # identity | resize | blur | noise
    value: float = 0.0

    @property
    def name(self) -> str:
        if self.kind == "identity":
            return "identity"
        value = int(self.value) if float(self.value).is_integer() and self.kind != "resize" else self.value
        return f"{self.kind}:{value}"


def parse_transform(text: str) -> Transform:
    """
    Raises:
        ConfigError: Unknown kind or invalid parameter
    """
    kind, _, raw = text.strip().lower().partition(":")
    if kind == "identity" and not raw:
        return Transform("identity")
    if kind not in ("resize", "blur", "noise"):
        raise ConfigError("transforms", f"unknown transform {text!r}. Available: identity, resize:f, blur:k, noise:sigma")
    try:
        value = float(raw)
    except ValueError:
        raise ConfigError("transforms", f"{kind} needs a numeric parameter, got {text!r}") from None
    if kind == "resize" and not value > 0:
        raise ConfigError("transforms", f"resize factor must be > 0, got {value}")
    if kind == "blur" and (not value.is_integer() or value < 1 or int(value) % 2 == 0):
        raise ConfigError("transforms", f"blur kernel side must be a positive odd integer, got {raw}")
    if kind == "noise" and value < 0:
        raise ConfigError("transforms", f"noise sigma must be >= 0, got {value}")
    return Transform(kind, value)


def parse_transforms(items: List[str]) -> List[Transform]:
    return [parse_transform(item) for item in items if item.strip()]


def area_resize(values: np.ndarray, height: int, width: int) -> np.ndarray:
    """Box-filter resample of an (H, W, C) array."""
    rows = area_matrix(values.shape[0], height)
    cols = area_matrix(values.shape[1], width)
    return np.einsum("ih,hwc,jw->ijc", rows, values, cols)


def resize_pair(image: FeatureMap, mask: FeatureMap, factor: float) -> Tuple[FeatureMap, FeatureMap]:
    """
    Raises:
        ShapeMismatchError: If the result would be smaller than 8×8
    """
    height = int(round(image.height * factor))
    width = int(round(image.width * factor))
    if height < MIN_RESIZED_SIDE or width < MIN_RESIZED_SIDE:
        raise ShapeMismatchError(
            "resize", image.shape, (height, width), f"resized image below {MIN_RESIZED_SIDE}×{MIN_RESIZED_SIDE}"
        )
    resized = np.clip(area_resize(image.values, height, width), 0.0, 1.0)
    resized_mask = (area_resize(mask.values, height, width) >= 0.5).astype(np.float64)
    return FeatureMap(resized), FeatureMap(resized_mask)


def gaussian_kernel(size: int) -> np.ndarray:
    """Normalized 1-D Gaussian taps with σ derived from the kernel side."""
    sigma = 0.3 * ((size - 1) / 2.0 - 1.0) + 0.8
    offsets = np.arange(size) - (size - 1) / 2.0
    taps = np.exp(-(offsets ** 2) / (2.0 * sigma ** 2))
    return taps / taps.sum()


def gaussian_blur(image: FeatureMap, size: int) -> FeatureMap:
    """Separable blur with mirrored borders; flat images come back bit-identical."""
    taps = gaussian_kernel(size)
    # Offsets from the first pixel are exactly zero on a flat channel
    reference = image.values[:1, :1]
    values = correlate1d(image.values - reference, taps, axis=0, mode="mirror")
    values = correlate1d(values, taps, axis=1, mode="mirror")
    return FeatureMap(values + reference)



def gaussian_noise(image: FeatureMap, sigma: float, rng: Rng) -> FeatureMap:
    noise = rng.normal(0.0, sigma / 255.0, size=image.shape)
    return FeatureMap(np.clip(image.values + noise, 0.0, 1.0))


def apply_transform(
    transform: Transform,
    image: FeatureMap,
    mask: FeatureMap,
    rng: Optional[Rng] = None,
) -> Tuple[FeatureMap, FeatureMap]:
    """
    Attack one image; the mask changes only under resize.

    Args:
        transform: Parsed transform
        image: H×W×3 image
        mask: H×W×1 ground truth
        rng: Noise stream (required for noise)
    """
    if transform.kind == "identity":
        return image, mask
    if transform.kind == "resize":
        return resize_pair(image, mask, transform.value)
    if transform.kind == "blur":
        return gaussian_blur(image, int(transform.value)), mask
    if transform.kind == "noise":
        if rng is None:
            raise ConfigError("transforms", "noise transform requires a random stream")
        return gaussian_noise(image, transform.value, rng), mask
    raise ConfigError("transforms", f"unknown transform kind {transform.kind!r}")
