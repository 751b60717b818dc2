"""Procedural low-frequency backgrounds."""

import numpy as np

from ..core.errors import ConfigError
from ..core.rng import Rng
from ..core.types import FeatureMap
from .config import MIN_SIDE

WAVES_PER_CHANNEL = 3


def quantize(values: np.ndarray) -> np.ndarray:
    """Snap to the 8-bit grid k/255 so generated data survives PNG round trips."""
    return np.rint(np.clip(values, 0.0, 1.0) * 255.0) / 255.0


def _frequencies(size: int) -> np.ndarray:
    """Integer (ky, kx) cycles per image with 0 < |k| ≤ size/8."""
    limit = size / 8.0
    span = int(np.floor(limit))
    pairs = [
        (ky, kx)
        for ky in range(-span, span + 1)
        for kx in range(-span, span + 1)
        if 0 < ky * ky + kx * kx <= limit * limit
    ]
    return np.array(pairs, dtype=np.float64)


def generate_background(rng: Rng, size: int) -> FeatureMap:
    """
    Smooth size×size×3 texture: per channel a base level plus three plane
    waves at integer frequencies up to 1/4 Nyquist, plus a little white
    noise whose level is drawn once per image. Values on the 8-bit grid in [0, 1].

    Raises:
        ConfigError: If size < 8
    """
    if size < MIN_SIDE:
        raise ConfigError("image_side", f"must be >= {MIN_SIDE}, got {size}")
    freqs = _frequencies(size)
    rows, cols = np.meshgrid(np.arange(size), np.arange(size), indexing="ij")
    noise_level = rng.uniform(0.002, 0.01)

    channels = []
    for _ in range(3):
        channel = np.full((size, size), rng.uniform(0.3, 0.7))
        for _ in range(WAVES_PER_CHANNEL):
            ky, kx = freqs[rng.integers(0, len(freqs))]
            amplitude = rng.uniform(0.03, 0.08)
            phase = rng.uniform(0.0, 2.0 * np.pi)
            channel += amplitude * np.cos(2.0 * np.pi * (ky * rows + kx * cols) / size + phase)
        channels.append(channel)
    values = np.stack(channels, axis=-1) + rng.normal(0.0, noise_level, size=(size, size, 3))
    return FeatureMap(quantize(values))
