"""Receptive-field and block-size cost analysis."""

import math
from typing import Dict, Iterable, List, Tuple

from ..core.errors import ConfigError


def receptive_field(layers: int, radius: int) -> int:
    """Side (2N+1)^h of the input region seen by one top-level pixel."""
    if layers < 1:
        raise ConfigError("layers", f"must be >= 1, got {layers}")
    if radius < 0:
        raise ConfigError("radius", f"must be >= 0, got {radius}")
    return (2 * radius + 1) ** layers


def scale_list(layers: int, radius: int) -> List[int]:
    """Receptive-field side after each level: 3, 9, 27, 81, 243 for h=5, N=1."""
    receptive_field(layers, radius)
    return [receptive_field(level, radius) for level in range(1, layers + 1)]


def complexity_estimate(image_side: int, block_side: int) -> float:
    """
    Cost S²·M²·log_M(S) of covering an S×S image with M×M blocks.

    Raises:
        ConfigError: If M is even, M < 3 or S < M
    """
    if block_side < 3 or block_side % 2 == 0:
        raise ConfigError("block_side", f"must be odd and >= 3, got {block_side}")
    if image_side < block_side:
        raise ConfigError("image_side", f"must be >= block side {block_side}, got {image_side}")
    return image_side ** 2 * block_side ** 2 * math.log(image_side) / math.log(block_side)


def complexity_table(image_side: int, block_sides: Iterable[int] = (3, 5, 7, 9)) -> Tuple[Dict[int, float], int]:
    """
    Returns:
        (cost per block side, block side with minimal cost)
    """
    costs = {m: complexity_estimate(image_side, m) for m in block_sides}
    best = min(costs, key=lambda m: (costs[m], m))
    return costs, best
