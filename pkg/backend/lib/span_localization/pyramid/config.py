"""Pyramid configuration."""

from dataclasses import dataclass, field
from typing import List

from ..attention.config import NeighborhoodSpec
from ..core.errors import ConfigError
from ..core.types import FusionMode, PositionMode


def default_dilations(layers: int, radius: int) -> List[int]:
    """t_k = (2N+1)^(k-1): 1, 3, 9, 27, 81 for five layers at N = 1."""
    side = 2 * radius + 1
    return [side ** k for k in range(layers)]


@dataclass
class PyramidConfig:
    """Configuration of the stacked attention pyramid."""
    layers: int = 5                           # h
    radius: int = 1                           # N
    dilations: List[int] = field(default_factory=list)  # empty -> default schedule
    fusion: FusionMode = FusionMode.RESIDUAL
    position_mode: PositionMode = PositionMode.PP

    def __post_init__(self):
        self.fusion = FusionMode.parse(self.fusion)
        self.position_mode = PositionMode.parse(self.position_mode)
        if self.layers < 1:
            raise ConfigError("layers", f"must be >= 1, got {self.layers}")
        if self.radius < 0:
            raise ConfigError("radius", f"must be >= 0, got {self.radius}")
        if not self.dilations:
            self.dilations = default_dilations(self.layers, self.radius)
        self.dilations = [int(t) for t in self.dilations]
        if len(self.dilations) != self.layers:
            raise ConfigError(
                "dilations", f"expected {self.layers} values (one per layer), got {len(self.dilations)}"
            )
        if any(t < 1 for t in self.dilations):
            raise ConfigError("dilations", f"every dilation must be >= 1, got {self.dilations}")

    def neighborhood(self, level: int) -> NeighborhoodSpec:
        """Neighborhood of pyramid level `level` (0-based)."""
        return NeighborhoodSpec(radius=self.radius, dilation=self.dilations[level])

    @property
    def influence_radius(self) -> int:
        """Chebyshev reach Σ_k N·t_k of one input pixel through the stack."""
        return sum(self.radius * t for t in self.dilations)
