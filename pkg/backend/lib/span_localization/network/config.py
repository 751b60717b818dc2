"""
Configuration for the end-to-end localization model.
"""

from dataclasses import dataclass, field
from typing import List

from ..core.errors import ConfigError
from ..core.types import FusionMode, PositionMode
from ..pyramid.config import PyramidConfig, default_dilations

# Smallest image side accepted by predict (extractor kernels are 5×5)
MIN_IMAGE_SIDE = 8


@dataclass
class ModelConfig:
    """
    Architecture of SpanModel.

    Desk-scale defaults: 8-channel features, a 3-level pyramid with
    dilations 1, 3, 9 and positional projection with residual fusion.
    """
    # Feature extraction
    feature_depth: int = 8             # D_feat, output of the extractor conv stack
    feature_side: int = 0              # area-resize features to this side; 0 = off

    # Attention pyramid
    attention_depth: int = 8           # D
    layers: int = 3                    # h
    radius: int = 1                    # N
    dilations: List[int] = field(default_factory=list)  # empty -> (2N+1)^(k-1)
    fusion: FusionMode = FusionMode.RESIDUAL
    position_mode: PositionMode = PositionMode.PP

    # Initialization
    seed: int = 0

    def __post_init__(self):
        if self.feature_depth < 1:
            raise ConfigError("feature_depth", f"must be >= 1, got {self.feature_depth}")
        if self.attention_depth < 1:
            raise ConfigError("attention_depth", f"must be >= 1, got {self.attention_depth}")
        if self.feature_side < 0:
            raise ConfigError("feature_side", f"must be >= 0, got {self.feature_side}")
        if self.feature_side and self.feature_side < MIN_IMAGE_SIDE:
            raise ConfigError("feature_side", f"must be 0 or >= {MIN_IMAGE_SIDE}, got {self.feature_side}")
        self.fusion = FusionMode.parse(self.fusion)
        self.position_mode = PositionMode.parse(self.position_mode)
        if not self.dilations and self.layers >= 1 and self.radius >= 0:
            self.dilations = default_dilations(self.layers, self.radius)
        # Validates layers / radius / dilations together
        self.pyramid_config()

    def pyramid_config(self) -> PyramidConfig:
        return PyramidConfig(
            layers=self.layers,
            radius=self.radius,
            dilations=list(self.dilations),
            fusion=self.fusion,
            position_mode=self.position_mode,
        )

