"""
Core types and data structures shared across the library.

These types are used across all components to ensure consistent interfaces.
"""

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import NonFiniteError, ShapeMismatchError


class PositionMode(Enum):
    """How relative neighbor position enters the attention key."""
    PP = "pp"        # Positional projection: per-offset matrix M_l
    PE = "pe"        # Positional embedding: per-offset additive vector e_l
    NONE = "none"    # Plain local self-attention

    @classmethod
    def parse(cls, value: "str | PositionMode") -> "PositionMode":
        if isinstance(value, cls):
            return value
        return cls(str(value).strip().lower())


class FusionMode(Enum):
    """How consecutive pyramid levels are combined."""
    RESIDUAL = "residual"  # x_k = LSA(x_{k-1}) + x_{k-1}
    NONE = "none"          # x_k = LSA(x_{k-1})

    @classmethod
    def parse(cls, value: "str | FusionMode") -> "FusionMode":
        if isinstance(value, cls):
            return value
        return cls(str(value).strip().lower())


class ManipulationType(Enum):
    """Synthetic tampering types."""
    COPY_MOVE = "copy_move"
    SPLICE = "splice"
    REMOVAL = "removal"


@dataclass
class FeatureMap:
    """
    Dense H×W×D float64 tensor.

    Carries images (D=3), masks and predictions (D=1) and intermediate
    activations between components.
    """
    values: np.ndarray

    def __post_init__(self):
        values = np.asarray(self.values, dtype=np.float64)
        if values.ndim == 2:
            values = values[:, :, None]
        if values.ndim != 3 or min(values.shape) < 1:
            raise ShapeMismatchError("FeatureMap", values.shape, ("H", "W", "D"), "expected a non-empty 3-d array")
        if not np.all(np.isfinite(values)):
            bad = np.argwhere(~np.isfinite(values))[0]
            raise NonFiniteError("FeatureMap", bad.tolist())
        self.values = values

    @property
    def height(self) -> int:
        return int(self.values.shape[0])

    @property
    def width(self) -> int:
        return int(self.values.shape[1])

    @property
    def depth(self) -> int:
        return int(self.values.shape[2])

    @property
    def shape(self) -> tuple:
        return tuple(self.values.shape)

    def flat(self) -> np.ndarray:
        """Values in row-major (row, column, channel) order."""
        return self.values.reshape(-1)

    def copy(self) -> "FeatureMap":
        return FeatureMap(self.values.copy())

    @classmethod
    def zeros(cls, height: int, width: int, depth: int) -> "FeatureMap":
        return cls(np.zeros((height, width, depth)))
