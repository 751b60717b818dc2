"""
Neighborhood geometry and learnable weights of one local self-attention block.
"""

from dataclasses import dataclass
from typing import List, Optional, Tuple

import numpy as np

from ..core.errors import ConfigError, ShapeMismatchError
from ..core.rng import Rng
from ..core.types import PositionMode
from ..numerics.tensor import ParamTensor


@dataclass(frozen=True)
class NeighborhoodSpec:
    """(2N+1)×(2N+1) neighborhood dilated by t."""
    radius: int = 1      # N
    dilation: int = 1    # t

    def __post_init__(self):
        if self.radius < 0:
            raise ConfigError("radius", f"must be >= 0, got {self.radius}")
        if self.dilation < 1:
            raise ConfigError("dilation", f"must be >= 1, got {self.dilation}")

    @property
    def side(self) -> int:
        """M = 2N + 1."""
        return 2 * self.radius + 1

    @property
    def count(self) -> int:
        """(2N+1)² neighbor slots."""
        return self.side * self.side

    @property
    def center_index(self) -> int:
        """0-based slot of offset (0, 0)."""
        return self.count // 2

    def offsets(self) -> List[Tuple[int, int]]:
        """Pixel offsets (row, col) of every slot, top-left to bottom-right."""
        steps = range(-self.radius, self.radius + 1)
        return [(a * self.dilation, b * self.dilation) for a in steps for b in steps]


@dataclass
class AttentionParams:
    """
    M^q, M^k, M^v (D×D) plus the positional weights for the chosen mode.

    positional_projs is a stacked (L, D, D) tensor of M_l (PP mode only);
    positional_embeds is a stacked (L, D) tensor of e_l (PE mode only);
    L = (2N+1)².
    """
    query_proj: ParamTensor
    key_proj: ParamTensor
    value_proj: ParamTensor
    positional_projs: Optional[ParamTensor] = None
    positional_embeds: Optional[ParamTensor] = None

    @property
    def depth(self) -> int:
        return self.query_proj.shape[0]

    def tensors(self) -> List[ParamTensor]:
        """All tensors of the block in a fixed order."""
        tensors = [self.query_proj, self.key_proj, self.value_proj]
        if self.positional_projs is not None:
            tensors.append(self.positional_projs)
        if self.positional_embeds is not None:
            tensors.append(self.positional_embeds)
        return tensors

    def validate(self, spec: NeighborhoodSpec, mode: PositionMode) -> None:
        """Check shapes against the neighborhood and position mode."""
        depth = self.depth
        for tensor in (self.query_proj, self.key_proj, self.value_proj):
            if tensor.shape != (depth, depth):
                raise ShapeMismatchError("AttentionParams", tensor.shape, (depth, depth), tensor.name)
        if mode is PositionMode.PP:
            expected = (spec.count, depth, depth)
            actual = None if self.positional_projs is None else self.positional_projs.shape
            if actual != expected:
                raise ShapeMismatchError("AttentionParams", actual or (), expected, "positional projections")
        if mode is PositionMode.PE:
            expected = (spec.count, depth)
            actual = None if self.positional_embeds is None else self.positional_embeds.shape
            if actual != expected:
                raise ShapeMismatchError("AttentionParams", actual or (), expected, "positional embeddings")

    @classmethod
    def initialize(
        cls,
        depth: int,
        spec: NeighborhoodSpec,
        mode: PositionMode,
        rng: Rng,
        prefix: str = "lsa",
    ) -> "AttentionParams":
        """
        Fresh block weights.

        M^q, M^k, M^v ~ U[−1/√D, 1/√D]; M_l = I; e_l = 0, so a new block
        computes plain local self-attention.
        """
        bound = 1.0 / np.sqrt(depth)

        def matrix(name: str) -> ParamTensor:
            return ParamTensor(f"{prefix}.{name}", rng.uniform(-bound, bound, size=(depth, depth)))

        params = cls(
            query_proj=matrix("query_proj"),
            key_proj=matrix("key_proj"),
            value_proj=matrix("value_proj"),
        )
        if mode is PositionMode.PP:
            identity = np.broadcast_to(np.eye(depth), (spec.count, depth, depth))
            params.positional_projs = ParamTensor(f"{prefix}.positional_projs", identity)
        elif mode is PositionMode.PE:
            params.positional_embeds = ParamTensor(f"{prefix}.positional_embeds", np.zeros((spec.count, depth)))
        return params
