"""
Pyramid propagation: LSA blocks applied level by level with growing
dilation, fused by residual links.
"""

import logging
from dataclasses import dataclass, field
from typing import List, Union

import numpy as np

from ..attention.config import AttentionParams
from ..attention.lsa import lsa_node
from ..core.errors import ConfigError, ShapeMismatchError
from ..core.rng import Rng
from ..core.types import FeatureMap, FusionMode
from ..numerics import ops
from ..numerics.tape import Node, Tape
from ..numerics.tensor import ParamTensor
from .config import PyramidConfig

logger = logging.getLogger(__name__)


@dataclass
class PyramidParams:
    """Independent block weights per level."""
    per_layer: List[AttentionParams] = field(default_factory=list)

    @property
    def depth(self) -> int:
        return self.per_layer[0].depth

    def tensors(self) -> List[ParamTensor]:
        return [tensor for layer in self.per_layer for tensor in layer.tensors()]

    def validate(self, cfg: PyramidConfig) -> None:
        if len(self.per_layer) != cfg.layers:
            raise ConfigError("layers", f"config has {cfg.layers} layers but {len(self.per_layer)} parameter sets")
        depths = {layer.depth for layer in self.per_layer}
        if len(depths) != 1:
            raise ShapeMismatchError("PyramidParams", sorted(depths), (self.depth,), "all levels must share depth")
        for level, layer in enumerate(self.per_layer):
            layer.validate(cfg.neighborhood(level), cfg.position_mode)

    @classmethod
    def initialize(cls, depth: int, cfg: PyramidConfig, rng: Rng, prefix: str = "pyramid") -> "PyramidParams":
        return cls(per_layer=[
            AttentionParams.initialize(
                depth, cfg.neighborhood(level), cfg.position_mode, rng.child(level), prefix=f"{prefix}.{level}"
            )
            for level in range(cfg.layers)
        ])


def pyramid_node(x: Node, params: PyramidParams, cfg: PyramidConfig) -> Node:
    """Record the whole pyramid on x's tape."""
    params.validate(cfg)
    if x.shape[-1] != params.depth:
        raise ShapeMismatchError("pyramid_forward", x.shape, (params.depth,), "input depth must equal D")
    current = x
    for level, layer in enumerate(params.per_layer):
        attended = lsa_node(current, layer, cfg.neighborhood(level), cfg.position_mode)
        current = ops.add(attended, current) if cfg.fusion is FusionMode.RESIDUAL else attended
    return current


def pyramid_forward(
    x: Union[FeatureMap, np.ndarray],
    params: PyramidParams,
    cfg: PyramidConfig,
) -> FeatureMap:
    """
    x_k = LSA(x_{k-1}; t_k) [+ x_{k-1} with residual fusion]; returns x_h.
    """
    values = x.values if isinstance(x, FeatureMap) else x
    tape = Tape()
    return FeatureMap(pyramid_node(tape.constant(values), params, cfg).value)
