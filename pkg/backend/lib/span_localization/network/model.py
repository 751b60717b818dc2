"""
SpanModel: extractor → 1×1 adaptation → attention pyramid → decision head → sigmoid.
"""

import logging
from typing import Dict, List, Optional, Union

import numpy as np

from ..core.errors import ShapeMismatchError
from ..core.rng import Rng
from ..core.types import FeatureMap
from ..numerics import ops
from ..numerics.tape import Node, Tape
from ..numerics.tensor import ParamTensor
from ..pyramid.propagation import PyramidParams, pyramid_node
from .config import MIN_IMAGE_SIDE, ModelConfig
from .extractor import ExtractorParams, conv_weight, extractor_node

logger = logging.getLogger(__name__)

PREDICTION_EPS = 1e-12


class SpanModel:
    """
    Full parameter set and forward pass of the localization network.

    Example:
        model = SpanModel.initialize(ModelConfig(layers=2, attention_depth=4))
        mask = model.predict(image)          # FeatureMap H×W×1 in (0, 1)
    """

    def __init__(
        self,
        config: ModelConfig,
        extractor: ExtractorParams,
        adapt: ParamTensor,
        adapt_bias: ParamTensor,
        pyramid: PyramidParams,
        head: List[ParamTensor],
    ):
        self.config = config
        self.pyramid_config = config.pyramid_config()
        self.extractor = extractor
        self.adapt = adapt
        self.adapt_bias = adapt_bias
        self.pyramid = pyramid
        # conv1, conv1_bias, conv2, conv2_bias, out, out_bias
        self.head = list(head)
        self.pyramid.validate(self.pyramid_config)

    @classmethod
    def initialize(cls, config: ModelConfig, seed: Optional[int] = None) -> "SpanModel":
        """Fresh weights drawn from Rng(config.seed) (or an explicit seed)."""
        rng = Rng(config.seed if seed is None else seed)
        depth = config.attention_depth
        model = cls(
            config=config,
            extractor=ExtractorParams.initialize(config.feature_depth, rng.child(0)),
            adapt=conv_weight("adapt", (1, 1, config.feature_depth, depth), rng.child(1)),
            adapt_bias=ParamTensor.zeros("adapt_bias", (depth,)),
            pyramid=PyramidParams.initialize(depth, config.pyramid_config(), rng.child(2)),
            head=[
                conv_weight("head.conv1", (3, 3, depth, depth), rng.child(3, 1)),
                ParamTensor.zeros("head.conv1_bias", (depth,)),
                conv_weight("head.conv2", (3, 3, depth, depth), rng.child(3, 2)),
                ParamTensor.zeros("head.conv2_bias", (depth,)),
                conv_weight("head.out", (1, 1, depth, 1), rng.child(3, 3)),
                ParamTensor.zeros("head.out_bias", (1,)),
            ],
        )
        logger.debug(f"Initialized model with {parameter_count(model)} trainable values")
        return model

    # Parameters

    def parameters(self) -> List[ParamTensor]:
        """Every tensor (fixed ones included) in a stable order."""
        return (
            self.extractor.tensors()
            + [self.adapt, self.adapt_bias]
            + self.pyramid.tensors()
            + self.head
        )

    def trainable_parameters(self) -> List[ParamTensor]:
        return [p for p in self.parameters() if p.trainable]

    def named_parameters(self) -> Dict[str, ParamTensor]:
        return {p.name: p for p in self.parameters()}

    def project_constraints(self) -> None:
        """Restore the constrained-kernel invariant after a weight update."""
        self.extractor.project_constraints()

    def snapshot(self) -> Dict[str, np.ndarray]:
        return {p.name: p.values.copy() for p in self.parameters()}

    def restore(self, state: Dict[str, np.ndarray]) -> None:
        for p in self.parameters():
            p.assign(state[p.name])

    # Forward

    def forward(self, tape: Tape, image: Node) -> Node:
        """Record the full network on `tape`; returns the H×W×1 probability node."""
        height, width = image.shape[0], image.shape[1]
        features = extractor_node(image, self.extractor)

        side = self.config.feature_side
        resized = bool(side) and (height, width) != (side, side)
        if resized:
            features = ops.resize(features, side, side, method="area")

        x = ops.conv2d(features, tape.param(self.adapt), tape.param(self.adapt_bias))
        x = pyramid_node(x, self.pyramid, self.pyramid_config)

        conv1, conv1_bias, conv2, conv2_bias, out, out_bias = (tape.param(p) for p in self.head)
        x = ops.tanh(ops.conv2d(x, conv1, conv1_bias, padding=1, pad_mode="symmetric"))
        x = ops.tanh(ops.conv2d(x, conv2, conv2_bias, padding=1, pad_mode="symmetric"))
        logits = ops.conv2d(x, out, out_bias)

        if resized:
            logits = ops.resize(logits, height, width, method="bilinear")
        return ops.sigmoid(logits)

    def predict(self, image: Union[FeatureMap, np.ndarray]) -> FeatureMap:
        """
        Soft tampering mask for one image.

        Args:
            image: H×W×3 values in [0, 1]; H, W >= 8

        Returns:
            H×W×1 probabilities, strictly inside (0, 1)

        Raises:
            ShapeMismatchError: If the image is not RGB or smaller than 8×8
        """
        image = image if isinstance(image, FeatureMap) else FeatureMap(image)
        if image.height < MIN_IMAGE_SIDE or image.width < MIN_IMAGE_SIDE:
            raise ShapeMismatchError(
                "predict", image.shape, (MIN_IMAGE_SIDE, MIN_IMAGE_SIDE, 3), "image below minimum size"
            )
        tape = Tape()
        probs = self.forward(tape, tape.constant(image.values)).value
        return FeatureMap(np.clip(probs, PREDICTION_EPS, 1.0 - PREDICTION_EPS))


def predict(model: SpanModel, image: Union[FeatureMap, np.ndarray]) -> FeatureMap:
    return model.predict(image)


def parameter_count(model: SpanModel, include_fixed: bool = False) -> int:
    """Number of learnable scalars (plus fixed SRM values with include_fixed)."""
    tensors = model.parameters() if include_fixed else model.trainable_parameters()
    return sum(p.size for p in tensors)
