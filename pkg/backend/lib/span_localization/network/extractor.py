"""
Feature extractor: fixed SRM residual filters, a constrained (Bayar)
convolution and two plain 3×3 convolutions.

    image (H,W,3) ─┬─ SRM bank (9 ch, fixed) ─────┐
                   ├─ constrained conv (3 ch) ────┼─ concat (15 ch) ─ conv3×3 ─ tanh ─ conv3×3 ─ tanh
                   └─ raw RGB (3 ch) ─────────────┘

All convolutions use symmetric padding so spatial size is preserved and a
constant image produces exactly zero high-pass response at every pixel,
borders included.
"""

import logging
from dataclasses import dataclass
from typing import List, Union

import numpy as np

from ..core.errors import ShapeMismatchError
from ..core.rng import Rng
from ..core.types import FeatureMap
from ..numerics import ops
from ..numerics.tape import Node, Tape
from ..numerics.tensor import ParamTensor

logger = logging.getLogger(__name__)

IMAGE_CHANNELS = 3
CONSTRAINED_CHANNELS = 3
CONSTRAINED_SIDE = 5
STACKED_CHANNELS = 3 * IMAGE_CHANNELS + CONSTRAINED_CHANNELS + IMAGE_CHANNELS

# Steganalysis rich-model residual kernels (5×5, each sums to zero)
SRM_SECOND_ORDER = np.array([
    [0, 0, 0, 0, 0],
    [0, -1, 2, -1, 0],
    [0, 2, -4, 2, 0],
    [0, -1, 2, -1, 0],
    [0, 0, 0, 0, 0],
], dtype=np.float64) / 4.0

SRM_THIRD_ORDER = np.array([
    [0, 0, 0, 0, 0],
    [0, 0, 0, 0, 0],
    [0, 1, -3, 3, -1],
    [0, 0, 0, 0, 0],
    [0, 0, 0, 0, 0],
], dtype=np.float64) / 3.0

SRM_SQUARE_5X5 = np.array([
    [-1, 2, -2, 2, -1],
    [2, -6, 8, -6, 2],
    [-2, 8, -12, 8, -2],
    [2, -6, 8, -6, 2],
    [-1, 2, -2, 2, -1],
], dtype=np.float64) / 12.0

SRM_KERNELS = (SRM_SECOND_ORDER, SRM_THIRD_ORDER, SRM_SQUARE_5X5)


def srm_kernel_bank() -> np.ndarray:
    """
    (5, 5, 3, 9) kernel applying every SRM filter to every input channel
    separately; output channel 3·k + c is filter k on channel c.
    """
    bank = np.zeros((5, 5, IMAGE_CHANNELS, len(SRM_KERNELS) * IMAGE_CHANNELS))
    for k, kernel in enumerate(SRM_KERNELS):
        for c in range(IMAGE_CHANNELS):
            bank[:, :, c, IMAGE_CHANNELS * k + c] = kernel
    return bank


def project_constrained(kernel: np.ndarray) -> np.ndarray:
    """
    Re-project a (5, 5, C_in, C_out) kernel onto the constraint set: every
    (C_in, C_out) slice has center −1 and off-center weights summing to 1.
    """
    kernel = np.array(kernel, dtype=np.float64)
    center = kernel.shape[0] // 2
    kernel[center, center] = 0.0
    sums = kernel.sum(axis=(0, 1))
    degenerate = np.abs(sums) < 1e-12
    if np.any(degenerate):
        off_center = kernel.shape[0] * kernel.shape[1] - 1
        logger.warning(f"⚠️ Constrained kernel slice with zero off-center sum reset to uniform 1/{off_center}")
        kernel[:, :, degenerate] = 1.0 / off_center
        kernel[center, center, degenerate] = 0.0
        sums = kernel.sum(axis=(0, 1))
    kernel = kernel / sums
    kernel[center, center] = -1.0
    return kernel


def conv_weight(name: str, shape, rng: Rng) -> ParamTensor:
    fan_in = shape[0] * shape[1] * shape[2]
    bound = 1.0 / np.sqrt(fan_in)
    return ParamTensor(name, rng.uniform(-bound, bound, size=shape))


@dataclass
class ExtractorParams:
    """Extractor weights; `srm` is fixed and never updated."""
    srm: ParamTensor
    constrained: ParamTensor
    conv1: ParamTensor
    conv1_bias: ParamTensor
    conv2: ParamTensor
    conv2_bias: ParamTensor

    @property
    def depth(self) -> int:
        return self.conv2.shape[3]

    def tensors(self) -> List[ParamTensor]:
        return [self.srm, self.constrained, self.conv1, self.conv1_bias, self.conv2, self.conv2_bias]

    def project_constraints(self) -> None:
        self.constrained.assign(project_constrained(self.constrained.values))

    @classmethod
    def initialize(cls, feature_depth: int, rng: Rng, prefix: str = "extractor") -> "ExtractorParams":
        constrained = rng.uniform(0.0, 1.0, size=(CONSTRAINED_SIDE, CONSTRAINED_SIDE, IMAGE_CHANNELS, CONSTRAINED_CHANNELS))
        return cls(
            srm=ParamTensor(f"{prefix}.srm", srm_kernel_bank(), trainable=False),
            constrained=ParamTensor(f"{prefix}.constrained", project_constrained(constrained)),
            conv1=conv_weight(f"{prefix}.conv1", (3, 3, STACKED_CHANNELS, feature_depth), rng.child(1)),
            conv1_bias=ParamTensor.zeros(f"{prefix}.conv1_bias", (feature_depth,)),
            conv2=conv_weight(f"{prefix}.conv2", (3, 3, feature_depth, feature_depth), rng.child(2)),
            conv2_bias=ParamTensor.zeros(f"{prefix}.conv2_bias", (feature_depth,)),
        )


def extractor_node(image: Node, params: ExtractorParams) -> Node:
    """Record the extractor on the image's tape."""
    if len(image.shape) != 3 or image.shape[2] != IMAGE_CHANNELS:
        raise ShapeMismatchError("extract_features", image.shape, ("H", "W", IMAGE_CHANNELS), "expected an RGB image")
    tape = image.tape
    srm = ops.conv2d(image, tape.param(params.srm), padding=2, pad_mode="symmetric")
    constrained = ops.conv2d(image, tape.param(params.constrained), padding=2, pad_mode="symmetric")
    stacked = ops.concat([srm, constrained, image])
    hidden = ops.tanh(ops.conv2d(
        stacked, tape.param(params.conv1), tape.param(params.conv1_bias), padding=1, pad_mode="symmetric"
    ))
    return ops.tanh(ops.conv2d(
        hidden, tape.param(params.conv2), tape.param(params.conv2_bias), padding=1, pad_mode="symmetric"
    ))


def extract_features(image: Union[FeatureMap, np.ndarray], params: ExtractorParams) -> FeatureMap:
    """
    Run the extractor on an H×W×3 image.

    Returns:
        H×W×D_feat features

    Raises:
        ShapeMismatchError: If the image does not have 3 channels
    """
    values = image.values if isinstance(image, FeatureMap) else np.asarray(image, dtype=np.float64)
    return FeatureMap(extractor_node(Tape().constant(values), params).value)
