"""Pixel-averaged binary cross-entropy."""

from typing import Union

import numpy as np

from ..core.errors import MetricError, ShapeMismatchError
from ..core.types import FeatureMap
from ..numerics.tape import Node, Tape

CLAMP = 1e-12


def _mask_array(mask: Union[FeatureMap, np.ndarray], shape: tuple) -> np.ndarray:
    values = mask.values if isinstance(mask, FeatureMap) else np.asarray(mask, dtype=np.float64)
    if values.ndim == 2:
        values = values[:, :, None]
    if values.shape != tuple(shape):
        raise ShapeMismatchError("bce_loss", shape, values.shape, "prediction vs mask")
    if not np.all((values == 0.0) | (values == 1.0)):
        raise MetricError("bce_loss: mask values must be 0 or 1")
    return values


def bce_loss(pred: Node, mask: Union[FeatureMap, np.ndarray]) -> Node:
    """
    (1/HW) Σ −B log p − (1 − B) log(1 − p), with p clamped to [1e-12, 1 − 1e-12].

    Args:
        pred: H×W×1 probability node
        mask: H×W×1 binary ground truth

    Returns:
        Scalar node

    Raises:
        ShapeMismatchError: If shapes differ
        MetricError: If the mask is not binary
    """
    target = _mask_array(mask, pred.shape)
    count = target.size
    clipped = np.clip(pred.value, CLAMP, 1.0 - CLAMP)
    inside = (pred.value >= CLAMP) & (pred.value <= 1.0 - CLAMP)
    loss = -np.sum(target * np.log(clipped) + (1.0 - target) * np.log(1.0 - clipped)) / count

    def backward(g):
        grad = (-target / clipped + (1.0 - target) / (1.0 - clipped)) / count
        return (float(g) * grad * inside,)

    return pred.tape.record("bce", np.array(loss), (pred,), backward)


def bce_value(pred: Union[FeatureMap, np.ndarray], mask: Union[FeatureMap, np.ndarray]) -> float:
    """bce_loss evaluated outside any training graph."""
    values = pred.values if isinstance(pred, FeatureMap) else pred
    return float(bce_loss(Tape().constant(values), mask).value)
