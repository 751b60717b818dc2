"""
Adam with bias correction.

    m ← β1·m + (1 − β1)·g
    v ← β2·v + (1 − β2)·g²
    p ← p − lr · m̂ / (√v̂ + ε),   m̂ = m / (1 − β1^t),  v̂ = v / (1 − β2^t)
"""

import logging
from dataclasses import dataclass, field
from typing import Dict, Iterable, Optional

import numpy as np

from ..core.errors import NonFiniteError, ShapeMismatchError
from ..numerics.tensor import ParamTensor

logger = logging.getLogger(__name__)


@dataclass
class OptimizerState:
    """Adam moments per parameter name, step counter and current rate."""
    lr: float
    beta1: float = 0.9
    beta2: float = 0.999
    eps: float = 1e-8
    step: int = 0
    first_moment: Dict[str, np.ndarray] = field(default_factory=dict)
    second_moment: Dict[str, np.ndarray] = field(default_factory=dict)


def adam_step(
    params: Iterable[ParamTensor],
    grads: Dict[str, np.ndarray],
    state: OptimizerState,
    lr: Optional[float] = None,
) -> OptimizerState:
    """
    Apply one update in place to every trainable tensor in `params`.

    Args:
        params: Tensors to update (fixed tensors are skipped)
        grads: Gradient per parameter name
        state: Moments and step counter (mutated)
        lr: Learning rate override for this step (defaults to state.lr)

    Raises:
        NonFiniteError: If any gradient has a NaN/Inf (nothing is updated)
        ShapeMismatchError: If a gradient shape differs from its parameter
    """
    params = [p for p in params if p.trainable]
    for p in params:
        grad = grads[p.name]
        if grad.shape != p.values.shape:
            raise ShapeMismatchError("adam_step", p.values.shape, grad.shape, p.name)
        if not np.all(np.isfinite(grad)):
            bad = np.argwhere(~np.isfinite(grad))[0]
            raise NonFiniteError(f"gradient of {p.name}", bad.tolist())

    lr = state.lr if lr is None else lr
    state.step += 1
    correction1 = 1.0 - state.beta1 ** state.step
    correction2 = 1.0 - state.beta2 ** state.step
    for p in params:
        grad = grads[p.name]
        m = state.first_moment.get(p.name)
        v = state.second_moment.get(p.name)
        if m is None:
            m = np.zeros_like(p.values)
            v = np.zeros_like(p.values)
        m = state.beta1 * m + (1.0 - state.beta1) * grad
        v = state.beta2 * v + (1.0 - state.beta2) * grad * grad
        state.first_moment[p.name] = m
        state.second_moment[p.name] = v
        p.values -= lr * (m / correction1) / (np.sqrt(v / correction2) + state.eps)
    return state
