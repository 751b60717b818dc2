"""
Central finite differences, the verification oracle for reverse mode.
"""

import logging
from typing import Callable, Dict, Iterable

import numpy as np

from ..core.errors import NonFiniteError
from .tape import Node, Tape
from .tensor import ParamTensor

logger = logging.getLogger(__name__)

RELATIVE_ERROR_FLOOR = 1e-3


def finite_difference_gradient(
    f: Callable[[ParamTensor], float],
    p: ParamTensor,
    step: float = 1e-5,
) -> np.ndarray:
    """
    Estimate df/dp elementwise as (f(p + εe_i) − f(p − εe_i)) / 2ε.

    `p` is perturbed in place and restored after every evaluation.

    Args:
        f: Scalar objective evaluated at the current values of `p`
        p: Parameter to differentiate against
        step: ε > 0

    Returns:
        Array with the shape of p

    Raises:
        NonFiniteError: If f is non-finite at a perturbed point (names the index)
    """
    if step <= 0:
        raise ValueError(f"step must be positive, got {step}")
    grad = np.zeros_like(p.values)
    for index in np.ndindex(p.values.shape):
        original = p.values[index]
        try:
            p.values[index] = original + step
            upper = float(f(p))
            p.values[index] = original - step
            lower = float(f(p))
        finally:
            p.values[index] = original
        if not (np.isfinite(upper) and np.isfinite(lower)):
            raise NonFiniteError(f"finite difference of {p.name}", index)
        grad[index] = (upper - lower) / (2.0 * step)
    return grad


def relative_error(analytic: np.ndarray, numeric: np.ndarray, floor: float = RELATIVE_ERROR_FLOOR) -> float:
    """‖a − n‖ / max(‖a‖, ‖n‖, floor)."""
    scale = max(np.linalg.norm(analytic), np.linalg.norm(numeric), floor)
    return float(np.linalg.norm(analytic - numeric) / scale)


def check_gradients(
    build: Callable[[Tape], Node],
    params: Iterable[ParamTensor],
    step: float = 1e-5,
) -> Dict[str, float]:
    """
    Compare reverse-mode gradients with central differences.

    Args:
        build: Records a scalar objective on the given tape and returns its node
        params: Parameters to check
        step: Finite-difference step

    Returns:
        Map parameter name -> relative error
    """
    params = [p for p in params if p.trainable]
    tape = Tape()
    analytic = tape.backward(build(tape), accumulate=False)

    def objective(_: ParamTensor) -> float:
        return float(build(Tape()).value)

    errors = {}
    for p in params:
        numeric = finite_difference_gradient(objective, p, step)
        errors[p.name] = relative_error(analytic[p.name], numeric)
        logger.debug(f"Gradient check {p.name}: relative error {errors[p.name]:.3e}")
    return errors
