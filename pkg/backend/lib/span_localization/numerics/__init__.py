"""
Numerical foundation: parameter tensors, the recording tape, differentiable
operations and finite-difference checking. All arithmetic is float64.
"""

from . import ops
from .gradcheck import check_gradients, finite_difference_gradient, relative_error
from .tape import Node, Tape
from .tensor import ParamTensor

__all__ = [
    "ops",
    "Node",
    "Tape",
    "ParamTensor",
    "finite_difference_gradient",
    "relative_error",
    "check_gradients",
]
