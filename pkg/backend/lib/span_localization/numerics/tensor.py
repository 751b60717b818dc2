"""Learnable parameter storage."""

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from ..core.errors import ShapeMismatchError


@dataclass(eq=False)
class ParamTensor:
    """
    A named float64 parameter with a gradient buffer of identical shape.

    `trainable=False` tensors (fixed filters) are recorded as constants on a
    tape and are skipped by the optimizer.
    """
    name: str
    values: np.ndarray
    trainable: bool = True
    grad: np.ndarray = field(default=None, repr=False)

    def __post_init__(self):
        self.values = np.array(self.values, dtype=np.float64)
        if self.grad is None:
            self.grad = np.zeros_like(self.values)
        else:
            self.grad = np.array(self.grad, dtype=np.float64)
            if self.grad.shape != self.values.shape:
                raise ShapeMismatchError("ParamTensor", self.values.shape, self.grad.shape, self.name)

    @property
    def shape(self) -> tuple:
        return tuple(self.values.shape)

    @property
    def size(self) -> int:
        return int(self.values.size)

    def assign(self, values: np.ndarray) -> None:
        """Replace values in place, keeping shape."""
        values = np.asarray(values, dtype=np.float64)
        if values.shape != self.values.shape:
            raise ShapeMismatchError("ParamTensor.assign", self.values.shape, values.shape, self.name)
        self.values[...] = values

    @classmethod
    def zeros(cls, name: str, shape: Sequence[int], trainable: bool = True) -> "ParamTensor":
        return cls(name=name, values=np.zeros(tuple(shape)), trainable=trainable)
