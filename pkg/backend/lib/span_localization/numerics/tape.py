"""
Recorded computation graph for reverse-mode differentiation.

A `Tape` is a Wengert list: every differentiable operation appends a `Node`
holding its value, its parent nodes and a closure mapping the upstream
gradient to one gradient per parent. `Tape.backward` walks the list in
reverse from a root node and accumulates gradients.

A tape belongs to one forward/backward pass on one thread. Parallel batch
elements each use their own tape and return gradient maps
(`accumulate=False`) that the caller sums in a fixed order.

Example:
    tape = Tape()
    x = tape.param(weights)
    y = ops.sum_all(ops.mul(x, x))
    tape.backward(y)          # weights.grad now holds 2 * weights.values
"""

import logging
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional, Sequence

import numpy as np

from ..core.errors import ShapeMismatchError, TapeError
from .tensor import ParamTensor

logger = logging.getLogger(__name__)

BackwardFn = Callable[[np.ndarray], Sequence[Optional[np.ndarray]]]


@dataclass(eq=False)
class Node:
    """One recorded value on a tape."""
    value: np.ndarray
    tape: "Tape" = field(repr=False)
    index: int
    op: str = "leaf"
    parents: tuple = field(default=(), repr=False)
    backward: Optional[BackwardFn] = field(default=None, repr=False)
    param: Optional[ParamTensor] = field(default=None, repr=False)
    requires_grad: bool = False

    @property
    def shape(self) -> tuple:
        return tuple(self.value.shape)


class Tape:
    """Single-pass computation record."""

    def __init__(self):
        self.nodes: List[Node] = []
        self._param_nodes: Dict[int, Node] = {}
        self._grads: Optional[Dict[int, np.ndarray]] = None

    def __len__(self) -> int:
        return len(self.nodes)

    def _append(self, node: Node) -> Node:
        self.nodes.append(node)
        return node

    def constant(self, values) -> Node:
        """Leaf that never receives a gradient."""
        value = np.asarray(values, dtype=np.float64)
        return self._append(Node(value=value, tape=self, index=len(self.nodes)))

    def variable(self, values) -> Node:
        """Leaf that receives a gradient (read it back with `gradient`)."""
        value = np.array(values, dtype=np.float64)
        return self._append(Node(value=value, tape=self, index=len(self.nodes), requires_grad=True))

    def param(self, tensor: ParamTensor) -> Node:
        """Leaf bound to a ParamTensor; the same tensor maps to the same node."""
        existing = self._param_nodes.get(id(tensor))
        if existing is not None:
            return existing
        node = Node(
            value=tensor.values,
            tape=self,
            index=len(self.nodes),
            op=f"param:{tensor.name}",
            param=tensor,
            requires_grad=tensor.trainable,
        )
        self._param_nodes[id(tensor)] = node
        return self._append(node)

    def record(self, op: str, value: np.ndarray, parents: Sequence[Node], backward: BackwardFn) -> Node:
        """Append the result of an operation on `parents`."""
        for parent in parents:
            if parent.tape is not self:
                raise TapeError(f"{op}: operand recorded on a different tape")
        requires_grad = any(parent.requires_grad for parent in parents)
        return self._append(Node(
            value=value,
            tape=self,
            index=len(self.nodes),
            op=op,
            parents=tuple(parents),
            backward=backward if requires_grad else None,
            requires_grad=requires_grad,
        ))

    def _owns(self, node: Node) -> bool:
        return node.tape is self and node.index < len(self.nodes) and self.nodes[node.index] is node

    def backward(
        self,
        root: Node,
        upstream: Optional[np.ndarray] = None,
        accumulate: bool = True,
    ) -> Dict[str, np.ndarray]:
        """
        Reverse-mode pass from `root`.

        Args:
            root: Node recorded on this tape
            upstream: Gradient of the objective w.r.t. root; defaults to 1 for scalar roots
            accumulate: Add parameter gradients into ParamTensor.grad

        Returns:
            Map parameter name -> gradient for every trainable parameter on the tape

        Raises:
            TapeError: If root was not recorded on this tape
        """
        if not self._owns(root):
            raise TapeError("backward requested for a node that was not recorded on this tape")
        if upstream is None:
            if root.value.size != 1:
                raise TapeError(f"backward from non-scalar root {root.shape} requires an upstream gradient")
            upstream = np.ones_like(root.value)
        upstream = np.asarray(upstream, dtype=np.float64)
        if upstream.shape != root.value.shape:
            raise ShapeMismatchError("backward", root.value.shape, upstream.shape, "upstream gradient")

        grads: Dict[int, np.ndarray] = {root.index: upstream}
        for node in reversed(self.nodes[:root.index + 1]):
            g = grads.get(node.index)
            if g is None or node.backward is None:
                continue
            parent_grads = node.backward(g)
            for parent, parent_grad in zip(node.parents, parent_grads):
                if parent_grad is None or not parent.requires_grad:
                    continue
                if parent.index in grads:
                    grads[parent.index] = grads[parent.index] + parent_grad
                else:
                    grads[parent.index] = np.asarray(parent_grad, dtype=np.float64)
        self._grads = grads
        logger.debug(f"Backward pass over {root.index + 1} recorded nodes")

        result: Dict[str, np.ndarray] = {}
        for node in self._param_nodes.values():
            tensor = node.param
            if not tensor.trainable:
                continue
            grad = grads.get(node.index)
            if grad is None:
                grad = np.zeros_like(tensor.values)
            result[tensor.name] = grad
            if accumulate:
                tensor.grad = tensor.grad + grad
        return result

    def gradient(self, node: Node) -> np.ndarray:
        """Gradient reaching `node` in the last backward pass."""
        if self._grads is None:
            raise TapeError("no backward pass has been run on this tape")
        if not self._owns(node):
            raise TapeError("gradient requested for a node that was not recorded on this tape")
        grad = self._grads.get(node.index)
        return np.zeros_like(node.value) if grad is None else grad
