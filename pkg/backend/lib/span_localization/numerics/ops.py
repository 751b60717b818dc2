"""
Differentiable tensor operations recorded on a Tape.

Every function takes Nodes, computes its value with numpy in float64 and
records a backward closure. Spatial tensors are laid out (H, W, C);
convolution kernels are (kh, kw, C_in, C_out); projection matrices are
(D_out, D_in) and act on the channel axis.
"""

from typing import Optional, Sequence, Tuple

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view

from ..core.errors import ShapeMismatchError
from .tape import Node


def _unbroadcast(grad: np.ndarray, shape: tuple) -> np.ndarray:
    """Sum `grad` down to `shape` (reverse of numpy broadcasting)."""
    while grad.ndim > len(shape):
        grad = grad.sum(axis=0)
    for axis, size in enumerate(shape):
        if size == 1 and grad.shape[axis] != 1:
            grad = grad.sum(axis=axis, keepdims=True)
    return grad


def _broadcast_shape(op: str, a: Node, b: Node) -> tuple:
    try:
        return np.broadcast_shapes(a.shape, b.shape)
    except ValueError:
        raise ShapeMismatchError(op, a.shape, b.shape) from None


def add(a: Node, b: Node) -> Node:
    """Elementwise a + b with numpy broadcasting."""
    _broadcast_shape("add", a, b)

    def backward(g):
        return _unbroadcast(g, a.shape), _unbroadcast(g, b.shape)

    return a.tape.record("add", a.value + b.value, (a, b), backward)


def mul(a: Node, b: Node) -> Node:
    """Elementwise a * b with numpy broadcasting."""
    _broadcast_shape("mul", a, b)

    def backward(g):
        return _unbroadcast(g * b.value, a.shape), _unbroadcast(g * a.value, b.shape)

    return a.tape.record("mul", a.value * b.value, (a, b), backward)


def scale(a: Node, factor: float) -> Node:
    """Multiply by a constant scalar."""
    factor = float(factor)
    return a.tape.record("scale", a.value * factor, (a,), lambda g: (g * factor,))


def project(x: Node, matrix: Node) -> Node:
    """
    Per-pixel matrix-vector product along the channel axis.

    Args:
        x: (..., D_in)
        matrix: (D_out, D_in)

    Returns:
        (..., D_out) with out[p] = matrix @ x[p]
    """
    if matrix.value.ndim != 2 or x.shape[-1] != matrix.shape[1]:
        raise ShapeMismatchError("project", x.shape, matrix.shape, "channel depth must match matrix columns")

    def backward(g):
        flat_g = g.reshape(-1, g.shape[-1])
        flat_x = x.value.reshape(-1, x.shape[-1])
        return g @ matrix.value, flat_g.T @ flat_x

    return x.tape.record("project", x.value @ matrix.value.T, (x, matrix), backward)


def _pad_indices(size: int, pad: int) -> np.ndarray:
    return np.pad(np.arange(size), pad, mode="symmetric")


def pad2d(x: Node, pad: int, mode: str = "zero") -> Node:
    """
    Pad both spatial axes by `pad` pixels.

    Args:
        x: (H, W, C)
        pad: Pixels added on each side
        mode: "zero" or "symmetric" (edge-including mirror)
    """
    if pad == 0:
        return x
    if x.value.ndim != 3:
        raise ShapeMismatchError("pad2d", x.shape, ("H", "W", "C"))
    height, width = x.shape[0], x.shape[1]

    if mode == "zero":
        value = np.pad(x.value, ((pad, pad), (pad, pad), (0, 0)))

        def backward(g):
            return (g[pad:pad + height, pad:pad + width, :],)

    elif mode == "symmetric":
        rows = _pad_indices(height, pad)
        cols = _pad_indices(width, pad)
        value = x.value[rows][:, cols]

        def backward(g):
            grad = np.zeros_like(x.value)
            np.add.at(grad, (rows[:, None], cols[None, :]), g)
            return (grad,)

    else:
        raise ValueError(f"Unknown padding mode: {mode}. Available: zero, symmetric")

    return x.tape.record(f"pad2d:{mode}", value, (x,), backward)


def conv2d(
    x: Node,
    kernel: Node,
    bias: Optional[Node] = None,
    padding: int = 0,
    pad_mode: str = "zero",
) -> Node:
    """
    2-D cross-correlation, stride 1.

    Args:
        x: (H, W, C_in)
        kernel: (kh, kw, C_in, C_out)
        bias: (C_out,) or None
        padding: Pixels of padding on each side before a valid correlation
        pad_mode: "zero" or "symmetric"

    Returns:
        (H + 2p - kh + 1, W + 2p - kw + 1, C_out)
    """
    if kernel.value.ndim != 4 or x.value.ndim != 3 or kernel.shape[2] != x.shape[2]:
        raise ShapeMismatchError("conv2d", x.shape, kernel.shape, "input channels must match kernel axis 2")
    if bias is not None and bias.shape != (kernel.shape[3],):
        raise ShapeMismatchError("conv2d", kernel.shape, bias.shape, "bias length must match output channels")

    xp = pad2d(x, padding, pad_mode)
    kh, kw, c_in, c_out = kernel.shape
    out_h = xp.shape[0] - kh + 1
    out_w = xp.shape[1] - kw + 1
    if out_h < 1 or out_w < 1:
        raise ShapeMismatchError("conv2d", xp.shape, kernel.shape, "kernel larger than padded input")

    # (out_h, out_w, c_in, kh, kw) -> (out_h * out_w, kh * kw * c_in)
    windows = sliding_window_view(xp.value, (kh, kw), axis=(0, 1))
    cols = windows.transpose(0, 1, 3, 4, 2).reshape(out_h * out_w, kh * kw * c_in)
    kmat = kernel.value.reshape(kh * kw * c_in, c_out)
    value = (cols @ kmat).reshape(out_h, out_w, c_out)
    if bias is not None:
        value = value + bias.value

    def backward(g):
        flat_g = g.reshape(-1, c_out)
        grad_kernel = (cols.T @ flat_g).reshape(kh, kw, c_in, c_out)
        dcols = (flat_g @ kmat.T).reshape(out_h, out_w, kh, kw, c_in)
        grad_x = np.zeros_like(xp.value)
        for i in range(kh):
            for j in range(kw):
                grad_x[i:i + out_h, j:j + out_w, :] += dcols[:, :, i, j, :]
        grads = [grad_x, grad_kernel]
        if bias is not None:
            grads.append(flat_g.sum(axis=0))
        return grads

    parents = (xp, kernel) if bias is None else (xp, kernel, bias)
    return x.tape.record("conv2d", value, parents, backward)


def softmax(x: Node, axis: int = -1) -> Node:
    """Softmax along `axis` with max subtraction."""
    shifted = x.value - np.max(x.value, axis=axis, keepdims=True)
    exp = np.exp(shifted)
    y = exp / np.sum(exp, axis=axis, keepdims=True)

    def backward(g):
        return (y * (g - np.sum(g * y, axis=axis, keepdims=True)),)

    return x.tape.record("softmax", y, (x,), backward)


def sigmoid(x: Node) -> Node:
    """Logistic function, evaluated as (1 + tanh(x/2)) / 2."""
    y = 0.5 * (1.0 + np.tanh(0.5 * x.value))
    return x.tape.record("sigmoid", y, (x,), lambda g: (g * y * (1.0 - y),))


def tanh(x: Node) -> Node:
    y = np.tanh(x.value)
    return x.tape.record("tanh", y, (x,), lambda g: (g * (1.0 - y * y),))


def concat(nodes: Sequence[Node], axis: int = -1) -> Node:
    """Concatenate along `axis` (channels by default)."""
    nodes = list(nodes)
    values = [node.value for node in nodes]
    reference = list(values[0].shape)
    for node in nodes[1:]:
        other = list(node.shape)
        other[axis] = reference[axis]
        if other != reference:
            raise ShapeMismatchError("concat", nodes[0].shape, node.shape)
    sizes = [v.shape[axis] for v in values]
    splits = np.cumsum(sizes)[:-1]

    def backward(g):
        return np.split(g, splits, axis=axis)

    return nodes[0].tape.record("concat", np.concatenate(values, axis=axis), nodes, backward)


def area_matrix(size_in: int, size_out: int) -> np.ndarray:
    """Row-stochastic (size_out, size_in) box-filter resampling matrix."""
    matrix = np.zeros((size_out, size_in))
    step = size_in / size_out
    for i in range(size_out):
        start, stop = i * step, (i + 1) * step
        first = int(np.floor(start))
        last = min(int(np.ceil(stop)), size_in)
        for j in range(first, last):
            overlap = min(stop, j + 1) - max(start, j)
            if overlap > 0:
                matrix[i, j] = overlap / step
    return matrix


def bilinear_matrix(size_in: int, size_out: int) -> np.ndarray:
    """Row-stochastic (size_out, size_in) linear interpolation matrix (half-pixel centers)."""
    matrix = np.zeros((size_out, size_in))
    step = size_in / size_out
    for i in range(size_out):
        src = min(max((i + 0.5) * step - 0.5, 0.0), size_in - 1)
        low = int(np.floor(src))
        high = min(low + 1, size_in - 1)
        frac = src - low
        matrix[i, low] += 1.0 - frac
        matrix[i, high] += frac
    return matrix


def resize_matrices(shape_in: Tuple[int, int], shape_out: Tuple[int, int], method: str) -> Tuple[np.ndarray, np.ndarray]:
    builders = {"area": area_matrix, "bilinear": bilinear_matrix}
    if method not in builders:
        raise ValueError(f"Unknown resize method: {method}. Available: {', '.join(builders)}")
    build = builders[method]
    return build(shape_in[0], shape_out[0]), build(shape_in[1], shape_out[1])


def resize(x: Node, height: int, width: int, method: str = "area") -> Node:
    """
    Resize spatial axes with a separable linear resampler.

    Args:
        x: (H, W, C)
        height, width: Output size
        method: "area" (box filter) or "bilinear"
    """
    if height < 1 or width < 1:
        raise ShapeMismatchError("resize", x.shape, (height, width), "output size must be positive")
    rows, cols = resize_matrices(x.shape[:2], (height, width), method)
    value = np.einsum("ih,hwc,jw->ijc", rows, x.value, cols)

    def backward(g):
        return (np.einsum("ih,ijc,jw->hwc", rows, g, cols),)

    return x.tape.record(f"resize:{method}", value, (x,), backward)


def sum_all(x: Node) -> Node:
    return x.tape.record("sum", np.array(np.sum(x.value)), (x,), lambda g: (np.full_like(x.value, float(g)),))


def mean_all(x: Node) -> Node:
    count = x.value.size
    return x.tape.record(
        "mean", np.array(np.mean(x.value)), (x,), lambda g: (np.full_like(x.value, float(g) / count),)
    )
