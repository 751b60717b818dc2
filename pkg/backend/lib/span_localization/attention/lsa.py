"""
Local self-attention (LSA) over dilated neighborhoods.

For pixel X_ij with in-bounds neighbors Y_l:

    out_ij = Σ_l w_l · M^v Y_l,   w = softmax_l(⟨key_l, M^q X_ij⟩ / √D)

    key_l = M^k M_l Y_l        (PP)
          = M^k (Y_l + e_l)    (PE)
          = M^k Y_l            (none)

Out-of-bounds neighbors are excluded and the softmax is renormalized over
the remaining ones. The forward pass is vectorized over pixels by shifting
the whole map once per neighbor slot.
"""

import logging
from dataclasses import dataclass
from typing import List, Optional, Union

import numpy as np

from ..core.errors import ShapeMismatchError, TapeError
from ..core.types import FeatureMap, PositionMode
from ..numerics.tape import Node, Tape
from .config import AttentionParams, NeighborhoodSpec
from .neighborhood import shift_map, unshift_map

logger = logging.getLogger(__name__)


@dataclass
class LsaRecord:
    """Forward-pass cache consumed by `lsa_backward`."""
    spec: NeighborhoodSpec
    mode: PositionMode
    x: np.ndarray               # (H, W, D)
    query_proj: np.ndarray
    key_proj: np.ndarray
    value_proj: np.ndarray
    positional_projs: Optional[np.ndarray]
    positional_embeds: Optional[np.ndarray]
    neighbors: np.ndarray       # (L, H, W, D)  Y_l, zero where invalid
    valid: np.ndarray           # (L, H, W) bool
    key_inputs: np.ndarray      # (L, H, W, D)  M_l Y_l / Y_l + e_l / Y_l
    keys: np.ndarray            # (L, H, W, D)
    queries: np.ndarray         # (H, W, D)
    shifted_values: np.ndarray  # (L, H, W, D)  M^v Y_l
    weights: np.ndarray         # (L, H, W)
    output: np.ndarray          # (H, W, D)


@dataclass
class LsaGradients:
    """Gradients of one block w.r.t. its input and every weight."""
    x: np.ndarray
    query_proj: np.ndarray
    key_proj: np.ndarray
    value_proj: np.ndarray
    positional_projs: Optional[np.ndarray] = None
    positional_embeds: Optional[np.ndarray] = None

    def for_params(self, params: AttentionParams) -> List[np.ndarray]:
        """Weight gradients aligned with `params.tensors()`."""
        grads = [self.query_proj, self.key_proj, self.value_proj]
        if params.positional_projs is not None:
            grads.append(self.positional_projs)
        if params.positional_embeds is not None:
            grads.append(self.positional_embeds)
        return grads


def _as_array(x: Union[FeatureMap, np.ndarray]) -> np.ndarray:
    return x.values if isinstance(x, FeatureMap) else np.asarray(x, dtype=np.float64)


def lsa_forward_record(
    x: Union[FeatureMap, np.ndarray],
    params: AttentionParams,
    spec: NeighborhoodSpec,
    mode: PositionMode,
) -> LsaRecord:
    """Run the block and keep everything the backward pass needs."""
    x = _as_array(x)
    mode = PositionMode.parse(mode)
    if x.ndim != 3 or x.shape[2] != params.depth:
        raise ShapeMismatchError("lsa_forward", x.shape, (params.depth, params.depth), "input depth must equal D")
    params.validate(spec, mode)

    depth = params.depth
    mq = params.query_proj.values.copy()
    mk = params.key_proj.values.copy()
    mv = params.value_proj.values.copy()
    ml = params.positional_projs.values.copy() if mode is PositionMode.PP else None
    emb = params.positional_embeds.values.copy() if mode is PositionMode.PE else None

    offsets = spec.offsets()
    queries = x @ mq.T
    values = x @ mv.T

    neighbors = np.empty((len(offsets),) + x.shape)
    shifted_values = np.empty_like(neighbors)
    valid = np.empty((len(offsets),) + x.shape[:2], dtype=bool)
    for slot, (dr, dc) in enumerate(offsets):
        neighbors[slot], valid[slot] = shift_map(x, dr, dc)
        shifted_values[slot], _ = shift_map(values, dr, dc)

    if mode is PositionMode.PP:
        key_inputs = np.einsum("ljk,lhwk->lhwj", ml, neighbors)
    elif mode is PositionMode.PE:
        key_inputs = (neighbors + emb[:, None, None, :]) * valid[..., None]
    else:
        key_inputs = neighbors
    keys = key_inputs @ mk.T

    scores = np.einsum("lhwd,hwd->lhw", keys, queries) / np.sqrt(depth)
    scores = np.where(valid, scores, -np.inf)
    scores = scores - scores.max(axis=0, keepdims=True)
    weights = np.exp(scores)
    weights /= weights.sum(axis=0, keepdims=True)

    output = np.einsum("lhw,lhwd->hwd", weights, shifted_values)
    return LsaRecord(
        spec=spec, mode=mode, x=x,
        query_proj=mq, key_proj=mk, value_proj=mv,
        positional_projs=ml, positional_embeds=emb,
        neighbors=neighbors, valid=valid, key_inputs=key_inputs, keys=keys,
        queries=queries, shifted_values=shifted_values, weights=weights, output=output,
    )


def lsa_backward(record: Optional[LsaRecord], upstream: np.ndarray) -> LsaGradients:
    """
    Exact reverse-mode gradients of one block.

    Args:
        record: Cache from `lsa_forward_record`
        upstream: dObjective/dOutput, shape (H, W, D)

    Raises:
        TapeError: If no forward record is supplied
    """
    if record is None:
        raise TapeError("lsa_backward called without a recorded forward pass")
    upstream = np.asarray(upstream, dtype=np.float64)
    if upstream.shape != record.output.shape:
        raise ShapeMismatchError("lsa_backward", record.output.shape, upstream.shape)

    x = record.x
    depth = x.shape[2]
    offsets = record.spec.offsets()
    weights = record.weights
    flat_x = x.reshape(-1, depth)

    # Value path
    grad_weights = np.einsum("hwd,lhwd->lhw", upstream, record.shifted_values)
    grad_shifted = weights[..., None] * upstream[None]
    grad_values = np.zeros_like(x)
    for slot, (dr, dc) in enumerate(offsets):
        grad_values += unshift_map(grad_shifted[slot], dr, dc)
    grad_x = grad_values @ record.value_proj
    grad_value_proj = grad_values.reshape(-1, depth).T @ flat_x

    # Softmax and score path; invalid slots carry zero weight and zero gradient
    grad_scores = weights * (grad_weights - np.sum(weights * grad_weights, axis=0, keepdims=True))
    grad_scores /= np.sqrt(depth)
    grad_queries = np.einsum("lhw,lhwd->hwd", grad_scores, record.keys)
    grad_keys = grad_scores[..., None] * record.queries[None]

    grad_x += grad_queries @ record.query_proj
    grad_query_proj = grad_queries.reshape(-1, depth).T @ flat_x

    # Key path
    mk = record.key_proj
    grad_key_inputs = grad_keys @ mk
    grad_key_proj = np.einsum("lhwe,lhwd->ed", grad_keys, record.key_inputs)
    grad_positional_projs = None
    grad_positional_embeds = None
    if record.mode is PositionMode.PP:
        ml = record.positional_projs
        grad_neighbors = np.einsum("lhwj,ljk->lhwk", grad_key_inputs, ml)
        grad_positional_projs = np.einsum("lhwj,lhwk->ljk", grad_key_inputs, record.neighbors)
    elif record.mode is PositionMode.PE:
        grad_neighbors = grad_key_inputs * record.valid[..., None]
        grad_positional_embeds = grad_neighbors.sum(axis=(1, 2))
    else:
        grad_neighbors = grad_key_inputs

    for slot, (dr, dc) in enumerate(offsets):
        grad_x += unshift_map(grad_neighbors[slot], dr, dc)

    return LsaGradients(
        x=grad_x,
        query_proj=grad_query_proj,
        key_proj=grad_key_proj,
        value_proj=grad_value_proj,
        positional_projs=grad_positional_projs,
        positional_embeds=grad_positional_embeds,
    )


def lsa_node(
    x: Node,
    params: AttentionParams,
    spec: NeighborhoodSpec,
    mode: PositionMode,
) -> Node:
    """Record one LSA block on x's tape."""
    tape: Tape = x.tape
    weight_nodes = [tape.param(tensor) for tensor in params.tensors()]
    record = lsa_forward_record(x.value, params, spec, mode)

    def backward(g):
        grads = lsa_backward(record, g)
        return [grads.x] + grads.for_params(params)

    return tape.record(f"lsa:t={spec.dilation}", record.output, [x] + weight_nodes, backward)


def lsa_forward(
    x: Union[FeatureMap, np.ndarray],
    params: AttentionParams,
    spec: NeighborhoodSpec,
    mode: Union[PositionMode, str] = PositionMode.PP,
) -> FeatureMap:
    """
    Apply one block to a feature map.

    Args:
        x: (H, W, D) input
        params: Block weights of depth D
        spec: Neighborhood radius and dilation
        mode: PP, PE or none

    Returns:
        Output map of the input's shape
    """
    return FeatureMap(lsa_forward_record(x, params, spec, mode).output)


def attention_weights(
    x: Union[FeatureMap, np.ndarray],
    params: AttentionParams,
    spec: NeighborhoodSpec,
    mode: Union[PositionMode, str] = PositionMode.PP,
):
    """
    Per-pixel attention distributions.

    Returns:
        (weights, valid) each shaped (H, W, L); weights are zero on invalid slots
    """
    record = lsa_forward_record(x, params, spec, mode)
    return np.moveaxis(record.weights, 0, -1), np.moveaxis(record.valid, 0, -1)
