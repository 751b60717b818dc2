"""
Local self-attention block: dilated neighborhoods, key/query/value
projections, positional projection (PP) or positional embedding (PE).
"""

from .config import AttentionParams, NeighborhoodSpec
from .lsa import (
    LsaGradients,
    LsaRecord,
    attention_weights,
    lsa_backward,
    lsa_forward,
    lsa_forward_record,
    lsa_node,
)
from .neighborhood import NeighborEntry, NeighborPatch, gather_neighborhood, shift_map, unshift_map

__all__ = [
    "NeighborhoodSpec",
    "AttentionParams",
    "NeighborEntry",
    "NeighborPatch",
    "gather_neighborhood",
    "shift_map",
    "unshift_map",
    "LsaRecord",
    "LsaGradients",
    "lsa_forward",
    "lsa_forward_record",
    "lsa_backward",
    "lsa_node",
    "attention_weights",
]
