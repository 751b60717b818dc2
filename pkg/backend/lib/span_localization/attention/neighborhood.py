"""Dilated neighborhood gathering."""

from dataclasses import dataclass, field
from typing import List, Tuple, Union

import numpy as np

from ..core.errors import ShapeMismatchError
from ..core.types import FeatureMap
from .config import NeighborhoodSpec


@dataclass
class NeighborEntry:
    """One in-bounds neighbor Y_l."""
    index: int                 # l, 1-based, top-left to bottom-right
    offset: Tuple[int, int]    # (row, col) displacement in pixels
    vector: np.ndarray         # (D,)


@dataclass
class NeighborPatch:
    """In-bounds neighbors of one pixel; out-of-bounds slots are omitted."""
    row: int
    col: int
    entries: List[NeighborEntry] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.entries)

    @property
    def indices(self) -> List[int]:
        return [entry.index for entry in self.entries]


def gather_neighborhood(
    x: Union[FeatureMap, np.ndarray],
    row: int,
    col: int,
    spec: NeighborhoodSpec,
) -> NeighborPatch:
    """
    Collect the dilated (2N+1)² neighborhood of pixel (row, col).

    Args:
        x: Feature map (H, W, D)
        row, col: Pixel position
        spec: Radius and dilation

    Returns:
        NeighborPatch with every in-bounds neighbor tagged by its slot index
    """
    values = x.values if isinstance(x, FeatureMap) else np.asarray(x, dtype=np.float64)
    height, width = values.shape[0], values.shape[1]
    if not (0 <= row < height and 0 <= col < width):
        raise ShapeMismatchError("gather_neighborhood", (row, col), (height, width), "pixel outside image")

    patch = NeighborPatch(row=row, col=col)
    for slot, (dr, dc) in enumerate(spec.offsets()):
        r, c = row + dr, col + dc
        if 0 <= r < height and 0 <= c < width:
            patch.entries.append(NeighborEntry(index=slot + 1, offset=(dr, dc), vector=values[r, c].copy()))
    return patch


def _overlap(size: int, shift: int) -> Tuple[int, int]:
    """Output range [lo, hi) whose source index i + shift is inside [0, size)."""
    return max(0, -shift), min(size, size - shift)


def shift_map(values: np.ndarray, dr: int, dc: int) -> Tuple[np.ndarray, np.ndarray]:
    """
    out[i, j] = values[i + dr, j + dc] where in bounds, else 0.

    Returns:
        (shifted values, boolean validity mask of shape (H, W))
    """
    height, width = values.shape[0], values.shape[1]
    out = np.zeros_like(values)
    valid = np.zeros((height, width), dtype=bool)
    r0, r1 = _overlap(height, dr)
    c0, c1 = _overlap(width, dc)
    if r1 > r0 and c1 > c0:
        out[r0:r1, c0:c1] = values[r0 + dr:r1 + dr, c0 + dc:c1 + dc]
        valid[r0:r1, c0:c1] = True
    return out, valid


def unshift_map(grad: np.ndarray, dr: int, dc: int) -> np.ndarray:
    """Adjoint of shift_map: scatter grad[i, j] back to position (i + dr, j + dc)."""
    height, width = grad.shape[0], grad.shape[1]
    out = np.zeros_like(grad)
    r0, r1 = _overlap(height, dr)
    c0, c1 = _overlap(width, dc)
    if r1 > r0 and c1 > c0:
        out[r0 + dr:r1 + dr, c0 + dc:c1 + dc] = grad[r0:r1, c0:c1]
    return out
