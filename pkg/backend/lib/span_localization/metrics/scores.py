"""
Pooled pixel-level scores: ROC AUC, precision / recall / F1, threshold sweep.

Every function pools the pixels of all samples before scoring.
"""

from dataclasses import dataclass
from typing import Iterable, Sequence, Tuple, Union

import numpy as np
from scipy.stats import rankdata

from ..core.errors import MetricError, ShapeMismatchError
from ..core.types import FeatureMap

MapLike = Union[FeatureMap, np.ndarray]


def _values(item: MapLike) -> np.ndarray:
    return item.values if isinstance(item, FeatureMap) else np.asarray(item, dtype=np.float64)


def pool(preds: Sequence[MapLike], masks: Sequence[MapLike]) -> Tuple[np.ndarray, np.ndarray]:
    """Flatten and concatenate predictions and binary labels across samples."""
    if len(preds) != len(masks):
        raise ShapeMismatchError("pool", (len(preds),), (len(masks),), "prediction vs mask count")
    if not preds:
        raise MetricError("no samples to score")
    scores, labels = [], []
    for pred, mask in zip(preds, masks):
        p, m = _values(pred), _values(mask)
        if p.size != m.size:
            raise ShapeMismatchError("pool", p.shape, m.shape, "prediction vs mask")
        scores.append(p.reshape(-1))
        labels.append(m.reshape(-1) >= 0.5)
    return np.concatenate(scores), np.concatenate(labels)


def pixel_auc(preds: Sequence[MapLike], masks: Sequence[MapLike]) -> float:
    """
    Rank-based (Mann–Whitney) ROC AUC over pooled pixels; ties count 1/2.

    Raises:
        MetricError: If the pooled ground truth is all-positive or all-negative
    """
    scores, labels = pool(preds, masks)
    positives = int(labels.sum())
    negatives = labels.size - positives
    if positives == 0 or negatives == 0:
        raise MetricError(
            f"pixel AUC undefined: ground truth has {positives} positive and {negatives} negative pixels"
        )
    ranks = rankdata(scores, method="average")
    rank_sum = float(ranks[labels].sum())
    return (rank_sum - positives * (positives + 1) / 2.0) / (positives * negatives)


@dataclass(frozen=True)
class Confusion:
    tp: int
    fp: int
    fn: int
    tn: int

    @property
    def precision(self) -> float:
        return self.tp / (self.tp + self.fp) if self.tp + self.fp else 0.0

    @property
    def recall(self) -> float:
        return self.tp / (self.tp + self.fn) if self.tp + self.fn else 0.0

    @property
    def f1(self) -> float:
        p, r = self.precision, self.recall
        return 2.0 * p * r / (p + r) if p + r > 0 else 0.0


def _check_threshold(threshold: float) -> float:
    threshold = float(threshold)
    if not 0.0 < threshold < 1.0:
        raise MetricError(f"threshold must lie in (0, 1), got {threshold}")
    return threshold


def _count(scores: np.ndarray, labels: np.ndarray, threshold: float) -> Confusion:
    predicted = scores >= threshold
    return Confusion(
        tp=int(np.sum(predicted & labels)),
        fp=int(np.sum(predicted & ~labels)),
        fn=int(np.sum(~predicted & labels)),
        tn=int(np.sum(~predicted & ~labels)),
    )


def confusion(preds: Sequence[MapLike], masks: Sequence[MapLike], threshold: float = 0.5) -> Confusion:
    """Pooled confusion counts with pred >= threshold as positive."""
    threshold = _check_threshold(threshold)
    scores, labels = pool(preds, masks)
    return _count(scores, labels, threshold)


def prf1(preds: Sequence[MapLike], masks: Sequence[MapLike], threshold: float = 0.5) -> Tuple[float, float, float]:
    """
    Returns:
        (precision, recall, F1); precision is 0 when nothing is predicted
        positive, F1 is 0 when P + R = 0
    """
    counts = confusion(preds, masks, threshold)
    return counts.precision, counts.recall, counts.f1


def threshold_sweep(
    preds: Sequence[MapLike],
    masks: Sequence[MapLike],
    grid: Iterable[float],
) -> Tuple[float, float]:
    """
    Best F1 over a threshold grid; ties go to the lowest threshold.

    Returns:
        (threshold, F1)

    Raises:
        MetricError: If the grid is empty or leaves (0, 1)
    """
    grid = sorted(_check_threshold(t) for t in grid)
    if not grid:
        raise MetricError("threshold grid is empty")
    scores, labels = pool(preds, masks)
    best_threshold, best_f1 = grid[0], -1.0
    for threshold in grid:
        f1 = _count(scores, labels, threshold).f1
        if f1 > best_f1:
            best_threshold, best_f1 = threshold, f1
    return best_threshold, best_f1
