"""
Model evaluation: pooled report with per-type breakdown, threshold sweep and
the robustness battery.
"""

import logging
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional, Sequence

from ..core.errors import ConfigError, MetricError
from ..core.parallel import map_ordered
from ..core.rng import Rng
from ..core.types import FeatureMap, ManipulationType
from ..datagen.source import MANIPULATION_TYPES, SampleBatch
from .scores import confusion, pixel_auc, threshold_sweep
from .transforms import DEFAULT_TRANSFORMS, Transform, apply_transform, parse_transforms

logger = logging.getLogger(__name__)

Predictor = Callable[[FeatureMap], FeatureMap]


def default_grid() -> List[float]:
    return [round(0.05 * k, 2) for k in range(1, 20)]


@dataclass
class EvalConfig:
    """Evaluation protocol."""
    threshold: float = 0.5
    sweep_grid: List[float] = field(default_factory=default_grid)
    transforms: List[str] = field(default_factory=lambda: list(DEFAULT_TRANSFORMS))
    noise_seed: int = 0

    def __post_init__(self):
        if not 0.0 < self.threshold < 1.0:
            raise ConfigError("threshold", f"must lie in (0, 1), got {self.threshold}")
        if not self.sweep_grid or any(not 0.0 < t < 1.0 for t in self.sweep_grid):
            raise ConfigError("sweep_grid", f"must be a nonempty list inside (0, 1), got {self.sweep_grid}")
        # Rejects unknown transform names early
        parse_transforms(self.transforms)


@dataclass
class TypeScore:
    pixel_auc: Optional[float]   # None when the subset has a single label class
    f1: float
    samples: int


@dataclass
class EvalReport:
    """Pooled-pixel evaluation of one prediction set."""
    pixel_auc: float
    precision: float
    recall: float
    f1: float
    threshold: float
    sample_count: int
    per_type: Dict[str, TypeScore] = field(default_factory=dict)
    sweep_threshold: Optional[float] = None
    sweep_f1: Optional[float] = None


@dataclass
class RobustnessRow:
    transform: str
    pixel_auc: float
    f1: float


def score_predictions(
    preds: Sequence[FeatureMap],
    masks: Sequence[FeatureMap],
    kinds: Optional[Sequence[ManipulationType]] = None,
    threshold: float = 0.5,
    grid: Optional[Sequence[float]] = None,
) -> EvalReport:
    """
    Build an EvalReport from predictions and ground truth.

    Raises:
        MetricError: If the pooled ground truth has a single class
    """
    counts = confusion(preds, masks, threshold)
    report = EvalReport(
        pixel_auc=pixel_auc(preds, masks),
        precision=counts.precision,
        recall=counts.recall,
        f1=counts.f1,
        threshold=threshold,
        sample_count=len(preds),
    )
    if kinds is not None:
        for kind in MANIPULATION_TYPES:
            chosen = [i for i, k in enumerate(kinds) if k is kind]
            if not chosen:
                continue
            sub_preds = [preds[i] for i in chosen]
            sub_masks = [masks[i] for i in chosen]
            try:
                auc = pixel_auc(sub_preds, sub_masks)
            except MetricError:
                auc = None
            report.per_type[kind.value] = TypeScore(auc, confusion(sub_preds, sub_masks, threshold).f1, len(chosen))
    if grid:
        report.sweep_threshold, report.sweep_f1 = threshold_sweep(preds, masks, grid)
    return report


def predict_all(predictor: Predictor, images: Sequence[FeatureMap], threads: Optional[int] = None) -> List[FeatureMap]:
    """Per-image predictions, in input order."""
    return map_ordered(predictor, list(images), threads)


def evaluate(
    predictor: Predictor,
    samples: SampleBatch,
    config: Optional[EvalConfig] = None,
    threads: Optional[int] = None,
) -> EvalReport:
    """
    Predict every sample and score the result.

    Args:
        predictor: image -> H×W×1 soft mask (e.g. SpanModel.predict)
        samples: Images, masks and manipulation types
        config: Threshold and sweep grid
    """
    config = config or EvalConfig()
    if not len(samples):
        raise MetricError("evaluation set is empty")
    preds = predict_all(predictor, samples.images, threads)
    report = score_predictions(preds, samples.masks, samples.manipulation_types, config.threshold, config.sweep_grid)
    logger.info(
        f"Evaluated {report.sample_count} samples: AUC {report.pixel_auc:.4f}, "
        f"F1@{report.threshold:g} {report.f1:.4f}"
    )
    return report


def robustness_suite(
    predictor: Predictor,
    samples: SampleBatch,
    transforms: Sequence[Transform],
    threshold: float = 0.5,
    noise_seed: int = 0,
    threads: Optional[int] = None,
) -> List[RobustnessRow]:
    """
    Re-evaluate pooled AUC and F1 after attacking every image.

    Noise for sample i is drawn from Rng(noise_seed).child(i), so every
    noise row sees the same per-sample streams.

    Raises:
        MetricError: If the evaluation set is empty
        ShapeMismatchError: If a resize goes below 8×8
    """
    if not len(samples):
        raise MetricError("evaluation set is empty")
    base = Rng(noise_seed)
    rows = []
    for transform in transforms:
        attacked_images, attacked_masks = [], []
        for index, (image, mask) in enumerate(zip(samples.images, samples.masks)):
            image_t, mask_t = apply_transform(transform, image, mask, base.child(index))
            attacked_images.append(image_t)
            attacked_masks.append(mask_t)
        preds = predict_all(predictor, attacked_images, threads)
        counts = confusion(preds, attacked_masks, threshold)
        rows.append(RobustnessRow(transform.name, pixel_auc(preds, attacked_masks), counts.f1))
        logger.info(f"Robustness {transform.name}: AUC {rows[-1].pixel_auc:.4f}")
    return rows
