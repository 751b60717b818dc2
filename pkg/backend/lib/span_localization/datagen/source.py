"""
Sample and batch streams.

Sample i of a stream with Rng `rng` draws everything from `rng.child(i)`,
so any sample can be regenerated on its own and streams are reproducible
from their seed.
"""

import logging
from dataclasses import dataclass, field
from typing import Iterator, List, Optional, Sequence

from ..core.rng import Rng
from ..core.types import FeatureMap, ManipulationType
from .background import generate_background
from .config import DataConfig
from .manipulations import apply_copy_move, apply_removal, apply_splice

logger = logging.getLogger(__name__)

MANIPULATION_TYPES = (ManipulationType.COPY_MOVE, ManipulationType.SPLICE, ManipulationType.REMOVAL)


@dataclass
class SampleBatch:
    """Aligned images, masks and manipulation types."""
    images: List[FeatureMap] = field(default_factory=list)
    masks: List[FeatureMap] = field(default_factory=list)
    manipulation_types: List[ManipulationType] = field(default_factory=list)
    names: List[str] = field(default_factory=list)   # mask path relative to the dataset dir, when loaded

    def __len__(self) -> int:
        return len(self.images)

    def append(self, image: FeatureMap, mask: FeatureMap, kind: ManipulationType, name: str = "") -> None:
        self.images.append(image)
        self.masks.append(mask)
        self.manipulation_types.append(kind)
        self.names.append(name)

    def extend(self, other: "SampleBatch") -> None:
        self.images.extend(other.images)
        self.masks.extend(other.masks)
        self.manipulation_types.extend(other.manipulation_types)
        self.names.extend(other.names)

    def subset(self, kind: ManipulationType) -> "SampleBatch":
        batch = SampleBatch()
        for image, mask, sample_kind, name in zip(self.images, self.masks, self.manipulation_types, self.names):
            if sample_kind is kind:
                batch.append(image, mask, sample_kind, name)
        return batch


def generate_sample(cfg: DataConfig, rng: Rng, kind: Optional[ManipulationType] = None):
    """
    One tampered sample.

    Args:
        cfg: Image side and region constraints
        rng: Stream dedicated to this sample
        kind: Forced manipulation type; uniform over the three if None

    Returns:
        (image, mask, kind)
    """
    if kind is None:
        kind = rng.choice(MANIPULATION_TYPES)
    size = cfg.image_side
    image = generate_background(rng.child(0), size)
    edit_rng = rng.child(1)
    limits = dict(min_fraction=cfg.min_fraction, max_fraction=cfg.max_fraction, max_attempts=cfg.max_attempts)
    if kind is ManipulationType.COPY_MOVE:
        image, mask = apply_copy_move(image, edit_rng, **limits)
    elif kind is ManipulationType.SPLICE:
        donor = generate_background(rng.child(2), size)
        image, mask = apply_splice(image, donor, edit_rng, **limits)
    else:
        image, mask = apply_removal(image, edit_rng, **limits)
    return image, mask, kind


def generate_samples(cfg: DataConfig, seed: int, count: int, start: int = 0) -> SampleBatch:
    """Samples start .. start+count-1 of the stream seeded by `seed`."""
    rng = Rng(seed)
    batch = SampleBatch()
    for index in range(start, start + count):
        batch.append(*generate_sample(cfg, rng.child(index)))
    return batch


def batch_source(cfg: DataConfig, rng: Rng, batch_size: int = 4) -> Iterator[SampleBatch]:
    """
    Infinite deterministic stream of batches.

    Batch b holds samples b·batch_size .. (b+1)·batch_size − 1 of the stream.
    """
    index = 0
    while True:
        batch = SampleBatch()
        for _ in range(batch_size):
            batch.append(*generate_sample(cfg, rng.child(index)))
            index += 1
        yield batch


def type_counts(kinds: Sequence[ManipulationType]) -> dict:
    return {kind.value: sum(1 for k in kinds if k is kind) for kind in MANIPULATION_TYPES}
