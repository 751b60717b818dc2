"""
Synthetic data configuration.
"""

from dataclasses import dataclass

from ..core.errors import ConfigError

MIN_SIDE = 8
# Two non-overlapping copy-move regions need room inside the one-pixel margin
MIN_SAMPLE_SIDE = 10


@dataclass
class DataConfig:
    """
    Synthetic tampered-image generation.

    Train, validation and evaluation streams use disjoint seeds so no image
    is shared between them.
    """
    image_side: int = 32               # S
    train_seed: int = 1
    val_seed: int = 2
    eval_seed: int = 3
    eval_count: int = 50               # held-out samples for eval / ablate

    # Tampered area per sample, as a fraction of S²
    min_fraction: float = 0.02
    max_fraction: float = 0.5

    max_attempts: int = 100            # rejection-sampling tries per region

    def __post_init__(self):
        if self.image_side < MIN_SAMPLE_SIDE:
            raise ConfigError("image_side", f"must be >= {MIN_SAMPLE_SIDE}, got {self.image_side}")
        if not 0.0 < self.min_fraction <= self.max_fraction < 1.0:
            raise ConfigError(
                "min_fraction", f"need 0 < min_fraction <= max_fraction < 1, got {self.min_fraction}, {self.max_fraction}"
            )
        if self.max_attempts < 1:
            raise ConfigError("max_attempts", f"must be >= 1, got {self.max_attempts}")
        if self.eval_count < 0:
            raise ConfigError("eval_count", f"must be >= 0, got {self.eval_count}")
        if len({self.train_seed, self.val_seed, self.eval_seed}) != 3:
            raise ConfigError("train_seed", "train, val and eval seeds must be distinct")
