"""
Training configuration.
"""

from dataclasses import dataclass

from ..core.errors import ConfigError


@dataclass
class TrainConfig:
    """
    Optimization budget and the validation-driven schedule.

    The schedule halves the learning rate every `lr_patience` epochs without
    a new best validation loss (never below `lr_floor`) and stops after
    `stop_patience` such epochs.
    """
    # Budget
    batch_size: int = 4
    steps_per_epoch: int = 25
    max_epochs: int = 100
    val_batches: int = 2               # validation batches drawn once, reused every epoch

    # Adam
    initial_lr: float = 1e-4
    beta1: float = 0.9
    beta2: float = 0.999
    eps: float = 1e-8

    # Schedule
    lr_floor: float = 1e-7
    lr_patience: int = 10              # epochs without improvement per halving
    stop_patience: int = 30            # epochs without improvement before stopping

    # Validation
    threshold: float = 0.5             # binarization threshold for P / R / F1

    seed: int = 0

    def __post_init__(self):
        for key in ("batch_size", "steps_per_epoch", "max_epochs", "val_batches", "lr_patience", "stop_patience"):
            value = getattr(self, key)
            if value < 1:
                raise ConfigError(key, f"must be >= 1, got {value}")
        if not self.lr_floor > 0:
            raise ConfigError("lr_floor", f"must be > 0, got {self.lr_floor}")
        if not self.initial_lr > self.lr_floor:
            raise ConfigError("initial_lr", f"must exceed lr_floor {self.lr_floor}, got {self.initial_lr}")
        if self.stop_patience < self.lr_patience:
            raise ConfigError("stop_patience", f"must be >= lr_patience {self.lr_patience}, got {self.stop_patience}")
        if not (0.0 <= self.beta1 < 1.0 and 0.0 <= self.beta2 < 1.0):
            raise ConfigError("beta1", f"betas must lie in [0, 1), got {self.beta1}, {self.beta2}")
        if not self.eps > 0:
            raise ConfigError("eps", f"must be > 0, got {self.eps}")
        if not 0.0 < self.threshold < 1.0:
            raise ConfigError("threshold", f"must lie in (0, 1), got {self.threshold}")
