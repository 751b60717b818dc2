"""
Training: BCE loss, Adam, plateau schedule and the validation-driven fit loop.
"""

from .config import TrainConfig
from .history import EpochRecord, format_record, read_history, write_history
from .loss import bce_loss, bce_value
from .optimizer import OptimizerState, adam_step
from .schedule import PlateauSchedule, ScheduleDecision
from .trainer import FitResult, Trainer, fit, sample_gradient

__all__ = [
    "TrainConfig",
    # Loss / optimizer
    "bce_loss",
    "bce_value",
    "OptimizerState",
    "adam_step",
    # Schedule
    "PlateauSchedule",
    "ScheduleDecision",
    # Fit loop
    "Trainer",
    "FitResult",
    "fit",
    "sample_gradient",
    # History file
    "EpochRecord",
    "format_record",
    "write_history",
    "read_history",
]
