"""
Validation-driven learning-rate halving and early stopping.
"""

import logging
from dataclasses import dataclass
from typing import Optional

logger = logging.getLogger(__name__)


@dataclass
class ScheduleDecision:
    """Outcome of feeding one epoch's validation loss to the schedule."""
    epoch: int
    improved: bool          # strictly below the best seen so far
    halved: bool            # lr halved for the following epoch
    stop: bool              # training ends after this epoch
    lr: float               # rate for the following epoch
    epochs_since_best: int


class PlateauSchedule:
    """
    Best-so-far plateau rule.

    A counter tracks epochs since the last strictly lower validation loss
    (the first epoch always sets the best). Every time the counter reaches a
    multiple of `lr_patience` the rate is halved, floored at `lr_floor`; when
    it reaches `stop_patience` training stops instead.

    Example:
        schedule = PlateauSchedule(1e-4, 1e-7, lr_patience=10, stop_patience=30)
        for epoch in range(100):
            decision = schedule.update(epoch, val_loss=1.0)
            if decision.stop:
                break           # epoch == 30; halvings happened at 10 and 20
    """

    def __init__(self, initial_lr: float, lr_floor: float, lr_patience: int, stop_patience: int):
        self.lr = initial_lr
        self.lr_floor = lr_floor
        self.lr_patience = lr_patience
        self.stop_patience = stop_patience
        self.best: Optional[float] = None
        self.best_epoch: Optional[int] = None
        self.epochs_since_best = 0

    def update(self, epoch: int, val_loss: float) -> ScheduleDecision:
        improved = self.best is None or val_loss < self.best
        halved = False
        stop = False
        if improved:
            self.best = val_loss
            self.best_epoch = epoch
            self.epochs_since_best = 0
        else:
            self.epochs_since_best += 1
            if self.epochs_since_best >= self.stop_patience:
                stop = True
                logger.info(f"Early stop at epoch {epoch}: no improvement for {self.epochs_since_best} epochs")
            elif self.epochs_since_best % self.lr_patience == 0:
                halved = self._halve(epoch)
        return ScheduleDecision(
            epoch=epoch,
            improved=improved,
            halved=halved,
            stop=stop,
            lr=self.lr,
            epochs_since_best=self.epochs_since_best,
        )

    def _halve(self, epoch: int) -> bool:
        if self.lr <= self.lr_floor:
            logger.warning(f"⚠️ Learning rate already at floor {self.lr_floor:.1e} (epoch {epoch})")
            return False
        self.lr = max(self.lr / 2.0, self.lr_floor)
        logger.info(f"Epoch {epoch}: learning rate halved to {self.lr:.6e}")
        if self.lr == self.lr_floor:
            logger.warning(f"⚠️ Learning rate reached floor {self.lr_floor:.1e}")
        return True
