"""
Fit loop with validation-driven model selection.

Each training step runs forward/backward for every sample of the batch on
its own tape (in parallel when SPAN_THREADS allows), averages loss and
gradients in sample order, applies one Adam update and re-projects the
constrained kernel. After every epoch the fixed validation set is scored,
the plateau schedule decides on halving / stopping and the best weights
so far are kept.
"""

import itertools
import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Dict, Iterable, Iterator, List, Optional, Tuple, Union

import numpy as np

from ..core.errors import ConfigError, NonFiniteError
from ..core.parallel import map_ordered
from ..core.types import FeatureMap
from ..datagen.source import SampleBatch
from ..metrics.evaluation import predict_all
from ..metrics.scores import prf1
from ..network.model import SpanModel
from ..numerics.tape import Tape
from .config import TrainConfig
from .history import EpochRecord, write_history
from .loss import bce_loss, bce_value
from .optimizer import OptimizerState, adam_step
from .schedule import PlateauSchedule

logger = logging.getLogger(__name__)


@dataclass
class FitResult:
    model: SpanModel              # holds the best-validation weights
    history: List[EpochRecord]
    best_epoch: int
    best_val_loss: float


def sample_gradient(model: SpanModel, image: FeatureMap, mask: FeatureMap) -> Tuple[float, Dict[str, np.ndarray]]:
    """BCE of one sample and its gradient w.r.t. every trainable tensor."""
    tape = Tape()
    probs = model.forward(tape, tape.constant(image.values))
    loss = bce_loss(probs, mask)
    grads = tape.backward(loss, accumulate=False)
    logger.debug(f"Sample backward over {len(tape)} recorded nodes, loss {float(loss.value):.6f}")
    return float(loss.value), grads


class Trainer:
    """
    Owns the optimizer state and schedule for one model.

    Example:
        trainer = Trainer(model, TrainConfig(max_epochs=5))
        result = trainer.fit(batch_source(data_cfg, Rng(1), 4), val_batches)
    """

    def __init__(self, model: SpanModel, config: TrainConfig, threads: Optional[int] = None):
        self.model = model
        self.config = config
        self.threads = threads
        self.state = OptimizerState(
            lr=config.initial_lr, beta1=config.beta1, beta2=config.beta2, eps=config.eps
        )
        self.schedule = PlateauSchedule(
            initial_lr=config.initial_lr,
            lr_floor=config.lr_floor,
            lr_patience=config.lr_patience,
            stop_patience=config.stop_patience,
        )

    def train_step(self, batch: SampleBatch) -> float:
        """
        One optimizer update on a batch.

        Returns:
            Mean batch loss before the update

        Raises:
            NonFiniteError: If the loss or a gradient is not finite
        """
        if not len(batch):
            raise ConfigError("batch_size", "training batch is empty")
        results = map_ordered(
            lambda i: sample_gradient(self.model, batch.images[i], batch.masks[i]),
            range(len(batch)),
            self.threads,
        )
        count = len(results)
        loss = sum(sample_loss for sample_loss, _ in results) / count
        if not np.isfinite(loss):
            raise NonFiniteError("training loss")

        grads: Dict[str, np.ndarray] = {}
        for _, sample_grads in results:
            for name, grad in sample_grads.items():
                grads[name] = grads[name] + grad if name in grads else grad.copy()
        grads = {name: grad / count for name, grad in grads.items()}

        self.state.lr = self.schedule.lr
        adam_step(self.model.trainable_parameters(), grads, self.state)
        self.model.project_constraints()
        return loss

    def validate(self, samples: SampleBatch) -> Tuple[float, float, float, float]:
        """
        Returns:
            (mean BCE, precision, recall, F1) at the configured threshold
        """
        preds = predict_all(self.model.predict, samples.images, self.threads)
        loss = float(np.mean([bce_value(p, m) for p, m in zip(preds, samples.masks)]))
        if not np.isfinite(loss):
            raise NonFiniteError("validation loss")
        precision, recall, f1 = prf1(preds, samples.masks, self.config.threshold)
        return loss, precision, recall, f1

    def _collect_validation(self, val_source: Union[SampleBatch, Iterable[SampleBatch]]) -> SampleBatch:
        if isinstance(val_source, SampleBatch):
            samples = val_source
        else:
            samples = SampleBatch()
            for batch in itertools.islice(val_source, self.config.val_batches):
                samples.extend(batch)
        if not len(samples):
            raise ConfigError("val_source", "validation source yielded no samples")
        return samples

    def fit(
        self,
        train_source: Iterator[SampleBatch],
        val_source: Union[SampleBatch, Iterable[SampleBatch]],
        history_path: Optional[Union[str, Path]] = None,
    ) -> FitResult:
        """
        Train until the schedule stops or max_epochs is reached.

        Args:
            train_source: Deterministic stream of training batches
            val_source: Fixed validation samples, or a stream from which
                `val_batches` batches are drawn once
            history_path: Rewritten after every epoch when given

        Returns:
            FitResult with the best-validation weights restored into the model
        """
        cfg = self.config
        validation = self._collect_validation(val_source)
        train_source = iter(train_source)
        history: List[EpochRecord] = []
        best_state = self.model.snapshot()
        logger.info(
            f"Training {cfg.max_epochs} epoch(s) × {cfg.steps_per_epoch} step(s), "
            f"{len(validation)} validation samples"
        )

        for epoch in range(cfg.max_epochs):
            lr = self.schedule.lr
            losses = []
            for step in range(cfg.steps_per_epoch):
                batch = next(train_source, None)
                if batch is None:
                    raise ConfigError("train_source", f"training source exhausted at epoch {epoch}, step {step}")
                losses.append(self.train_step(batch))
                logger.debug(f"epoch {epoch} step {step}: loss {losses[-1]:.6f}")
            train_loss = float(np.mean(losses))

            val_loss, precision, recall, f1 = self.validate(validation)
            decision = self.schedule.update(epoch, val_loss)
            if decision.improved:
                best_state = self.model.snapshot()
            stopped = decision.stop or epoch + 1 == cfg.max_epochs
            history.append(EpochRecord(
                epoch=epoch,
                lr=lr,
                train_loss=train_loss,
                val_loss=val_loss,
                val_precision=precision,
                val_recall=recall,
                val_f1=f1,
                improved=decision.improved,
                halved=decision.halved,
                stopped=stopped,
            ))
            if history_path is not None:
                write_history(history_path, history)
            logger.info(
                f"Epoch {epoch}: lr {lr:.2e} train {train_loss:.5f} val {val_loss:.5f} "
                f"P {precision:.3f} R {recall:.3f} F1 {f1:.3f}{' *' if decision.improved else ''}"
            )
            if stopped:
                break

        self.model.restore(best_state)
        best_epoch = self.schedule.best_epoch
        logger.info(f"✅ Training finished after {len(history)} epoch(s); best epoch {best_epoch}")
        return FitResult(
            model=self.model,
            history=history,
            best_epoch=best_epoch,
            best_val_loss=self.schedule.best,
        )


def fit(
    model: SpanModel,
    train_source: Iterator[SampleBatch],
    val_source: Union[SampleBatch, Iterable[SampleBatch]],
    config: TrainConfig,
    history_path: Optional[Union[str, Path]] = None,
    threads: Optional[int] = None,
) -> FitResult:
    return Trainer(model, config, threads).fit(train_source, val_source, history_path)
