"""
E2E toy-scale learning run.

Trains the default desk-scale model (S = 32, D_feat = D = 8, three levels with
dilations 1, 3, 9, residual fusion, positional projection) for 2000 steps on
generated copy-move / splice / removal data, then checks that learning
happened and that the robustness battery behaves.

Slow: run with `pytest -m slow`.
"""

import numpy as np
import pytest

from lib.span_localization.core import Rng
from lib.span_localization.datagen import DataConfig, batch_source, generate_samples
from lib.span_localization.metrics import EvalConfig, evaluate, parse_transforms, robustness_suite
from lib.span_localization.network import ModelConfig, SpanModel
from lib.span_localization.training import TrainConfig, Trainer, bce_value

pytestmark = pytest.mark.slow

DATA = DataConfig(image_side=32)
MODEL = ModelConfig(feature_depth=8, attention_depth=8, layers=3, dilations=[1, 3, 9])
TRAIN = TrainConfig(batch_size=4, steps_per_epoch=25, max_epochs=80, val_batches=2, initial_lr=1e-3)


@pytest.fixture(scope="module")
def trained():
    """(model, initial train loss, fit result), shared by every test in the module."""
    model = SpanModel.initialize(MODEL)
    train_rng = Rng(DATA.train_seed).child(TRAIN.seed)
    first = next(batch_source(DATA, train_rng, TRAIN.batch_size))
    initial = float(np.mean([bce_value(model.predict(i), m) for i, m in zip(first.images, first.masks)]))

    validation = generate_samples(DATA, DATA.val_seed, TRAIN.val_batches * TRAIN.batch_size)
    result = Trainer(model, TRAIN).fit(batch_source(DATA, train_rng, TRAIN.batch_size), validation)
    print(f"Initial loss {initial:.4f}, {len(result.history)} epochs, best epoch {result.best_epoch}")
    return model, initial, result


@pytest.fixture(scope="module")
def held_out():
    return generate_samples(DATA, DATA.eval_seed, DATA.eval_count)


class TestToyLearning:
    """Learning happened at toy scale."""

    def test_train_loss_halves(self, trained):
        """Test 1: final train loss below half the untrained loss."""
        _, initial, result = trained
        final = result.history[-1].train_loss
        print(f"Train loss {initial:.4f} -> {final:.4f}")
        assert final < 0.5 * initial

    def test_held_out_scores(self, trained, held_out):
        """Test 2: pooled pixel AUC >= 0.75 and F1@0.5 >= 0.30 on 50 held-out samples."""
        model, _, _ = trained
        report = evaluate(model.predict, held_out, EvalConfig())
        print(f"✅ AUC {report.pixel_auc:.4f}, F1 {report.f1:.4f}")
        assert report.pixel_auc >= 0.75
        assert report.f1 >= 0.30

    def test_robustness_ordering(self, trained, held_out):
        """Test 3: heavier noise and downscaling do not help beyond 0.05 AUC."""
        model, _, _ = trained
        transforms = parse_transforms(["identity", "noise:3", "noise:15", "resize:0.25"])
        rows = {row.transform: row.pixel_auc for row in robustness_suite(model.predict, held_out, transforms)}
        print(f"Robustness: {rows}")
        assert rows["noise:15"] <= rows["noise:3"] + 0.05
        assert rows["resize:0.25"] <= rows["identity"] + 0.05

    def test_predicted_mask_overlaps_truth(self, trained, held_out):
        """Test 4: thresholded prediction intersects the tampered region on some sample."""
        model, _, _ = trained
        overlaps = []
        for image, mask in zip(held_out.images[:10], held_out.masks[:10]):
            predicted = model.predict(image).values >= 0.5
            overlaps.append(np.sum(predicted & (mask.values == 1.0)))
        assert max(overlaps) > 0
