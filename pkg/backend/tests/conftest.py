"""
Pytest fixtures shared by unit and e2e tests.

Provides:
- backend/ on sys.path (so `lib.` and `app.` imports resolve)
- Tiny model / train / data configs
- A written sample dataset
- A constant-0.5 model
"""

import sys
from pathlib import Path

import numpy as np
import pytest

BACKEND_DIR = Path(__file__).parent.parent
if str(BACKEND_DIR) not in sys.path:
    sys.path.insert(0, str(BACKEND_DIR))

from lib.span_localization.core import Rng  # noqa: E402
from lib.span_localization.datagen import DataConfig, dump_dataset  # noqa: E402
from lib.span_localization.network import ModelConfig, SpanModel  # noqa: E402
from lib.span_localization.training import TrainConfig  # noqa: E402


@pytest.fixture
def rng():
    return Rng(1234)


@pytest.fixture
def np_rng():
    """numpy generator for building random test inputs."""
    return np.random.default_rng(20240501)


@pytest.fixture
def tiny_model_config():
    """8×8-friendly model: D_feat = D = 4, two pyramid levels."""
    return ModelConfig(feature_depth=4, attention_depth=4, layers=2, radius=1, seed=7)


@pytest.fixture
def tiny_model(tiny_model_config):
    return SpanModel.initialize(tiny_model_config)


@pytest.fixture
def constant_model(tiny_model):
    """Predicts exactly 0.5 everywhere: output conv weights and bias are zero."""
    params = tiny_model.named_parameters()
    params["head.out"].assign(np.zeros(params["head.out"].shape))
    params["head.out_bias"].assign(np.zeros(params["head.out_bias"].shape))
    return tiny_model


@pytest.fixture
def small_data_config():
    return DataConfig(image_side=16, eval_count=4)


@pytest.fixture
def tiny_train_config():
    return TrainConfig(batch_size=2, steps_per_epoch=2, max_epochs=2, val_batches=1, initial_lr=1e-3)


@pytest.fixture
def dataset_dir(tmp_path, small_data_config):
    """Five generated samples written in the dataset layout."""
    out_dir = tmp_path / "dataset"
    dump_dataset(small_data_config, out_dir, 5, seed=small_data_config.eval_seed)
    return out_dir


@pytest.fixture
def run_config_file(tmp_path):
    """Smallest config the CLI trains in a few seconds."""
    path = tmp_path / "tiny.conf"
    path.write_text(
        "# tiny run\n"
        "model.feature_depth = 4\n"
        "model.attention_depth = 4\n"
        "model.layers = 2\n"
        "train.batch_size = 2\n"
        "train.steps_per_epoch = 2\n"
        "train.max_epochs = 1\n"
        "train.val_batches = 1\n"
        "train.initial_lr = 0.001\n"
        "data.image_side = 12\n"
        "data.eval_count = 3\n"
        "eval.transforms = identity, blur:3\n",
        encoding="utf-8",
    )
    return path
