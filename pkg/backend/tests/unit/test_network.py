"""
Unit tests for the feature extractor and the end-to-end model.
"""

import numpy as np
import pytest

from lib.span_localization.core import ConfigError, FeatureMap, PositionMode, ShapeMismatchError
from lib.span_localization.network import (
    SRM_KERNELS,
    ExtractorParams,
    ModelConfig,
    SpanModel,
    extract_features,
    parameter_count,
    predict,
    project_constrained,
    srm_kernel_bank,
)
from lib.span_localization.numerics import Tape, check_gradients, ops
from lib.span_localization.training import bce_loss


class TestSrmFilters:
    """Fixed high-pass residual kernels."""

    def test_kernels_sum_to_zero(self):
        """Test 1: every SRM kernel is zero-sum."""
        for kernel in SRM_KERNELS:
            assert abs(kernel.sum()) < 1e-15

    def test_bank_layout(self):
        """Test 2: output channel 3k + c applies filter k to input channel c only."""
        bank = srm_kernel_bank()
        assert bank.shape == (5, 5, 3, 9)
        np.testing.assert_array_equal(bank[:, :, 1, 4], SRM_KERNELS[1])
        assert np.all(bank[:, :, 0, 4] == 0.0)

    def test_constant_image_gives_zero_response(self):
        """Test 3: zero response everywhere, borders included."""
        tape = Tape()
        image = tape.constant(np.full((8, 8, 3), 0.6))
        out = ops.conv2d(image, tape.constant(srm_kernel_bank()), padding=2, pad_mode="symmetric")
        np.testing.assert_allclose(out.value, 0.0, atol=1e-14)


class TestConstrainedConv:
    """Center −1, off-center weights summing to 1."""

    def test_projection_invariant(self, np_rng):
        """Test 1: any kernel is mapped onto the constraint set."""
        kernel = project_constrained(np_rng.uniform(-1.0, 1.0, size=(5, 5, 3, 3)) + 0.1)
        np.testing.assert_array_equal(kernel[2, 2], -1.0)
        off_center = kernel.sum(axis=(0, 1)) - kernel[2, 2]
        np.testing.assert_allclose(off_center, 1.0, atol=1e-9)

    def test_degenerate_slice_resets_to_uniform(self):
        """Test 2: a zero off-center sum falls back to 1/24 weights."""
        kernel = project_constrained(np.zeros((5, 5, 1, 1)))
        assert kernel[2, 2, 0, 0] == -1.0
        assert kernel[0, 0, 0, 0] == pytest.approx(1.0 / 24.0)

    def test_initialized_extractor_satisfies_constraint(self, rng):
        """Test 3: fresh weights already satisfy the constraint; SRM is fixed."""
        params = ExtractorParams.initialize(4, rng)
        kernel = params.constrained.values
        np.testing.assert_array_equal(kernel[2, 2], -1.0)
        np.testing.assert_allclose(kernel.sum(axis=(0, 1)) + 1.0, 1.0, atol=1e-9)
        assert params.srm.trainable is False


class TestExtractor:
    """Extractor forward pass."""

    def test_output_shape(self, rng, np_rng):
        """Test 1: H×W×3 -> H×W×D_feat."""
        params = ExtractorParams.initialize(5, rng)
        features = extract_features(np_rng.uniform(size=(9, 11, 3)), params)
        assert features.shape == (9, 11, 5)
        assert np.all(np.abs(features.values) < 1.0)

    def test_rejects_non_rgb(self, rng):
        """Test 2: exactly three input channels."""
        params = ExtractorParams.initialize(2, rng)
        with pytest.raises(ShapeMismatchError):
            extract_features(np.zeros((8, 8, 1)), params)


class TestModelConfig:
    """Model configuration validation."""

    def test_default_dilations_follow_layers(self):
        """Test 1: empty dilations become (2N+1)^(k−1)."""
        assert ModelConfig(layers=4).dilations == [1, 3, 9, 27]

    def test_feature_side_minimum(self):
        """Test 2: feature_side is 0 or at least 8."""
        with pytest.raises(ConfigError) as excinfo:
            ModelConfig(feature_side=4)
        assert excinfo.value.key == "feature_side"

    def test_mode_strings_are_parsed(self):
        """Test 3: enum values may be given as strings."""
        assert ModelConfig(position_mode="pe").position_mode is PositionMode.PE


class TestSpanModel:
    """End-to-end model."""

    def test_parameter_count(self, tiny_model):
        """Test 1: hand-computed count for D_feat = D = 4, h = 2, PP."""
        extractor = 5 * 5 * 3 * 3 + 3 * 3 * 15 * 4 + 4 + 3 * 3 * 4 * 4 + 4
        adapt = 4 * 4 + 4
        pyramid = 2 * (3 * 4 * 4 + 9 * 4 * 4)
        head = (3 * 3 * 4 * 4 + 4) * 2 + 4 + 1
        assert parameter_count(tiny_model) == extractor + adapt + pyramid + head == 1622
        assert parameter_count(tiny_model, include_fixed=True) == 1622 + 5 * 5 * 3 * 9

    def test_predict_range_and_shape(self, tiny_model, np_rng):
        """Test 2: H×W×1 probabilities strictly inside (0, 1)."""
        mask = tiny_model.predict(np_rng.uniform(size=(10, 12, 3)))
        assert mask.shape == (10, 12, 1)
        assert np.all((mask.values > 0.0) & (mask.values < 1.0))

    def test_predict_is_deterministic_and_pure(self, tiny_model, np_rng):
        """Test 3: repeated calls are bit-identical and leave weights untouched."""
        image = FeatureMap(np_rng.uniform(size=(8, 8, 3)))
        before = tiny_model.snapshot()
        first = predict(tiny_model, image).values
        second = predict(tiny_model, image).values
        assert np.array_equal(first, second)
        for name, values in tiny_model.snapshot().items():
            assert np.array_equal(values, before[name])

    def test_same_seed_same_model(self, tiny_model_config):
        """Test 4: initialization is seeded."""
        a = SpanModel.initialize(tiny_model_config)
        b = SpanModel.initialize(tiny_model_config)
        for name, tensor in a.named_parameters().items():
            assert np.array_equal(tensor.values, b.named_parameters()[name].values)
        c = SpanModel.initialize(tiny_model_config, seed=99)
        assert not np.array_equal(a.adapt.values, c.adapt.values)

    def test_small_image_rejected(self, tiny_model):
        """Test 5: images below 8×8 are a shape error."""
        with pytest.raises(ShapeMismatchError):
            tiny_model.predict(np.zeros((7, 12, 3)))

    def test_constant_model(self, constant_model, np_rng):
        """Test 6: zero output weights give exactly 0.5."""
        assert np.all(constant_model.predict(np_rng.uniform(size=(8, 8, 3))).values == 0.5)

    def test_feature_resize_keeps_output_size(self, np_rng):
        """Test 7: features resized to a fixed side, logits resized back."""
        model = SpanModel.initialize(ModelConfig(feature_depth=3, attention_depth=3, layers=1, feature_side=8))
        mask = model.predict(np_rng.uniform(size=(13, 10, 3)))
        assert mask.shape == (13, 10, 1)

    def test_end_to_end_gradients(self, tiny_model, np_rng):
        """Test 8: every learnable tensor on an 8×8×3 input within 1e-4 relative error."""
        image = np_rng.uniform(size=(8, 8, 3))
        mask = np.zeros((8, 8, 1))
        mask[2:5, 3:7] = 1.0
        # Non-zero biases so every parameter receives a gradient with structure
        for tensor in tiny_model.trainable_parameters():
            if tensor.name.endswith("bias"):
                tensor.assign(np_rng.normal(scale=0.1, size=tensor.shape))

        def build(tape):
            return bce_loss(tiny_model.forward(tape, tape.constant(image)), mask)

        errors = check_gradients(build, tiny_model.trainable_parameters())
        assert set(errors) == {p.name for p in tiny_model.trainable_parameters()}
        assert max(errors.values()) < 1e-4, errors

    def test_restore_snapshot(self, tiny_model, np_rng):
        """Test 9: snapshot / restore round trip."""
        state = tiny_model.snapshot()
        tiny_model.adapt.assign(np_rng.normal(size=tiny_model.adapt.shape))
        tiny_model.restore(state)
        assert np.array_equal(tiny_model.adapt.values, state["adapt"])

    def test_positional_modes_change_parameter_sets(self):
        """Test 10: PE stores embeddings, none stores only projections."""
        pe = SpanModel.initialize(ModelConfig(feature_depth=2, attention_depth=2, layers=1, position_mode="pe"))
        none = SpanModel.initialize(ModelConfig(feature_depth=2, attention_depth=2, layers=1, position_mode="none"))
        assert "pyramid.0.positional_embeds" in pe.named_parameters()
        assert parameter_count(pe) - parameter_count(none) == 9 * 2

    def test_large_output_bias_saturates(self, tiny_model, np_rng):
        """Test 11: head output bias 20 pushes every probability above 0.999."""
        tiny_model.named_parameters()["head.out_bias"].assign(np.array([20.0]))
        mask = tiny_model.predict(np_rng.uniform(size=(9, 11, 3)))
        assert np.all(mask.values > 0.999)
