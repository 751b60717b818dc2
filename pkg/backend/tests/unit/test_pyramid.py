"""
Unit tests for the attention pyramid and its analysis utilities.
"""

import numpy as np
import pytest

from lib.span_localization.attention import lsa_forward
from lib.span_localization.core import ConfigError, FusionMode, PositionMode, Rng, ShapeMismatchError
from lib.span_localization.numerics import ParamTensor, check_gradients, ops
from lib.span_localization.numerics.tape import Tape
from lib.span_localization.pyramid import (
    PyramidConfig,
    PyramidParams,
    complexity_estimate,
    complexity_table,
    default_dilations,
    pyramid_forward,
    pyramid_node,
    receptive_field,
    scale_list,
)
from tests.unit.test_attention import loop_lsa


def randomize(params, g, scale=1.0):
    """Replace every tensor with Gaussian values (positional identities included)."""
    for tensor in params.tensors():
        tensor.assign(g.normal(scale=scale, size=tensor.shape))


class TestPyramidConfig:
    """Dilation schedule and validation."""

    def test_default_dilations(self):
        """Test 1: 1, 3, 9, 27, 81 for five layers at N = 1."""
        assert PyramidConfig().dilations == [1, 3, 9, 27, 81]
        assert default_dilations(3, 2) == [1, 5, 25]

    def test_dilation_count_must_match_layers(self):
        """Test 2: one dilation per layer."""
        with pytest.raises(ConfigError) as excinfo:
            PyramidConfig(layers=3, dilations=[1, 3])
        assert excinfo.value.key == "dilations"

    def test_invalid_layers(self):
        """Test 3: h >= 1."""
        with pytest.raises(ConfigError):
            PyramidConfig(layers=0)

    def test_influence_radius(self):
        """Test 4: Σ N·t_k."""
        assert PyramidConfig(layers=3).influence_radius == 13
        assert PyramidConfig(layers=5).influence_radius == 121


class TestAnalysis:
    """Receptive field and block-size cost."""

    def test_receptive_field_five_levels(self):
        """Test 1: scales 3, 9, 27, 81, 243."""
        assert scale_list(5, 1) == [3, 9, 27, 81, 243]
        assert receptive_field(5, 1) == 243

    def test_single_level(self):
        """Test 2: h = 1 gives 3."""
        assert scale_list(1, 1) == [3]

    def test_receptive_field_errors(self):
        """Test 3: h < 1 and N < 0 rejected."""
        with pytest.raises(ConfigError):
            receptive_field(0, 1)
        with pytest.raises(ConfigError):
            receptive_field(2, -1)

    @pytest.mark.parametrize("side", [81, 243, 729])
    def test_complexity_minimum_at_three(self, side):
        """Test 4: S²M² log_M S is minimal at M = 3 over odd M in [3, 9]."""
        costs, best = complexity_table(side)
        assert best == 3
        assert set(costs) == {3, 5, 7, 9}
        assert all(costs[3] < costs[m] for m in (5, 7, 9))

    def test_complexity_value(self):
        """Test 5: S = M = 3 costs 81."""
        assert complexity_estimate(3, 3) == pytest.approx(81.0, rel=1e-12)

    def test_complexity_errors(self):
        """Test 6: M even, M < 3 or S < M rejected."""
        for side, block in ((81, 4), (81, 1), (5, 7)):
            with pytest.raises(ConfigError):
                complexity_estimate(side, block)


class TestPyramidForward:
    """Level-by-level propagation."""

    def test_residual_with_zero_values_is_identity(self, rng, np_rng):
        """Test 1: M^v = 0 on every level makes the residual pyramid the identity."""
        cfg = PyramidConfig(layers=3)
        params = PyramidParams.initialize(3, cfg, rng)
        randomize(params, np_rng)
        for layer in params.per_layer:
            layer.value_proj.assign(np.zeros((3, 3)))
        x = np_rng.normal(size=(7, 6, 3))
        assert np.array_equal(pyramid_forward(x, params, cfg).values, x)

    def test_no_fusion_differs_from_residual(self, rng, np_rng):
        """Test 2: fusion mode changes the result."""
        residual = PyramidConfig(layers=2, fusion=FusionMode.RESIDUAL)
        plain = PyramidConfig(layers=2, fusion=FusionMode.NONE)
        params = PyramidParams.initialize(2, residual, rng)
        x = np_rng.normal(size=(5, 5, 2))
        assert not np.allclose(pyramid_forward(x, params, residual).values, pyramid_forward(x, params, plain).values)

    def test_layer_count_mismatch(self, rng):
        """Test 3: parameter sets must match the configured layer count."""
        params = PyramidParams.initialize(2, PyramidConfig(layers=2), rng)
        with pytest.raises(ConfigError):
            pyramid_forward(np.zeros((4, 4, 2)), params, PyramidConfig(layers=3))

    def test_depth_mismatch(self, rng):
        """Test 4: input depth must equal D."""
        cfg = PyramidConfig(layers=1)
        params = PyramidParams.initialize(2, cfg, rng)
        with pytest.raises(ShapeMismatchError):
            pyramid_forward(np.zeros((4, 4, 3)), params, cfg)

    @pytest.mark.parametrize("mode", [PositionMode.PP, PositionMode.PE, PositionMode.NONE])
    def test_gradients(self, mode, np_rng):
        """Test 5: the stacked pyramid passes finite-difference checks."""
        cfg = PyramidConfig(layers=2, dilations=[1, 2], position_mode=mode)
        params = PyramidParams.initialize(2, cfg, Rng(3))
        randomize(params, np_rng, scale=0.5)
        x = ParamTensor("x", np_rng.normal(size=(4, 4, 2)))
        upstream = np_rng.normal(size=(4, 4, 2))

        def build(tape):
            out = pyramid_node(tape.param(x), params, cfg)
            return ops.sum_all(ops.mul(out, tape.constant(upstream)))

        errors = check_gradients(build, [x] + params.tensors())
        assert max(errors.values()) < 1e-5, errors

    def test_plain_fusion_is_two_blocks(self, np_rng):
        """Test 6: h=2 without fusion equals lsa_forward applied twice."""
        cfg = PyramidConfig(layers=2, dilations=[1, 2], fusion=FusionMode.NONE)
        params = PyramidParams.initialize(3, cfg, Rng(8))
        randomize(params, np_rng, scale=0.5)
        x = np_rng.normal(size=(6, 7, 3))
        first = lsa_forward(x, params.per_layer[0], cfg.neighborhood(0), cfg.position_mode)
        second = lsa_forward(first, params.per_layer[1], cfg.neighborhood(1), cfg.position_mode)
        np.testing.assert_allclose(pyramid_forward(x, params, cfg).values, second.values, atol=1e-12, rtol=0)

    @pytest.mark.parametrize("mode", [PositionMode.PP, PositionMode.PE, PositionMode.NONE])
    def test_matches_composed_loop_oracle(self, mode):
        """Test 7: h=3, dilations 1, 3, 9, residual: x_k = LSA(x_{k-1}) + x_{k-1} per pixel within 1e-9."""
        cfg = PyramidConfig(layers=3, dilations=[1, 3, 9], position_mode=mode)
        g = np.random.default_rng(31)
        params = PyramidParams.initialize(2, cfg, Rng(31))
        randomize(params, g, scale=0.5)
        x = g.normal(size=(11, 12, 2))
        expected = x
        for level, layer in enumerate(params.per_layer):
            expected = loop_lsa(expected, layer, cfg.neighborhood(level), mode) + expected
        np.testing.assert_allclose(pyramid_forward(x, params, cfg).values, expected, atol=1e-9, rtol=0)


class TestLocality:
    """A pixel influences outputs exactly within the summed dilation reach."""

    def _influence(self, params, cfg, x, pixel):
        base = pyramid_forward(x, params, cfg).values
        perturbed = x.copy()
        perturbed[pixel] += 1.0
        changed = np.any(pyramid_forward(perturbed, params, cfg).values != base, axis=-1)
        rows, cols = np.indices(changed.shape)
        distance = np.maximum(np.abs(rows - pixel[0]), np.abs(cols - pixel[1]))
        return changed, distance

    def test_three_levels_reach_thirteen(self):
        """Test 1: h=3, dilations 1, 3, 9 on 10 random models: radius 13 exactly."""
        cfg = PyramidConfig(layers=3, dilations=[1, 3, 9])
        for seed in range(10):
            g = np.random.default_rng(seed)
            params = PyramidParams.initialize(2, cfg, Rng(seed))
            randomize(params, g, scale=0.5)
            x = g.normal(size=(29, 29, 2))
            changed, distance = self._influence(params, cfg, x, (14, 14))
            assert not np.any(changed[distance > 13])
            assert np.any(changed[distance == 13])

    def test_five_levels_reach(self):
        """Test 2: h=5 at N=1 reaches 1+3+9+27+81 = 121 columns on a thin image."""
        cfg = PyramidConfig(layers=5)
        g = np.random.default_rng(11)
        params = PyramidParams.initialize(1, cfg, Rng(11))
        randomize(params, g, scale=0.3)
        x = g.normal(size=(1, 130, 1))
        changed, distance = self._influence(params, cfg, x, (0, 0))
        assert not np.any(changed[distance > 121])
        assert changed[0, 121]


class TestTapeReuse:
    """Pyramid nodes share parameter leaves."""

    def test_parameters_appear_once(self, rng):
        """Test 1: each tensor is bound to a single leaf on the tape."""
        cfg = PyramidConfig(layers=2)
        params = PyramidParams.initialize(2, cfg, rng)
        tape = Tape()
        pyramid_node(tape.constant(np.zeros((3, 3, 2))), params, cfg)
        leaves = [n for n in tape.nodes if n.param is not None]
        assert len(leaves) == len(params.tensors())
