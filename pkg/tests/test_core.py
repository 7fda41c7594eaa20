"""Grid, domain type, and calibration transform contracts."""

import numpy as np
import pytest

from apexnet.core import (
    AxisCalibration,
    AxisScale,
    GroundTruthSet,
    IDENTITY_CALIBRATION,
    NormalizedCurve,
    PlotImage,
    PredictionSet,
    apply_calibration,
    make_sample_grid,
    normalize_linear,
    normalize_log,
    unnormalize_linear,
    unnormalize_log,
)


class TestSampleGrid:
    def test_default_grid_endpoints(self):
        grid = make_sample_grid(1024)
        assert grid.n_points == 1024
        assert grid.xs[0] == 0.0
        assert grid.xs[1023] == 1.0

    def test_two_points(self):
        assert make_sample_grid(2).xs.tolist() == [0.0, 1.0]

    def test_five_points(self):
        assert make_sample_grid(5).xs.tolist() == [0.0, 0.25, 0.5, 0.75, 1.0]

    @pytest.mark.parametrize("n", [2, 3, 7, 64, 1024, 4097])
    def test_equal_spacing(self, n):
        xs = make_sample_grid(n).xs
        diffs = np.diff(xs)
        assert np.all(np.abs(diffs - 1.0 / (n - 1)) <= 1e-12)
        assert np.all(diffs > 0)

    @pytest.mark.parametrize("n", [1, 0, -5])
    def test_too_few_points_rejected(self, n):
        with pytest.raises(ValueError):
            make_sample_grid(n)


class TestLinearTransform:
    def test_endpoints_and_midpoint(self):
        assert unnormalize_linear(0.0, 2.0, 4.0) == 2.0
        assert unnormalize_linear(1.0, 2.0, 4.0) == 4.0
        assert unnormalize_linear(0.5, 2.0, 4.0) == 3.0

    def test_bad_bounds_rejected(self):
        with pytest.raises(ValueError):
            unnormalize_linear(0.5, 4.0, 2.0)
        with pytest.raises(ValueError):
            unnormalize_linear(0.5, 4.0, 4.0)

    def test_round_trip(self):
        rng = np.random.default_rng(0)
        for _ in range(2000):
            lo, hi = np.sort(rng.uniform(-1e6, 1e6, size=2))
            if hi - lo < 1e-9:
                continue
            v = rng.random()
            assert abs(normalize_linear(unnormalize_linear(v, lo, hi), lo, hi) - v) <= 1e-9

    def test_strictly_increasing(self):
        rng = np.random.default_rng(1)
        for _ in range(500):
            lo, hi = np.sort(rng.uniform(-1e6, 1e6, size=2))
            if hi - lo < 1e-6:
                continue
            v1, v2 = np.sort(rng.random(2))
            if v1 == v2:
                continue
            assert unnormalize_linear(v1, lo, hi) < unnormalize_linear(v2, lo, hi)


class TestLogTransform:
    def test_endpoints_and_geometric_midpoint(self):
        assert unnormalize_log(0.0, 1.0, 100.0) == 1.0
        assert unnormalize_log(1.0, 1.0, 100.0) == 100.0
        assert abs(unnormalize_log(0.5, 1.0, 100.0) - 10.0) <= 1e-12

    def test_bad_bounds_rejected(self):
        for lo, hi in [(0.0, 1.0), (-1.0, 1.0), (2.0, 1.0), (1.0, 1.0), (1.0, -2.0)]:
            with pytest.raises(ValueError):
                unnormalize_log(0.5, lo, hi)

    def test_round_trip(self):
        rng = np.random.default_rng(2)
        for _ in range(2000):
            lo, hi = np.sort(10.0 ** rng.uniform(-6, 6, size=2))
            if hi / lo < 1.0 + 1e-9:
                continue
            v = rng.random()
            assert abs(normalize_log(unnormalize_log(v, lo, hi), lo, hi) - v) <= 1e-9

    def test_strictly_increasing(self):
        rng = np.random.default_rng(3)
        for _ in range(500):
            lo, hi = np.sort(10.0 ** rng.uniform(-6, 6, size=2))
            if hi / lo < 1.0 + 1e-6:
                continue
            v1, v2 = np.sort(rng.random(2))
            if v1 == v2:
                continue
            assert unnormalize_log(v1, lo, hi) < unnormalize_log(v2, lo, hi)


class TestApplyCalibration:
    def test_linear_map_of_constant(self):
        grid = make_sample_grid(1024)
        curve = NormalizedCurve(np.full(1024, 0.5))
        calib = AxisCalibration(0.0, 10.0, 0.0, 100.0)
        pairs = apply_calibration(curve, grid, calib)
        assert np.allclose(pairs[:, 0], 10.0 * grid.xs)
        assert np.all(pairs[:, 1] == 50.0)

    def test_identity_is_exact(self):
        grid = make_sample_grid(257)
        ys = np.random.default_rng(4).random(257)
        pairs = apply_calibration(NormalizedCurve(ys), grid, IDENTITY_CALIBRATION)
        assert np.array_equal(pairs[:, 0], grid.xs)
        assert np.array_equal(pairs[:, 1], ys)

    def test_log_log_calibration(self):
        # lo * (hi/lo)**v evaluated by hand: x = 10**(2*xs), y = 100 at v=0.5.
        grid = make_sample_grid(1024)
        curve = NormalizedCurve(np.full(1024, 0.5))
        calib = AxisCalibration(1.0, 100.0, 1.0, 10000.0, AxisScale.LOG, AxisScale.LOG)
        pairs = apply_calibration(curve, grid, calib)
        assert np.allclose(pairs[:, 0], 10.0 ** (2.0 * grid.xs), rtol=1e-12)
        assert np.allclose(pairs[:, 1], 100.0, rtol=1e-12)

    def test_length_mismatch_rejected(self):
        with pytest.raises(ValueError):
            apply_calibration(
                NormalizedCurve(np.zeros(100)), make_sample_grid(101), IDENTITY_CALIBRATION
            )


class TestDomainTypes:
    def test_calibration_validation(self):
        with pytest.raises(ValueError):
            AxisCalibration(1.0, 1.0, 0.0, 1.0)
        with pytest.raises(ValueError):
            AxisCalibration(0.0, 1.0, 2.0, 1.0)
        with pytest.raises(ValueError):
            AxisCalibration(0.0, 1.0, 0.0, 1.0, x_scale="log")
        with pytest.raises(ValueError):
            AxisCalibration(1.0, 2.0, -1.0, 1.0, y_scale="log")
        with pytest.raises(ValueError):
            AxisCalibration(0.0, np.inf, 0.0, 1.0)

    def test_curve_rejects_non_finite(self):
        with pytest.raises(ValueError):
            NormalizedCurve(np.array([0.1, np.nan, 0.3]))

    def test_prediction_set_clamps_numeric_noise(self):
        curves = np.full((10, 8), 0.5)
        curves[0, 0] = 1.0 + 1e-9
        curves[1, 0] = -1e-9
        scores = np.linspace(0, 1, 10)
        pred = PredictionSet(curves=curves, scores=scores)
        assert pred.curves[0, 0] == 1.0
        assert pred.curves[1, 0] == 0.0

    def test_prediction_set_rejects_gross_violations(self):
        with pytest.raises(ValueError):
            PredictionSet(curves=np.full((2, 4), 1.5), scores=np.array([0.5, 0.5]))
        with pytest.raises(ValueError):
            PredictionSet(curves=np.zeros((2, 4)), scores=np.array([0.5, -0.2]))

    def test_prediction_set_shape_checks(self):
        with pytest.raises(ValueError):
            PredictionSet(curves=np.zeros((3, 4)), scores=np.zeros(2))

    def test_ground_truth_bounds(self):
        GroundTruthSet(np.zeros((1, 16)))
        with pytest.raises(ValueError):
            GroundTruthSet(np.full((1, 16), 1.2))
        with pytest.raises(ValueError):
            GroundTruthSet(np.zeros((11, 16)))
        with pytest.raises(ValueError):
            GroundTruthSet(np.zeros((0, 16)))

    def test_plot_image_bounds(self):
        PlotImage(np.zeros((4, 5, 3)))
        with pytest.raises(ValueError):
            PlotImage(np.full((4, 5, 3), 1.5))
        with pytest.raises(ValueError):
            PlotImage(np.zeros((4, 5, 4)))

    def test_types_are_immutable(self):
        grid = make_sample_grid(16)
        with pytest.raises(ValueError):
            grid.xs[0] = 5.0
        pred = PredictionSet(curves=np.zeros((2, 4)), scores=np.zeros(2))
        with pytest.raises(ValueError):
            pred.scores[0] = 2.0
