"""Confidence filtering and calibrated CSV export tests."""

import numpy as np
import pytest

from apexnet.core import AxisCalibration, IDENTITY_CALIBRATION, PredictionSet, make_sample_grid
from apexnet.errors import InputError
from apexnet.extraction import (
    ExtractionResult,
    SCORE_THRESHOLD,
    export_csv,
    extract,
    filter_predictions,
    load_image_file,
)


def pred_with_scores(scores, n_points=16, seed=0):
    scores = np.asarray(scores, dtype=np.float64)
    curves = np.random.default_rng(seed).random((len(scores), n_points))
    return PredictionSet(curves=curves, scores=scores)


class TestFilterPredictions:
    def test_keeps_confident_slots_in_descending_order(self):
        # Slots 0 and 2 clear the threshold; slot 0 scores higher.
        scores = [0.9, 0.2, 0.6, 0.1, 0.3, 0.4, 0.45, 0.05, 0.12, 0.33]
        result = filter_predictions(pred_with_scores(scores))
        assert result.indices == (0, 2)
        assert result.scores.tolist() == [0.9, 0.6]
        assert len(result) == 2

    def test_sorting_not_slot_order(self):
        scores = [0.55, 0.95, 0.7]
        result = filter_predictions(pred_with_scores(scores))
        assert result.indices == (1, 2, 0)
        assert np.all(np.diff(result.scores) <= 0)

    def test_threshold_is_strict(self):
        result = filter_predictions(pred_with_scores([0.5, 0.5 + 1e-9, 0.4]))
        assert result.indices == (1,)
        assert SCORE_THRESHOLD == 0.5

    def test_equal_scores_keep_slot_order(self):
        result = filter_predictions(pred_with_scores([0.8, 0.9, 0.8, 0.8]))
        assert result.indices == (1, 0, 2, 3)

    def test_curves_travel_with_their_scores(self):
        pred = pred_with_scores([0.6, 0.9, 0.1], seed=3)
        result = filter_predictions(pred)
        assert np.array_equal(result.curves[0], pred.curves[1])
        assert np.array_equal(result.curves[1], pred.curves[0])

    def test_none_kept(self):
        result = filter_predictions(pred_with_scores([0.1, 0.4, 0.5]))
        assert result.indices == ()
        assert result.curves.shape == (0, 16)

    def test_custom_threshold(self):
        result = filter_predictions(pred_with_scores([0.1, 0.4, 0.5]), threshold=0.05)
        assert len(result) == 3


class TestExtract:
    def test_end_to_end_from_files(self, tiny_corpus, scored_checkpoint):
        entry = tiny_corpus.entries[0]
        result = extract(tiny_corpus.root / entry.image, scored_checkpoint)
        # The fixture checkpoint's pinned score biases keep all ten slots,
        # already in descending-score order.
        assert result.indices == tuple(range(10))
        assert result.curves.shape == (10, 1024)
        assert np.all(np.diff(result.scores) < 0)

    def test_accepts_loaded_model_and_array(self, tiny_corpus, scored_checkpoint):
        from apexnet.model import load_checkpoint

        entry = tiny_corpus.entries[0]
        image = load_image_file(tiny_corpus.root / entry.image)
        model = load_checkpoint(scored_checkpoint)
        a = extract(tiny_corpus.root / entry.image, scored_checkpoint)
        b = extract(image, model)
        assert np.array_equal(a.curves, b.curves)
        assert np.array_equal(a.scores, b.scores)

    def test_extract_is_idempotent(self, tiny_corpus, scored_checkpoint):
        entry = tiny_corpus.entries[1]
        a = extract(tiny_corpus.root / entry.image, scored_checkpoint)
        b = extract(tiny_corpus.root / entry.image, scored_checkpoint)
        assert np.array_equal(a.curves, b.curves)
        assert np.array_equal(a.scores, b.scores)

    def test_unreadable_image_raises_input_error(self, tmp_path, scored_checkpoint):
        bad = tmp_path / "bad.png"
        bad.write_bytes(b"\x00\x01 not an image")
        with pytest.raises(InputError):
            extract(bad, scored_checkpoint)


class TestExportCsv:
    def test_identity_calibration_five_points(self):
        grid = make_sample_grid(5)
        curves = np.array([[0.0, 0.25, 0.5, 0.75, 1.0]])
        text = export_csv(curves, IDENTITY_CALIBRATION, grid)
        assert text == (
            "x,y_1\n"
            "0,0\n"
            "0.25,0.25\n"
            "0.5,0.5\n"
            "0.75,0.75\n"
            "1,1\n"
        )

    def test_linear_calibration_maps_values(self):
        grid = make_sample_grid(3)
        curves = np.array([[0.0, 0.5, 1.0], [1.0, 1.0, 1.0]])
        calib = AxisCalibration(0.0, 10.0, 100.0, 200.0)
        text = export_csv(curves, calib, grid)
        assert text == (
            "x,y_1,y_2\n"
            "0,100,200\n"
            "5,150,200\n"
            "10,200,200\n"
        )

    def test_log_axis_geometric_midpoint(self):
        # On a log y-axis from 1 to 100, the normalized value 0.5 must land
        # on the geometric midpoint 10, not the arithmetic 50.5.
        grid = make_sample_grid(5)
        curves = np.array([[0.0, 0.25, 0.5, 0.75, 1.0]])
        calib = AxisCalibration(0.0, 1.0, 1.0, 100.0, y_scale="log")
        lines = export_csv(curves, calib, grid).splitlines()
        assert lines[3] == "0.5,10"
        assert lines[1] == "0,1"
        assert lines[5] == "1,100"

    def test_default_grid_row_count_and_endings(self):
        curves = np.random.default_rng(5).random((3, 1024))
        text = export_csv(curves, IDENTITY_CALIBRATION)
        assert text.endswith("\n") and not text.endswith("\n\n")
        assert "\r" not in text
        lines = text.split("\n")
        assert lines[-1] == ""  # single trailing newline
        assert len(lines) == 1 + 1024 + 1
        assert lines[0] == "x,y_1,y_2,y_3"
        assert all(line.count(",") == 3 for line in lines[1:-1])

    def test_nine_significant_digits(self):
        grid = make_sample_grid(2)
        curves = np.array([[1.0 / 3.0, 2.0 / 3.0]])
        calib = AxisCalibration(0.0, 1.0, 0.0, 1.0)
        lines = export_csv(curves, calib, grid).splitlines()
        assert lines[1] == "0,0.333333333"
        assert lines[2] == "1,0.666666667"

    def test_values_round_trip_through_text(self):
        rng = np.random.default_rng(6)
        grid = make_sample_grid(64)
        curves = rng.random((4, 64))
        calib = AxisCalibration(-3.0, 7.0, 0.5, 1200.0)
        lines = export_csv(curves, calib, grid).splitlines()
        parsed = np.array([[float(v) for v in line.split(",")] for line in lines[1:]])
        want_x = -3.0 + 10.0 * grid.xs
        want_y = 0.5 + 1199.5 * curves
        assert np.allclose(parsed[:, 0], want_x, rtol=1e-8, atol=1e-8)
        assert np.allclose(parsed[:, 1:].T, want_y, rtol=1e-8, atol=1e-8)

    def test_accepts_extraction_result(self):
        grid = make_sample_grid(8)
        result = ExtractionResult(
            curves=np.full((2, 8), 0.5), scores=np.array([0.9, 0.8]), indices=(0, 1)
        )
        text = export_csv(result, IDENTITY_CALIBRATION, grid)
        assert text.startswith("x,y_1,y_2\n")

    def test_empty_requires_opt_in(self):
        grid = make_sample_grid(4)
        with pytest.raises(ValueError):
            export_csv(np.zeros((0, 4)), IDENTITY_CALIBRATION, grid)
        text = export_csv(np.zeros((0, 4)), IDENTITY_CALIBRATION, grid, allow_empty=True)
        assert text == "x\n0\n0.333333333\n0.666666667\n1\n"

    def test_length_mismatch_rejected(self):
        with pytest.raises(ValueError):
            export_csv(np.zeros((1, 7)), IDENTITY_CALIBRATION, make_sample_grid(8))

    def test_log_x_axis(self):
        grid = make_sample_grid(3)
        curves = np.array([[0.2, 0.4, 0.6]])
        calib = AxisCalibration(1.0, 10000.0, 0.0, 1.0, x_scale="log")
        lines = export_csv(curves, calib, grid).splitlines()
        assert lines[1].startswith("1,")
        assert lines[2].startswith("100,")
        assert lines[3].startswith("10000,")
