import numpy as np
import pytest
from hypothesis import given, strategies as st

from blamekit.attribution import (
    PathSpec,
    blame,
    check_desiderata,
    completeness_gap,
    explain,
    integrated_gradients,
)
from blamekit.errors import InputError, ShapeError
from helpers import logistic_unit_ig_closed_form, unit_detector


class TestIntegratedGradients:
    def test_zero_displacement(self):
        det = unit_detector([1.0, 2.0])
        x = np.array([0.3, 0.4])
        for kind in ("straight", "axis"):
            raw = integrated_gradients(det, x, x, PathSpec(kind, 64))
            np.testing.assert_array_equal(raw, np.zeros(2))

    @pytest.mark.parametrize("seed", range(5))
    def test_logistic_unit_closed_form(self, seed):
        rng = np.random.default_rng(seed)
        dims = 4
        w = rng.normal(size=dims)
        b = float(rng.normal())
        det = unit_detector(w, b)
        x, xb = rng.uniform(size=dims), rng.uniform(size=dims)
        raw = integrated_gradients(det, x, xb, PathSpec("straight", 2048))
        np.testing.assert_allclose(raw, logistic_unit_ig_closed_form(w, b, x, xb),
                                   atol=1e-6)

    def test_completeness_gap_shrinks_with_steps(self, det16, ex16, anomalies16):
        x = det16.normalizer.apply(anomalies16[0].x)
        xb = ex16.points[0]
        gaps = []
        for m in (256, 512, 1024, 2048):
            raw = integrated_gradients(det16, x, xb, PathSpec("straight", m))
            gaps.append(completeness_gap(det16, x, xb, raw))
        assert gaps[-1] <= 1e-3
        assert gaps[-1] <= gaps[0]

    def test_l1_and_l2_paths_agree_in_linear_regime(self):
        # near-zero weights keep the logistic in its linear range, where
        # the attribution is path independent
        rng = np.random.default_rng(1)
        w = rng.normal(size=5) * 1e-3
        det = unit_detector(w)
        x, xb = rng.uniform(size=5), rng.uniform(size=5)
        straight = integrated_gradients(det, x, xb, PathSpec("straight", 512))
        axis = integrated_gradients(det, x, xb, PathSpec("axis", 512))
        np.testing.assert_allclose(straight, axis, atol=1e-6)

    def test_axis_path_is_complete(self, det16, ex16, anomalies16):
        x = det16.normalizer.apply(anomalies16[1].x)
        xb = ex16.points[0]
        raw = integrated_gradients(det16, x, xb, PathSpec("axis", 2048))
        assert completeness_gap(det16, x, xb, raw) <= 1e-3

    def test_width_mismatch(self):
        det = unit_detector([1.0, 1.0])
        with pytest.raises(ShapeError):
            integrated_gradients(det, np.zeros(2), np.zeros(3), PathSpec())


class TestBlame:
    def test_mixed_signs(self):
        np.testing.assert_allclose(blame(np.array([0.6, -0.2, 0.2])),
                                   [0.6, 0.0, 0.2])

    def test_zero_vector(self):
        np.testing.assert_array_equal(blame(np.zeros(3)), np.zeros(3))

    def test_uniform_positive(self):
        np.testing.assert_allclose(blame(np.array([2.0, 2.0])), [0.5, 0.5])

    def test_non_finite_rejected(self):
        with pytest.raises(InputError):
            blame(np.array([1.0, np.nan]))

    @given(st.lists(st.floats(min_value=-1e6, max_value=1e6), min_size=1, max_size=8))
    def test_codomain_constraints(self, raw):
        b = blame(np.array(raw))
        assert np.all(b >= 0.0) and np.all(b <= 1.0)
        assert b.sum() <= 1.0 + 1e-12


class TestExplain:
    def test_fault_dimension_gets_max_blame(self, det16, ex16, anomalies16):
        single = next(t for t in anomalies16 if np.isclose(t.beta.max(), 1.0))
        e = explain(det16, ex16, single.x)
        assert single.beta[np.argmax(e.blame)] == 1.0

    def test_observation_equal_to_exemplar(self, det16, ex16):
        raw_point = det16.normalizer.invert(ex16.points[0])
        e = explain(det16, ex16, raw_point)
        np.testing.assert_array_equal(e.blame, np.zeros(det16.dims))
        assert e.gap == 0.0

    def test_non_anomalous_flagged(self, bench16, det16, ex16):
        cfg, _, _ = bench16
        e = explain(det16, ex16, cfg.modes[0].center)
        assert "non_anomalous" in e.flags

    def test_adaptive_steps_bound_gap(self, det16, ex16, anomalies16):
        e = explain(det16, ex16, anomalies16[2].x, path=PathSpec("straight", 256))
        assert e.gap <= 1e-3 or e.path.steps >= 2 ** 16

    def test_json_fields(self, det16, ex16, anomalies16):
        e = explain(det16, ex16, anomalies16[0].x)
        d = e.to_dict()
        for key in ("x", "baseline", "score", "baseline_score", "raw",
                    "blame", "gap", "metric", "path", "flags"):
            assert key in d
        assert d["path"]["kind"] == "straight"


class TestDesiderata:
    def test_linear_ordering_and_proportionality(self):
        det = unit_detector([2.0, 1.0])
        x, xb = np.array([0.0, 0.0]), np.array([0.5, 0.5])
        raw = integrated_gradients(det, x, xb, PathSpec("straight", 1024))
        assert raw[0] > raw[1]
        report = check_desiderata(det, x, xb, raw)
        assert report["proportionality_pass_ratio"] >= 0.95

    def test_dummy_dimension(self):
        det = unit_detector([1.0, 0.0, -1.0])
        x, xb = np.array([0.1, 0.9, 0.2]), np.array([0.7, 0.1, 0.6])
        raw = integrated_gradients(det, x, xb, PathSpec("straight", 1024))
        assert raw[1] == 0.0
        report = check_desiderata(det, x, xb, raw)
        assert report["sensitivity"][1] is True

    def test_zero_path_zero_gap(self):
        det = unit_detector([1.0, 1.0])
        x = np.array([0.4, 0.6])
        raw = integrated_gradients(det, x, x, PathSpec("straight", 64))
        report = check_desiderata(det, x, x, raw)
        assert report["completeness_gap"] == 0.0

    def test_contrastive_on_fixture(self, det16, ex16, anomalies16):
        single = next(t for t in anomalies16 if np.isclose(t.beta.max(), 1.0))
        e = explain(det16, ex16, single.x)
        report = check_desiderata(det16, e.x, e.baseline, e.raw)
        assert report["contrastive"] is True


class TestEquivalentAttributions:
    def test_nearby_baselines_give_close_attributions(self, det16, ex16, anomalies16):
        # small baseline perturbations barely move the attribution vector
        x = det16.normalizer.apply(anomalies16[0].x)
        c = ex16.points[0]
        rng = np.random.default_rng(0)
        base = integrated_gradients(det16, x, c, PathSpec("straight", 2048))
        diffs = []
        for delta in (0.05, 0.002):
            u = rng.normal(size=len(c))
            u /= np.linalg.norm(u)
            other = integrated_gradients(det16, x, c + delta * u,
                                         PathSpec("straight", 2048))
            diffs.append(np.max(np.abs(base - other)))
        assert diffs[1] < diffs[0]
