"""Biplot geometry: layout, axis calibration, marker ladder, selection."""

import numpy as np
import pytest

from cvabiplot import (
    calibrate_axis,
    fit_gsvd,
    fit_standard,
    layout,
    nice_markers,
    select_variables,
)
from cvabiplot.cva import CvaModel, StandardizationParams

from conftest import make_dataset


def identity_model(p=2):
    """Synthetic fitted model with identity basis and no rescaling."""
    from cvabiplot.cva import GroupStructure

    gs = GroupStructure(
        G=np.eye(2), group_names=("a", "b"), counts=np.array([1, 1])
    )
    return CvaModel(
        path="standard",
        basis=np.eye(p),
        axis_matrix=np.eye(p),
        eigenvalues=np.linspace(2.0, 1.0, p),
        group_means_scores=np.zeros((2, p)),
        training_scores=np.zeros((2, p)),
        standardization=StandardizationParams(means=np.zeros(p), sds=np.ones(p)),
        group_structure=gs,
        B_used=np.eye(p),
        W_used=np.eye(p),
        r=p,
        s=0,
    )


class TestNiceMarkers:
    def test_zero_to_ten(self):
        assert nice_markers((0, 10), 5) == [0, 2, 4, 6, 8, 10]

    def test_symmetric_unit(self):
        assert nice_markers((-1, 1), 5) == [-1.0, -0.5, 0.0, 0.5, 1.0]

    def test_body_mass_range(self):
        values = nice_markers((3271, 6300), 5)
        step = values[1] - values[0]
        assert step in (500.0, 1000.0)
        assert 3 <= len(values) <= 10
        assert values[0] <= 3271 and values[-1] >= 6300

    def test_degenerate_range(self):
        assert nice_markers((4.2, 4.2), 5) == [4.2]

    def test_ladder_properties(self):
        rng = np.random.default_rng(0)
        for _ in range(200):
            lo = float(rng.uniform(-1e4, 1e4))
            hi = lo + float(rng.uniform(1e-3, 2e4))
            values = nice_markers((lo, hi), 5)
            assert 3 <= len(values) <= 10
            assert values[0] <= lo and values[-1] >= hi
            steps = np.diff(values)
            assert np.allclose(steps, steps[0], rtol=1e-9)
            mant = steps[0] / (10.0 ** np.floor(np.log10(steps[0])))
            assert min(abs(mant - m) for m in (1.0, 2.0, 5.0, 10.0)) < 1e-9

    def test_bad_ranges(self):
        with pytest.raises(ValueError):
            nice_markers((np.inf, 1), 5)
        with pytest.raises(ValueError):
            nice_markers((2, 1), 5)

    def test_hypothesis_ladder_invariants(self):
        from hypothesis import assume, given, settings, strategies as st

        finite = st.floats(
            min_value=-1e12, max_value=1e12, allow_nan=False, allow_infinity=False
        )

        @settings(max_examples=200, deadline=None)
        @given(lo=finite, span=st.floats(min_value=1e-9, max_value=1e12))
        def check(lo, span):
            # spans near the float resolution of the offset degenerate
            assume(span > 1e-11 * max(abs(lo), abs(lo + span)))
            values = nice_markers((lo, lo + span), 5)
            assert 3 <= len(values) <= 10
            assert values[0] <= lo and values[-1] >= lo + span
            assert all(a < b for a, b in zip(values, values[1:]))

        check()


class TestCalibrateAxis:
    def test_mean_maps_to_origin(self):
        ds = make_dataset(30, 3, 3, seed=1)
        model = fit_standard(ds)
        mean_i = float(model.standardization.means[1])
        ax = calibrate_axis(model, 1, [mean_i])
        np.testing.assert_allclose(ax.markers[0].position, 0.0, atol=1e-12)

    def test_linearity(self):
        ds = make_dataset(30, 3, 3, seed=2)
        model = fit_standard(ds)
        mean_i = float(model.standardization.means[0])
        sd_i = float(model.standardization.sds[0])
        ax = calibrate_axis(model, 0, [mean_i + sd_i, mean_i + 2 * sd_i])
        np.testing.assert_allclose(
            ax.markers[1].position, 2.0 * ax.markers[0].position, rtol=1e-10
        )

    def test_identity_basis_closed_form(self):
        model = identity_model(2)
        ax = calibrate_axis(model, 0, [0.75])
        np.testing.assert_allclose(ax.markers[0].position, [0.75, 0.0], atol=1e-14)

    def test_collinearity_through_origin(self):
        ds = make_dataset(40, 4, 3, seed=3)
        model = fit_gsvd(ds)
        for i in range(4):
            ax = calibrate_axis(model, i, list(np.linspace(-3, 3, 7)))
            d = ax.direction
            for mk in ax.markers:
                cross = mk.position[0] * d[1] - mk.position[1] * d[0]
                assert abs(cross) <= 1e-10

    def test_unplottable_axis_flagged(self):
        model = identity_model(3)  # variable 2 has no 2-D projection
        ax = calibrate_axis(model, 2, [1.0])
        assert not ax.plottable and ax.markers == ()

    def test_prediction_consistency_q2(self):
        # with q = 2 exactly, 2-D predictions of the group means recover Xbar
        ds = make_dataset(50, 2, 3, seed=4)
        model = fit_standard(ds)
        assert model.q == 2
        Y = model.group_means_scores
        Z = Y @ model.axis_matrix  # standardized predictions
        X_pred = Z * model.standardization.sds + model.standardization.means
        from cvabiplot import group_indicator, group_means

        gs = group_indicator(ds.group_labels)
        np.testing.assert_allclose(X_pred, group_means(ds.X, gs), atol=1e-8)

    def test_marker_inner_product_predicts_value(self):
        ds = make_dataset(30, 3, 3, seed=5)
        model = fit_standard(ds)
        i = 1
        values = [float(ds.X[:, i].min()), float(ds.X[:, i].max())]
        ax = calibrate_axis(model, i, values)
        d_raw = model.axis_matrix[:2, i]
        for mk, val in zip(ax.markers, values):
            mu = (val - model.standardization.means[i]) / model.standardization.sds[i]
            assert float(mk.position @ d_raw) == pytest.approx(mu, abs=1e-10)


class TestSelectVariables:
    def test_identity_selection(self):
        ds = make_dataset(30, 4, 3, seed=6)
        model = fit_standard(ds)
        sel = select_variables(model, 4)
        assert sorted(sel) == [0, 1, 2, 3]

    def test_dominant_axis_first(self):
        model = identity_model(3)
        big = model.axis_matrix.copy()
        big[:2, 1] *= 10.0
        model = CvaModel(**{**model.__dict__, "axis_matrix": big})
        assert select_variables(model, 1) == [1]

    def test_clamp_warns(self):
        ds = make_dataset(30, 3, 2, seed=7)
        model = fit_standard(ds)
        with pytest.warns(UserWarning, match="clamping"):
            sel = select_variables(model, 10)
        assert len(sel) == 3


class TestLayout:
    def test_points_are_first_two_score_columns(self):
        ds = make_dataset(40, 4, 3, seed=8)
        model = fit_standard(ds)
        lay = layout(model, ds)
        np.testing.assert_array_equal(lay.points, model.training_scores[:, :2])
        np.testing.assert_array_equal(
            lay.group_mean_points, model.group_means_scores[:, :2]
        )
        assert 0.0 <= lay.eigenvalue_share <= 1.0
        assert len(lay.axes) == 4

    def test_two_group_near_one_dimensional(self):
        # K = 2: rank(B) = 1, so group means separate along one direction
        ds = make_dataset(30, 4, 2, seed=9)
        model = fit_standard(ds)
        lay = layout(model, ds)
        gm = lay.group_mean_points
        spread_y = abs(gm[0, 1] - gm[1, 1])
        spread_x = abs(gm[0, 0] - gm[1, 0])
        assert spread_y <= 1e-6 * max(spread_x, 1.0)

    def test_sign_flip_preserves_distances(self):
        ds = make_dataset(30, 3, 3, seed=10)
        model = fit_standard(ds)
        lay = layout(model, ds)
        flipped = lay.points @ np.diag([-1.0, 1.0])
        d0 = np.linalg.norm(lay.points[:, None] - lay.points[None, :], axis=2)
        d1 = np.linalg.norm(flipped[:, None] - flipped[None, :], axis=2)
        np.testing.assert_allclose(d0, d1, atol=1e-12)

    def test_deterministic(self):
        ds = make_dataset(25, 3, 3, seed=11)
        model = fit_standard(ds)
        l1 = layout(model, ds)
        l2 = layout(model, ds)
        np.testing.assert_array_equal(l1.points, l2.points)
        assert l1.bounds == l2.bounds
        for a1, a2 in zip(l1.axes, l2.axes):
            np.testing.assert_array_equal(a1.direction, a2.direction)
            for m1, m2 in zip(a1.markers, a2.markers):
                assert m1.value == m2.value
                np.testing.assert_array_equal(m1.position, m2.position)

    def test_one_dimensional_model_degenerates(self):
        rng = np.random.default_rng(13)
        X = np.concatenate([rng.standard_normal(12) - 4, rng.standard_normal(12) + 4])
        ds_labels = tuple("ab"[i // 12] for i in range(24))
        from cvabiplot import Dataset

        ds = Dataset(X=X[:, None], variable_names=("only",), group_labels=ds_labels)
        model = fit_standard(ds)
        assert model.q == 1
        lay = layout(model, ds)
        assert lay.degenerate
        np.testing.assert_array_equal(lay.points[:, 1], 0.0)
        from cvabiplot.svg import render_svg

        doc = render_svg(lay)
        assert "null" in doc and doc.startswith("<?xml")

    def test_bounds_cover_points_with_margin(self):
        ds = make_dataset(30, 3, 3, seed=12)
        model = fit_standard(ds)
        lay = layout(model, ds)
        xmin, xmax, ymin, ymax = lay.bounds
        assert xmin < lay.points[:, 0].min() and xmax > lay.points[:, 0].max()
        assert ymin < lay.points[:, 1].min() and ymax > lay.points[:, 1].max()
