import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qarith.analysis import (
    AnalysisError,
    SweepSeries,
    WindowSample,
    find_tipping_point,
    fit_power_law,
    fit_window_model,
    log_grid,
    window_model_argmin,
    window_model_cost,
)


def test_log_grid_spec_example():
    assert log_grid(3, 8) == [3, 4, 5, 6, 7, 8]


def test_log_grid_single_point():
    assert log_grid(8, 8) == [8]


def test_log_grid_invalid_range():
    with pytest.raises(AnalysisError):
        log_grid(2, 8)
    with pytest.raises(AnalysisError):
        log_grid(9, 8)


@given(n_min=st.integers(3, 50), span=st.integers(0, 2000))
@settings(max_examples=80, deadline=None)
def test_log_grid_ratio_property(n_min, span):
    grid = log_grid(n_min, n_min + span)
    assert grid[0] == n_min
    for a, b in zip(grid, grid[1:]):
        assert b > a
        assert b / a <= 2 ** 0.5 + 1e-9


def test_fit_exact_square_law():
    s = SweepSeries("sq", ((2, 4.0), (4, 16.0), (8, 64.0)))
    slope, intercept = fit_power_law(s)
    assert slope == pytest.approx(2.0, abs=1e-12)
    assert intercept == pytest.approx(0.0, abs=1e-12)


@given(c=st.floats(0.001, 1000))
@settings(max_examples=30, deadline=None)
def test_fit_scale_invariance(c):
    s = SweepSeries("lin", ((2, c * 2), (4, c * 4), (8, c * 8)))
    slope, _ = fit_power_law(s)
    assert slope == pytest.approx(1.0, abs=1e-9)


def test_fit_needs_three_points():
    with pytest.raises(AnalysisError):
        fit_power_law(SweepSeries("x", ((2, 1.0), (4, 2.0))))


def test_series_validation():
    with pytest.raises(AnalysisError):
        SweepSeries("bad", ((4, 1.0), (2, 2.0)))
    with pytest.raises(AnalysisError):
        SweepSeries("bad", ((2, 0.0), (4, 2.0)))


def test_tipping_point_simple():
    a = SweepSeries("a", ((2, 10.0), (4, 10.0), (8, 10.0)))
    b = SweepSeries("b", ((2, 5.0), (4, 5.0), (8, 5.0)))
    assert find_tipping_point(a, b) == 2
    assert find_tipping_point(b, a) is None


def test_tipping_point_requires_sustained_dominance():
    a = SweepSeries("a", ((2, 10.0), (4, 10.0), (8, 10.0), (16, 10.0)))
    b = SweepSeries("b", ((2, 5.0), (4, 15.0), (8, 7.0), (16, 7.0)))
    assert find_tipping_point(a, b) == 8


def test_tipping_point_grid_mismatch():
    a = SweepSeries("a", ((2, 1.0), (4, 1.0)))
    b = SweepSeries("b", ((2, 1.0), (8, 1.0)))
    with pytest.raises(AnalysisError):
        find_tipping_point(a, b)


def test_tipping_never_both_directions():
    rng = np.random.default_rng(3)
    grid = (2, 4, 8, 16, 32)
    for _ in range(50):
        av = rng.uniform(1, 10, size=5)
        bv = rng.uniform(1, 10, size=5)
        a = SweepSeries("a", tuple(zip(grid, av)))
        b = SweepSeries("b", tuple(zip(grid, bv)))
        ab = find_tipping_point(a, b)
        ba = find_tipping_point(b, a)
        assert ab is None or ba is None


def test_window_model_roundtrip():
    c1, c2 = 2.0, 3.0
    samples = [
        WindowSample(n, w, window_model_cost(c1, c2, n, w))
        for n in (16, 32)
        for w in (2, 4, 6, 8)
    ]
    got = fit_window_model(samples)
    assert got[0] == pytest.approx(c1, rel=1e-6)
    assert got[1] == pytest.approx(c2, rel=1e-6)


def test_window_model_rank_deficiency():
    samples = [WindowSample(16, 4, 100.0 + i) for i in range(5)]
    with pytest.raises(AnalysisError):
        fit_window_model(samples)
    with pytest.raises(AnalysisError):
        fit_window_model([WindowSample(16, 4, 1.0)])


def test_window_argmin_matches_brute_force():
    c1, c2 = 5.0, 1.0
    n = 32
    brute = min(range(1, n + 1), key=lambda w: window_model_cost(c1, c2, n, w))
    assert window_model_argmin(c1, c2, n) == brute


def test_window_sample_validation():
    with pytest.raises(AnalysisError):
        WindowSample(4, 5, 1.0)
    with pytest.raises(AnalysisError):
        WindowSample(4, 2, 0.0)


def test_window_model_fit_on_real_counts():
    # Fit the cost model to actual windowed-modexp T-counts at n=32 and
    # check the fitted argmin lands within 3 of the closed-form window rule.
    from qarith import catalog
    from qarith.modexp import optimal_window

    samples = [
        WindowSample(
            32, w, float(catalog.measure("modexp", f"LYYWindowed({w})", 32).t_count)
        )
        for w in range(2, 15)
    ]
    c1, c2 = fit_window_model(samples)
    assert c1 > 0 and c2 > 0
    predicted = window_model_argmin(c1, c2, 32, w_max=16)
    assert abs(predicted - optimal_window(32)) <= 3
