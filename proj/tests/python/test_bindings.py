import math

import numpy as np
import pytest

import meetwalk as mw

SWAP = np.array([[0.0, 1.0], [1.0, 0.0]])
HALF = np.full((2, 2), 0.5)
FLIP = np.array([[-1.0, 1.0], [1.0, -1.0]])


def star(n=20):
    return mw.equal_neighbor_matrix(mw.generate("star", n), self_loops=True)


def test_star_worst_meeting_time():
    r = mw.meeting_times(star(), star())
    assert r.values.shape == (20, 20)
    assert abs(r.max - 8.0) <= 0.05
    assert r.all_finite
    assert r.residual <= 1e-9
    assert r.method == "dense-lu"


def test_swap_pair_is_partially_infinite():
    r = mw.meeting_times(SWAP, SWAP)
    assert r.values[0, 0] == 1.0 and r.values[1, 1] == 1.0
    assert math.isinf(r.values[0, 1]) and math.isinf(r.values[1, 0])
    assert math.isinf(r.max)
    d = r.to_dict()
    assert d["values"]["1,2"] == "inf"
    assert d["certificate"]["infinite_count"] == 2


def test_group_and_mean():
    r = mw.meeting_times([HALF, HALF], HALF)
    assert r.values.shape == (2, 2, 2)
    np.testing.assert_allclose(r.values, 4.0 / 3.0, rtol=1e-13)
    assert mw.mean_meeting_time(HALF, HALF) == pytest.approx(2.0)
    with pytest.raises(ValueError, match="mean meeting time undefined"):
        mw.mean_meeting_time(SWAP, SWAP)


def test_continuous_time():
    r = mw.meeting_times(FLIP, FLIP, ctmc=True)
    assert r.continuous
    assert r.values[0, 1] == pytest.approx(0.5)
    assert r.values[1, 1] == 0.0
    np.testing.assert_allclose(mw.ctmc_hitting_times(FLIP, [1]), [1.0, 0.0])


def test_hitting_times_match_stationary_return_times():
    p = star(20)
    h = mw.hitting_times(p)
    assert abs(h.max() - 58.0) <= 0.5
    pi = mw.stationary_distribution(p)
    np.testing.assert_allclose(np.diag(h), 1.0 / pi, rtol=1e-8)


def test_analysis_dicts():
    d = mw.decompose(SWAP)
    assert d["classes"][0]["period"] == 2
    c = mw.classify(SWAP, SWAP)
    assert c["finite"] is False
    assert c["witness"] == [1, 2]
    assert mw.classify(star(5), star(5))["one_ergodic"] is True


def test_simulation_is_deterministic_and_agrees():
    a = mw.simulate(HALF, HALF, [0, 1], trials=20000, seed=3)
    b = mw.simulate(HALF, HALF, [0, 1], trials=20000, seed=3, threads=2)
    assert a == b
    assert abs(a["mean"] - 2.0) <= 4 * a["std_error"]
    never = mw.simulate(SWAP, SWAP, [0, 1], trials=20, horizon=100)
    assert never["mean"] is None and never["lower_bound_only"]


def test_errors_map_to_python_exceptions():
    with pytest.raises(ValueError):
        mw.meeting_times(np.array([[0.5, 0.4], [0.5, 0.5]]), HALF)
    with pytest.raises(mw.BudgetError):
        mw.meeting_times([HALF] * 12, [HALF] * 12, state_budget=1000)
    with pytest.raises(mw.ValidationError):
        mw.generate("hexagon", 4)
