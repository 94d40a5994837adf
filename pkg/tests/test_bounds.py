import math
import warnings

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from pauliprobe.bounds import (
    BoundQuery,
    DegenerateWeightWarning,
    GameConfig,
    OPTIMAL_X_FLOOR,
    f_w,
    game_floor,
    log_f_w,
    lower_bound_N,
    optimal_x,
    pr_e,
    pr_learnable,
    run_game,
    stirling_brackets,
    upper_bound_N,
    weighted_sum_max_eigenvalue,
    wilson_interval,
)
from pauliprobe.covering import build_uniform_low
from pauliprobe.oracle import dense_max_eigenvalue
from pauliprobe.pauli import PauliString
from pauliprobe.probes import AlphaProbe


def test_pr_e_examples():
    assert pr_e(PauliString.from_text("III"), 1.0) == 4.0**-3
    total = sum(pr_e(PauliString(b, 2), 0.3) for b in range(16))
    assert total == pytest.approx(1, abs=1e-12)


def test_pr_learnable_examples():
    assert pr_learnable(3, 3, 0.4) == pytest.approx(1, abs=1e-12)
    assert pr_learnable(3, 0, 1.0) == pytest.approx(4.0**-3, abs=1e-15)
    vals = [pr_learnable(5, w, 0.5) for w in range(6)]
    assert all(b >= a for a, b in zip(vals, vals[1:]))


def test_f_w_examples():
    assert f_w(4, 2, 1.0) == 67 / 16
    for n in range(1, 61):
        assert f_w(n, n, 1.0) == 2.0**n
        assert log_f_w(n, n, 1.0) == pytest.approx(n * math.log(2), abs=1e-12)


def test_f_w_large_n_is_finite():
    assert math.isfinite(log_f_w(10_000, 5000, 1.0))
    assert log_f_w(10_000, 10_000, 1.0) == pytest.approx(10_000 * math.log(2), rel=1e-12)
    assert log_f_w(401, 401, 0.3) == pytest.approx(401 * (math.log(1.9) - math.log(1.3)), rel=1e-12)


@given(st.integers(1, 200), st.floats(0.001, 1.0))
def test_full_sum_identity(n, x):
    assert log_f_w(n, n, x) + n * math.log1p(x) == pytest.approx(n * math.log1p(3 * x), rel=1e-12, abs=1e-12)


def test_optimal_x_examples():
    assert optimal_x(4, 2) == 1.0
    assert optimal_x(4, 1) == pytest.approx(1 / 3, abs=1e-15)
    assert optimal_x(5, 4) == 1.0
    with pytest.warns(DegenerateWeightWarning):
        assert optimal_x(5, 0) == OPTIMAL_X_FLOOR


@pytest.mark.parametrize("n", [2, 5, 11, 23, 30])
def test_optimal_x_near_grid_maximum(n):
    # the closed-form x is an asymptotic optimum; on a 100-point grid it stays within 5% of the best
    grid = [i / 100 for i in range(1, 101)]
    for w in range(1, n + 1):
        best = max(f_w(n, w, x) for x in grid)
        assert f_w(n, w, optimal_x(n, w)) >= 0.95 * best


def test_optimal_x_is_not_exact_maximiser():
    assert f_w(4, 1, 0.22) > f_w(4, 1, optimal_x(4, 1))
    assert f_w(2, 1, 0.67) > f_w(2, 1, optimal_x(2, 1))


def _scan_points():
    for n in range(2, 41):
        for i in range(1, 101):
            x = i / 100
            mean = n * 3 * x / (1 + 3 * x)
            for w in range(1, n + 1):
                if w >= mean:
                    yield n, w, x, mean


def test_f_bracket_on_scan_grid():
    checked = 0
    for n, w, x, mean in _scan_points():
        if mean < 1:
            continue
        ratio = ((1 + 3 * x) / (1 + x)) ** n
        val = f_w(n, w, x)
        assert ratio / math.sqrt(2 * n) <= val <= w * ratio / math.sqrt(math.pi)
        checked += 1
    assert checked > 10_000


def test_f_bracket_fails_when_mean_weight_below_one():
    # the u=0 term escapes the upper bracket when w=1 sits above a mean weight < 1
    n, w, x = 2, 1, 0.01
    ratio = ((1 + 3 * x) / (1 + x)) ** n
    assert f_w(n, w, x) > w * ratio / math.sqrt(math.pi)
    violations = [(n, w) for n, w, x, mean in _scan_points() if mean < 1 and f_w(n, w, x) > w * ((1 + 3 * x) / (1 + x)) ** n / math.sqrt(math.pi)]
    assert len(violations) == 123
    assert {w for _, w in violations} == {1}


def test_bracket_at_optimum():
    for n in range(3, 61):
        for w in range(1, n // 2 + 1):
            val = f_w(n, w, optimal_x(n, w))
            assert 3**w / math.sqrt(2 * n) <= val <= w * 3**w / math.sqrt(math.pi)
    # n=2, w=1: F = 7/4 just above 3/sqrt(pi)
    assert f_w(2, 1, optimal_x(2, 1)) == 1.75 > 3 / math.sqrt(math.pi)


def test_lower_bound_examples():
    assert lower_bound_N(BoundQuery(4, 0, 4, 0.1, 0.05)) == 360.0
    assert lower_bound_N(BoundQuery(8, 0, 8, 0.1, 0.05)) == 5760.0
    for n in range(1, 16):
        assert lower_bound_N(BoundQuery(n, 0, n, 0.1, 0.05)) == 22.5 * 2**n


def test_lower_bound_halving_and_monotone():
    for n in range(1, 13):
        for w in range(0, n + 1):
            vals = [lower_bound_N(BoundQuery(n, k, w, 0.1, 0.05)) for k in range(n + 1)]
            assert all(b == a / 2 for a, b in zip(vals, vals[1:]))
        by_w = [lower_bound_N(BoundQuery(n, 0, w, 0.1, 0.05)) for w in range(1, n + 1)]
        assert all(b >= a for a, b in zip(by_w, by_w[1:]))


def test_query_validation():
    with pytest.raises(ValueError):
        BoundQuery(3, 4, 1, 0.1, 0.05)
    with pytest.raises(ValueError):
        BoundQuery(3, 0, 1, 0.1, 0.5)


def test_upper_dominates_lower():
    for n in range(1, 13):
        for k in range(n + 1):
            for w in range(1, n + 1):
                q = BoundQuery(n, k, w, 0.1, 0.05)
                assert upper_bound_N(q) >= lower_bound_N(q)


def test_upper_bound_measured_sigma():
    q = BoundQuery(4, 0, 2, 0.1, 0.05)
    assert upper_bound_N(q, measured_sigma=6) == upper_bound_N(q)
    assert upper_bound_N(q, measured_sigma=54) < upper_bound_N(q)


def test_stirling():
    lo, hi = stirling_brackets(10, 5)
    assert lo <= 252 <= hi
    assert stirling_brackets(7, 7) == (1.0, 1.0)
    assert stirling_brackets(7, 0) == (1.0, 1.0)
    for n in range(2, 61):
        for u in range(1, n):
            lo, hi = stirling_brackets(n, u)
            assert lo <= math.comb(n, u) <= hi


def test_max_eigenvalue():
    assert weighted_sum_max_eigenvalue(1, 1.0) == 0.5
    assert weighted_sum_max_eigenvalue(2, 0.5) == pytest.approx(0.36, abs=1e-15)
    assert weighted_sum_max_eigenvalue(3, 1e-9) == pytest.approx(1, abs=1e-8)
    for x in (0.1, 0.7):
        assert weighted_sum_max_eigenvalue(2, x) == pytest.approx(dense_max_eigenvalue(2, x), abs=1e-9)


def test_wilson():
    lo, hi = wilson_interval(50, 100)
    assert lo < 0.5 < hi
    assert hi - 0.5 == pytest.approx(0.5 - lo, abs=1e-12)
    lo, hi = wilson_interval(200, 200)
    assert hi == pytest.approx(1.0, abs=1e-12) and lo < 1


def test_game_replay_and_floor():
    cfg = GameConfig(2, 2, 1.0, 0.25, 60, seed=4)
    a = run_game(cfg, AlphaProbe(2, 1.0))
    b = run_game(cfg, AlphaProbe(2, 1.0))
    assert a == b
    assert game_floor(2, 2, 1.0, 0.05) == pytest.approx(0.95, abs=1e-12)


def test_game_weight_zero_near_floor():
    res = run_game(GameConfig(2, 0, 1.0, 0.25, 200, seed=1), AlphaProbe(2, 1.0))
    floor = game_floor(2, 0, 1.0, 0.05)
    assert abs(res.win_rate - floor) <= 5 * res.wilson_sigma


def test_game_with_stabilizer_strategy():
    grp = build_uniform_low(2, "XZ")
    res = run_game(GameConfig(2, 1, 0.3, 0.25, 100, seed=2), grp)
    assert 0.5 <= res.win_rate <= 1.0
    assert res.samples_per_trial > 0


def test_game_config_validation():
    with pytest.raises(ValueError):
        GameConfig(2, 3, 1.0, 0.1, 10)
    with pytest.raises(ValueError):
        GameConfig(2, 2, 1.0, 0.1, 0)
