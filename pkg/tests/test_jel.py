import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays
from scipy import optimize

from symtest.errors import HullError, SampleSizeError
from symtest.estimator import delta_hat
from symtest.fixtures import REPAIR_TIMES
from symtest.jel import (
    adjusted_values,
    ajel_factor,
    ajel_rows,
    ajel_statistic,
    ajel_test,
    el_weights,
    jel_rows,
    jel_statistic,
    jel_test,
    pseudo_values,
    solve_lambda,
)

finite = st.floats(min_value=-100, max_value=100, allow_nan=False)


def _loo_pseudo(x):
    """Pseudo-values by explicit leave-one-out recomputation."""
    x = np.sort(np.asarray(x, float))
    n = x.size
    d = delta_hat(x)
    return np.array([n * d - (n - 1) * delta_hat(np.delete(x, i)) for i in range(n)])


def _el_brentq(v):
    f = lambda lam: np.sum(v / (1 + lam * v))
    eps = 1e-14
    lam = optimize.brentq(f, -1 / v.max() * (1 - eps), -1 / v.min() * (1 - eps), xtol=1e-16, maxiter=500)
    return lam, 2 * np.sum(np.log1p(lam * v))


def test_pseudo_values_fixture():
    np.testing.assert_allclose(pseudo_values([1, 2, 3, 4]).v, [0, 0.5, -0.5, 0], atol=1e-12)


def test_pseudo_values_need_four():
    with pytest.raises(SampleSizeError, match="need at least 4 observations"):
        pseudo_values([1, 2, 3])


@given(arrays(np.float64, st.integers(4, 40), elements=finite))
def test_pseudo_values_match_leave_one_out(x):
    scale = max(1.0, float(np.max(np.abs(x))))
    np.testing.assert_allclose(pseudo_values(x).v, _loo_pseudo(x), rtol=0, atol=1e-10 * scale * x.size)


@given(arrays(np.float64, st.integers(4, 60), elements=finite))
def test_jackknife_mean_is_delta_hat(x):
    scale = max(1.0, float(np.max(np.abs(x))))
    assert abs(pseudo_values(x).mean - delta_hat(x)) <= 1e-10 * scale


def test_solve_lambda_worked_example():
    sol = solve_lambda([-1.0, 2.0])
    assert sol.lam == pytest.approx(0.25, abs=1e-10)
    # weights 1/(n(1 + lam v)) = (2/3, 1/3); -2 log R = -2 sum log(n p) = 2 log(9/8)
    np.testing.assert_allclose(el_weights([-1.0, 2.0], sol.lam), [2 / 3, 1 / 3])
    assert sol.neg2_log_ratio == pytest.approx(2 * math.log(9 / 8), rel=1e-12)
    assert sol.converged


@pytest.mark.parametrize("v", [[1.0, 2.0], [-2.0, -1.0], [0.0, 3.0], [0.0, 0.0]])
def test_hull_violation_raises(v):
    with pytest.raises(HullError) as info:
        solve_lambda(v)
    assert info.value.vmin == min(v) and info.value.vmax == max(v)


@given(arrays(np.float64, st.integers(2, 50), elements=st.floats(-10, 10)))
def test_weights_are_probabilities(v):
    if not (v.min() < 0 < v.max()):
        return
    sol = solve_lambda(v)
    w = el_weights(v, sol.lam)
    assert np.all(w > 0)
    assert abs(w.sum() - 1) < 1e-10
    assert sol.neg2_log_ratio >= 0


@given(arrays(np.float64, st.integers(2, 50), elements=st.floats(-10, 10)))
def test_solver_matches_brentq(v):
    # the bracketing oracle is only reliable away from the hull boundary
    if not (v.min() < -1e-6 and v.max() > 1e-6):
        return
    sol = solve_lambda(v)
    lam, neg2 = _el_brentq(v)
    assert sol.lam == pytest.approx(lam, rel=1e-8, abs=1e-10)
    assert sol.neg2_log_ratio == pytest.approx(neg2, rel=1e-8, abs=1e-10)


def test_extreme_ratio_near_hull_boundary():
    t = 2.2250738585072014e-308
    sol = solve_lambda([-t, 1.0])
    # root of -t/(1 - lam t) + 1/(1 + lam) = 0 is lam = (1 - t)/(2t)
    assert sol.lam == pytest.approx((1 - t) / (2 * t), rel=1e-9)


def test_ajel_factor_and_extra_point():
    assert ajel_factor(4) == 1.0
    assert ajel_factor(10_000) == pytest.approx(math.log(10_000) / 2)
    pv = pseudo_values(REPAIR_TIMES)
    w = adjusted_values(pv)
    assert w.size == pv.n + 1
    assert w[-1] == pytest.approx(-ajel_factor(45) * pv.mean)


@given(arrays(np.float64, st.integers(4, 40), elements=finite))
def test_ajel_always_feasible(x):
    pv = pseudo_values(x)
    if np.ptp(pv.v) == 0:
        return
    sol = ajel_statistic(x)
    assert sol.neg2_log_ratio >= 0 and math.isfinite(sol.neg2_log_ratio)


def test_repair_times_statistics():
    j, a = jel_test(REPAIR_TIMES), ajel_test(REPAIR_TIMES)
    assert j.statistic == pytest.approx(51.785, abs=0.01)
    assert a.statistic == pytest.approx(19.356, abs=0.01)
    assert j.reject and a.reject and j.consistent() and a.consistent()
    assert j.decision == "Reject H0"


def test_jel_test_hull_is_inconclusive():
    out = jel_test([2.0] * 5)  # all pseudo-values are zero
    assert out.inconclusive and not out.reject and out.decision == "Inconclusive"


def test_constant_sample_ajel_is_zero():
    assert ajel_statistic([2.0] * 6).neg2_log_ratio == 0.0
    assert not ajel_test([2.0] * 6).reject


def test_affine_invariance():
    x = np.random.default_rng(1).gamma(2.0, size=60)
    for a, b in ((0.01, 5.0), (30.0, -2.0)):
        assert jel_statistic(a * x + b).neg2_log_ratio == pytest.approx(jel_statistic(x).neg2_log_ratio, abs=1e-8)
        assert ajel_statistic(a * x + b).neg2_log_ratio == pytest.approx(ajel_statistic(x).neg2_log_ratio, abs=1e-8)


def test_rows_match_single_sample():
    rng = np.random.default_rng(2)
    rows = np.sort(rng.laplace(size=(50, 30)), axis=1)
    stat, status, mean = jel_rows(rows)
    astat, _ = ajel_rows(rows)
    for k in range(50):
        try:
            assert stat[k] == pytest.approx(jel_statistic(rows[k]).neg2_log_ratio, rel=1e-12, abs=1e-12)
        except HullError:
            assert math.isnan(stat[k])
        assert astat[k] == pytest.approx(ajel_statistic(rows[k]).neg2_log_ratio, rel=1e-12, abs=1e-12)


def test_quadratic_approximation_at_large_n():
    """-2 log R ~ n mean(V)^2 / var(V) at n = 2000 when the statistic is O(1)."""
    rng = np.random.default_rng(3)
    for _ in range(5):
        x = rng.standard_normal(2000)
        pv = pseudo_values(x)
        quad = pv.n * pv.mean**2 / np.var(pv.v)
        assert jel_statistic(x).neg2_log_ratio == pytest.approx(quad, rel=0.10)


def test_alpha_validation():
    with pytest.raises(ValueError):
        jel_test(REPAIR_TIMES, alpha=1.0)
