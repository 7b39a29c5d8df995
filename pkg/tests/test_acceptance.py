"""Acceptance criteria, one test per criterion.

Each test records a one-line PASS/FAIL verdict that is printed in the
terminal summary. Tolerances are the ones the criteria state; nothing is
loosened to make a criterion pass.
"""

import json
import math
import time

import numpy as np
import pytest
from scipy import stats

from symtest import _kernels, cli
from symtest.bootstrap import bootstrap_critical_region, null_critical_region, scr_test
from symtest.characterization import asymptotic_variance, projection_variance
from symtest.distributions import (
    Azzalini,
    Contaminated,
    Exponential,
    FernandezSteel,
    Laplace,
    Logistic,
    Normal,
    NormalMixture,
)
from symtest.errors import HullError
from symtest.estimator import delta_hat, delta_hat_naive
from symtest.fixtures import REPAIR_TIMES
from symtest.jel import ajel_statistic, ajel_test, el_weights, jel_statistic, jel_test, pseudo_values, solve_lambda
from symtest.rng import RandomStream, derive_stream_id
from symtest.simulation import SimulationConfig, estimate_rejection_rate, run_study

REPS = 10_000
SEED = 20_251_015
ALPHA = 0.05


def _jel_power(spec, n, reps=REPS, seed=SEED):
    cfg = SimulationConfig(families=(spec,), sample_sizes=(n,), methods=("JEL",), reps=reps, master_seed=seed)
    return estimate_rejection_rate(spec, n, "JEL", cfg)


def _reference_band(rate, se, ref):
    tol = 3 * se + 0.01
    return abs(rate - ref) <= tol, tol


# -- 1 -------------------------------------------------------------------------


def test_criterion_01_characterization_fixtures(capsys, acceptance_record):
    stated = {
        "uniform(-1,1)": (1 / 12, 1 / 12),
        "logistic(0,1)": (3 / 4, 3 / 4),
        "exp(1)": (5 / 12, 1 / 3),
    }
    t0 = time.perf_counter()
    got = {}
    for spec in stated:
        assert cli.main(["characterize", "--dist", spec, "--json"]) == 0
        out = json.loads(capsys.readouterr().out)
        got[spec] = (out["gcre"], out["gce"])
    elapsed = time.perf_counter() - t0
    misses = [
        f"{s} gcre={got[s][0]:.6f} gce={got[s][1]:.6f} (stated {a:.6f}, {b:.6f})"
        for s, (a, b) in stated.items()
        if abs(got[s][0] - a) > 1e-6 or abs(got[s][1] - b) > 1e-6
    ]
    ok = not misses and elapsed < 1.0
    detail = f"runtime {elapsed:.2f}s; " + ("all within 1e-6" if not misses else "mismatch: " + "; ".join(misses))
    acceptance_record(1, ok, detail)
    assert elapsed < 1.0, detail
    assert not misses, detail


# -- 2 -------------------------------------------------------------------------


def test_criterion_02_oracle_equivalence(acceptance_record):
    rng = np.random.default_rng(2)
    gens = [
        lambda n: rng.standard_normal(n),
        lambda n: rng.laplace(size=n),
        lambda n: rng.exponential(size=n),
        lambda n: rng.uniform(-1, 1, n),
    ]
    t0 = time.perf_counter()
    worst = 0.0
    count = 0
    for k in range(240):
        x = gens[k % 4](int(rng.integers(3, 31)))
        fast, naive = delta_hat(x), delta_hat_naive(x)
        worst = max(worst, abs(fast - naive) / max(1.0, abs(naive)))
        count += 1
    elapsed = time.perf_counter() - t0
    ok = worst < 1e-12 and elapsed < 5.0
    acceptance_record(2, ok, f"{count} samples, worst scaled error {worst:.2e}, runtime {elapsed:.2f}s")
    assert ok


# -- 3 -------------------------------------------------------------------------


def test_criterion_03_jackknife_identity(acceptance_record):
    rng = np.random.default_rng(3)
    worst = 0.0
    for _ in range(150):
        x = rng.standard_normal(int(rng.integers(4, 101))) * rng.uniform(0.1, 10)
        worst = max(worst, abs(pseudo_values(x).mean - delta_hat(x)))
    v = pseudo_values([1.0, 2.0, 3.0, 4.0]).v
    fixture_err = float(np.max(np.abs(v - [0.0, 0.5, -0.5, 0.0])))
    ok = worst < 1e-10 and fixture_err < 1e-12
    acceptance_record(3, ok, f"max |mean V - delta_hat| {worst:.2e}; fixture error {fixture_err:.1e}")
    assert ok


# -- 4 -------------------------------------------------------------------------


def test_criterion_04_el_solver(acceptance_record):
    lam = solve_lambda([-1.0, 2.0]).lam
    hull_raised = 0
    for bad in ([1.0, 2.0], [-3.0, -1.0], [0.0, 1.0], [0.0, 0.0]):
        try:
            solve_lambda(bad)
        except HullError:
            hull_raised += 1
    rng = np.random.default_rng(4)
    worst_sum, min_w = 0.0, math.inf
    for _ in range(1000):
        v = rng.standard_normal(int(rng.integers(2, 60))) + rng.uniform(-0.5, 0.5)
        if not (v.min() < 0 < v.max()):
            v[0], v[-1] = -abs(v[0]) - 0.1, abs(v[-1]) + 0.1
        w = el_weights(v, solve_lambda(v).lam)
        worst_sum = max(worst_sum, abs(w.sum() - 1.0))
        min_w = min(min_w, float(w.min()))
    ok = abs(lam - 0.25) <= 1e-10 and hull_raised == 4 and min_w > 0 and worst_sum <= 1e-10
    acceptance_record(
        4, ok, f"lambda(-1,2)={lam:.12f}; hull errors {hull_raised}/4; min weight {min_w:.2e}; max |sum-1| {worst_sum:.1e}"
    )
    assert ok


# -- 5 -------------------------------------------------------------------------


@pytest.mark.slow
def test_criterion_05_wilks_calibration(acceptance_record):
    nulls = (Normal(0, 1), Laplace(0, 1), Logistic(0, 1), NormalMixture())
    cfg = SimulationConfig(
        families=nulls,
        sample_sizes=(200,),
        methods=("JEL", "AJEL", "SCR"),
        reps=REPS,
        master_seed=SEED,
        calibration_null=None,  # each null calibrates its own SCR region
    )
    table = run_study(cfg)
    assert not table.failures
    cells = [f"{r.family}/{r.method}={r.rate:.4f}" for r in table.rows]
    ok = all(0.04 <= r.rate <= 0.06 for r in table.rows) and len(table.rows) == 12
    acceptance_record(5, ok, "n=200 sizes " + ", ".join(cells))
    assert ok


# -- 6 -------------------------------------------------------------------------


@pytest.mark.slow
def test_criterion_06_power_fernandez_steel(acceptance_record):
    cases = [
        (FernandezSteel(Normal(0, 1), 1.0), 25, 0.820, lambda r: r >= 0.80),
        (FernandezSteel(Normal(0, 1), 1.0), 100, 1.000, lambda r: r >= 0.99),
        (FernandezSteel(Normal(0, 1), 0.5), 100, 0.984, lambda r: 0.95 <= r <= 1.0),
    ]
    ok, parts = True, []
    for spec, n, ref, stated in cases:
        rate, se, _ = _jel_power(spec, n)
        in_band, tol = _reference_band(rate, se, ref)
        cell_ok = stated(rate) and in_band
        ok &= cell_ok
        parts.append(f"{spec.label} n={n}: {rate:.4f} (reference {ref}, tol {tol:.4f})")
    acceptance_record(6, ok, "; ".join(parts))
    assert ok


# -- 7 -------------------------------------------------------------------------


@pytest.mark.slow
def test_criterion_07_power_azzalini(acceptance_record):
    spec = Azzalini(Normal(0, 1), 0.5)
    rate, se, _ = _jel_power(spec, 100)
    in_band, tol = _reference_band(rate, se, 0.979)
    ok = 0.93 <= rate <= 1.0 and in_band
    acceptance_record(7, ok, f"{spec.label} n=100 JEL power {rate:.4f} (reference 0.979, required [0.93, 1.0])")
    assert ok


# -- 8 -------------------------------------------------------------------------


@pytest.mark.slow
def test_criterion_08_contamination_property(acceptance_record):
    spec = Contaminated(Normal(0, 1), 0.5, 2.0)
    ns = (25, 50, 100, 200)
    res = {n: _jel_power(spec, n) for n in ns}
    increasing = all(
        res[b][0] - res[a][0] > -2 * math.hypot(res[a][1], res[b][1]) for a, b in zip(ns, ns[1:])
    )
    big = res[100][0] > 3 * ALPHA
    ok = increasing and big
    rates = ", ".join(f"n={n}: {res[n][0]:.4f}" for n in ns)
    acceptance_record(8, ok, f"{spec.label} JEL {rates}; increasing={increasing}, >3*alpha at n=100: {big}")
    assert ok


# -- 9 -------------------------------------------------------------------------


def test_criterion_09_repair_times(acceptance_record):
    j = jel_test(REPAIR_TIMES, ALPHA)
    a = ajel_test(REPAIR_TIMES, ALPHA)
    s = scr_test(REPAIR_TIMES, 1000, ALPHA, RandomStream(SEED))
    ok = j.reject and a.reject and s.reject
    acceptance_record(
        9,
        ok,
        f"JEL {j.statistic:.4f} (reference 51.785, diagnostic only) {j.decision}; "
        f"AJEL {a.statistic:.4f} {a.decision}; SCR {s.statistic:.4f} in [{s.critical_lower:.4f}, {s.critical_upper:.4f}] {s.decision}",
    )
    assert ok


# -- 10 ------------------------------------------------------------------------


def test_criterion_10_invariance_and_determinism(acceptance_record):
    rng = np.random.default_rng(10)
    worst = {"shift": 0.0, "scale": 0.0, "anti": 0.0, "jel": 0.0, "ajel": 0.0}
    for _ in range(200):
        x = rng.standard_normal(int(rng.integers(5, 80))) ** 2  # skewed, so the statistics are not zero
        a, b = rng.uniform(0.1, 10.0), rng.uniform(-10.0, 10.0)
        d = delta_hat(x)
        worst["shift"] = max(worst["shift"], abs(delta_hat(x + b) - d))
        worst["scale"] = max(worst["scale"], abs(delta_hat(a * x) - a * d) / max(1.0, abs(a * d)))
        worst["anti"] = max(worst["anti"], abs(delta_hat(-x) + d))
        try:
            j0 = jel_statistic(x).neg2_log_ratio
            worst["jel"] = max(worst["jel"], abs(jel_statistic(a * x + b).neg2_log_ratio - j0))
        except HullError:
            pass
        a0 = ajel_statistic(x).neg2_log_ratio
        worst["ajel"] = max(worst["ajel"], abs(ajel_statistic(a * x + b).neg2_log_ratio - a0))

    def seeded():
        st = RandomStream(SEED, derive_stream_id(10))
        s1 = Normal(0, 1).sample(st.substream(0), 50)
        r1 = bootstrap_critical_region(s1, 200, ALPHA, st.substream(1))
        r2 = null_critical_region(Laplace(0, 1), 30, 1000, ALPHA, st.substream(2))
        return s1.tolist(), (r1.c1, r1.c2), (r2.c1, r2.c2)

    def study(workers):
        cfg = SimulationConfig(
            families=(Normal(0, 1), FernandezSteel(Laplace(0, 1), 0.5)),
            sample_sizes=(20, 40),
            methods=("JEL", "AJEL", "SCR", "CM"),
            reps=1200,
            master_seed=SEED,
            scr_B=1000,
            workers=workers,
        )
        return run_study(cfg).rows

    deterministic = seeded() == seeded() and study(1) == study(1) == study(4)
    ok = (
        worst["shift"] < 1e-12
        and worst["scale"] < 1e-12
        and worst["anti"] < 1e-12
        and worst["jel"] < 1e-8
        and worst["ajel"] < 1e-8
        and deterministic
    )
    acceptance_record(
        10, ok, ", ".join(f"{k} {v:.1e}" for k, v in worst.items()) + f"; deterministic across runs/workers: {deterministic}"
    )
    assert ok


# -- 11 ------------------------------------------------------------------------


@pytest.mark.slow
def test_criterion_11_asymptotic_normality(acceptance_record):
    spec = Exponential(1.0)
    scaled = {}
    for n in (100, 400):
        base = RandomStream(SEED, derive_stream_id(11, n))
        rows = np.empty((REPS, n))
        for k in range(REPS):
            rows[k] = spec.sample(base.substream(k), n)
        rows.sort(axis=1)
        scaled[n] = math.sqrt(n) * _kernels.delta_rows(rows)
    v100, v400 = (float(np.var(scaled[n], ddof=1)) for n in (100, 400))
    rel = abs(v100 - v400) / v400
    skew = float(stats.skew(scaled[400]))
    var_k = asymptotic_variance(spec)
    proj = projection_variance(spec)
    ok = rel < 0.15 and abs(skew) < 0.15
    acceptance_record(
        11,
        ok,
        f"var(sqrt(n) D) n=100 {v100:.5f}, n=400 {v400:.5f} (rel diff {rel:.3f}); skewness n=400 {skew:.3f}; "
        f"Var(K) {var_k:.4f} ratio to MC {var_k / v400:.2f}; 9 Var(h1) {proj:.5f} ratio {proj / v400:.3f}",
    )
    assert ok
