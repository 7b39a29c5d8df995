"""Jackknife empirical likelihood (JEL) and adjusted JEL (AJEL) ratio tests.

The pseudo-values of the U-statistic are treated as an i.i.d. sample whose
mean is zero under symmetry. The profile empirical likelihood of that mean
constraint gives ``-2 log R``, calibrated against chi-square(1).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .errors import HullError, NumericError, SampleSizeError
from .estimator import as_sample
from .outcome import TestOutcome
from .special import chi2_quantile_1df, chi2_sf_1df

MIN_N = 4


@dataclass(frozen=True)
class PseudoValues:
    """Jackknife pseudo-values ``n*D - (n-1)*D_(-i)``, listed in sorted-sample order."""

    v: np.ndarray
    mean: float

    @property
    def n(self) -> int:
        return int(self.v.size)


@dataclass(frozen=True)
class ELSolution:
    lam: float
    log_ratio: float
    neg2_log_ratio: float
    iterations: int
    converged: bool


def pseudo_values(sample) -> PseudoValues:
    s = as_sample(sample)
    if s.n < MIN_N:
        raise SampleSizeError(f"need at least {MIN_N} observations for pseudo-values, got {s.n}")
    v = _kernels.pseudo_rows(s.sorted[None, :])[0]
    return PseudoValues(v=v, mean=float(np.mean(v)))


def ajel_factor(n: int) -> float:
    return max(1.0, math.log(n) / 2.0)


def adjusted_values(pv: PseudoValues) -> np.ndarray:
    """Pseudo-values with the extra point ``-max(1, ln(n)/2) * mean`` appended."""
    return np.append(pv.v, -ajel_factor(pv.n) * pv.mean)


def _solution(lam, half, iters, status, v) -> ELSolution:
    if status == _kernels.EL_HULL:
        raise HullError(float(np.min(v)), float(np.max(v)))
    if status == _kernels.EL_NOCONV:
        q = v / (1.0 + lam * v)
        raise NumericError(
            f"EL multiplier did not converge after {iters} iterations; "
            f"mean residual {float(np.mean(q)):.3g}"
        )
    neg2 = max(0.0, 2.0 * float(half))
    return ELSolution(
        lam=float(lam),
        log_ratio=-neg2 / 2.0,
        neg2_log_ratio=neg2,
        iterations=int(iters),
        converged=True,
    )


def solve_lambda(values) -> ELSolution:
    """Root of ``mean(v / (1 + lam*v)) = 0`` inside ``(-1/max v, -1/min v)``.

    Safeguarded Newton with bisection fallback.

    Raises
    ------
    HullError
        If zero is not strictly between ``min(v)`` and ``max(v)``.
    NumericError
        If the iteration cap is reached.
    """
    v = np.asarray(values, dtype=np.float64).ravel()
    if v.size < 2:
        raise SampleSizeError(f"need at least 2 values, got {v.size}")
    lam, half, iters, status = _kernels.el_rows(v[None, :])
    return _solution(lam[0], half[0], iters[0], status[0], v)


def el_weights(values, lam: float) -> np.ndarray:
    v = np.asarray(values, dtype=np.float64)
    return 1.0 / (v.size * (1.0 + lam * v))


def jel_statistic(sample) -> ELSolution:
    return solve_lambda(pseudo_values(sample).v)


def ajel_statistic(sample) -> ELSolution:
    pv = pseudo_values(sample)
    if pv.mean == 0.0:
        return ELSolution(lam=0.0, log_ratio=0.0, neg2_log_ratio=0.0, iterations=0, converged=True)
    return solve_lambda(adjusted_values(pv))


def _chi2_outcome(method: str, sol: ELSolution, alpha: float, n: int) -> TestOutcome:
    stat = sol.neg2_log_ratio
    return TestOutcome(
        method=method,
        statistic=stat,
        alpha=alpha,
        reject=bool(stat > chi2_quantile_1df(1.0 - alpha)),
        n=n,
        p_value=chi2_sf_1df(stat),
    )


def _check_alpha(alpha: float) -> None:
    if not 0 < alpha < 1:
        raise ValueError(f"alpha must lie in (0, 1), got {alpha!r}")


def jel_test(sample, alpha: float = 0.05) -> TestOutcome:
    """JEL ratio test; a hull violation yields an inconclusive outcome."""
    _check_alpha(alpha)
    s = as_sample(sample)
    try:
        sol = jel_statistic(s)
    except HullError as exc:
        return TestOutcome(
            method="JEL",
            statistic=math.nan,
            alpha=alpha,
            reject=False,
            n=s.n,
            inconclusive=True,
            detail=str(exc),
        )
    return _chi2_outcome("JEL", sol, alpha, s.n)


def ajel_test(sample, alpha: float = 0.05) -> TestOutcome:
    _check_alpha(alpha)
    s = as_sample(sample)
    return _chi2_outcome("AJEL", ajel_statistic(s), alpha, s.n)


# -- row-batched forms used by the simulation harness ------------------------


def jel_rows(sorted_rows: np.ndarray):
    """``(statistic, status, jack_mean)`` per sorted row; statistic is NaN on failure."""
    v = _kernels.pseudo_rows(sorted_rows)
    _, half, _, status = _kernels.el_rows(v)
    stat = np.where(status == _kernels.EL_OK, np.maximum(2.0 * half, 0.0), np.nan)
    return stat, status, v.mean(axis=1)


def ajel_rows(sorted_rows: np.ndarray):
    """``(statistic, status)`` per sorted row for the adjusted statistic."""
    n = sorted_rows.shape[1]
    v = _kernels.pseudo_rows(sorted_rows)
    mean = v.mean(axis=1)
    w = np.concatenate([v, (-ajel_factor(n) * mean)[:, None]], axis=1)
    _, half, _, status = _kernels.el_rows(w)
    zero = mean == 0.0
    status = np.where(zero, _kernels.EL_OK, status)
    stat = np.where(zero, 0.0, np.where(status == _kernels.EL_OK, np.maximum(2.0 * half, 0.0), np.nan))
    return stat, status
