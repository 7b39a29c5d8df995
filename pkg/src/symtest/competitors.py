"""Classical comparison tests: sign (SGN), Cabilio-Masaro (CM), Miao-Gel-Gastwirth (MGG).

All three are calibrated the same way as the U-statistic in simulations:
two-sided critical values from a simulated symmetric null.
"""

from __future__ import annotations

import math
from typing import Callable, Optional, Union

import numpy as np

from .bootstrap import CriticalRegion, null_critical_region
from .distributions import Distribution
from .errors import DegenerateSampleError, SampleSizeError
from .estimator import SortedSample
from .outcome import TestOutcome
from .rng import RandomStream

SQRT_HALF_PI = math.sqrt(math.pi / 2.0)


def _median_rows(rows: np.ndarray) -> np.ndarray:
    return np.median(rows, axis=1)


def cm_rows(rows: np.ndarray) -> np.ndarray:
    """``sqrt(n) (mean - median) / s`` per row, ``s`` with divisor n-1; NaN when s = 0."""
    n = rows.shape[1]
    s = rows.std(axis=1, ddof=1)
    num = math.sqrt(n) * (rows.mean(axis=1) - _median_rows(rows))
    with np.errstate(divide="ignore", invalid="ignore"):
        return np.where(s > 0, num / s, np.nan)


def mgg_rows(rows: np.ndarray) -> np.ndarray:
    """``sqrt(n) (mean - median) / J`` with ``J = sqrt(pi/2) mean|x - median|``; NaN when J = 0."""
    n = rows.shape[1]
    med = _median_rows(rows)
    j = SQRT_HALF_PI * np.abs(rows - med[:, None]).mean(axis=1)
    num = math.sqrt(n) * (rows.mean(axis=1) - med)
    with np.errstate(divide="ignore", invalid="ignore"):
        return np.where(j > 0, num / j, np.nan)


def sgn_rows(rows: np.ndarray) -> np.ndarray:
    """Standardized count of values above the mean; ties with the mean count one half."""
    n = rows.shape[1]
    mean = rows.mean(axis=1, keepdims=True)
    above = (rows > mean).sum(axis=1) + 0.5 * (rows == mean).sum(axis=1)
    return (above - n / 2.0) / math.sqrt(n / 4.0)


ROW_STATISTICS: dict[str, Callable[[np.ndarray], np.ndarray]] = {
    "SGN": sgn_rows,
    "CM": cm_rows,
    "MGG": mgg_rows,
}


def _values(sample) -> np.ndarray:
    x = sample.values if isinstance(sample, SortedSample) else np.asarray(sample, dtype=float).ravel()
    if x.size < 2:
        raise SampleSizeError(f"need at least 2 observations, got {x.size}")
    return x


def _single(method: str, sample) -> float:
    x = _values(sample)
    value = float(ROW_STATISTICS[method](x[None, :])[0])
    if math.isnan(value):
        raise DegenerateSampleError(f"{method} statistic undefined: sample has zero spread")
    return value


def cm_statistic(sample) -> float:
    return _single("CM", sample)


def mgg_statistic(sample) -> float:
    return _single("MGG", sample)


def sgn_statistic(sample) -> float:
    return _single("SGN", sample)


def competitor_region(
    method: str,
    null_spec: Distribution,
    n: int,
    B: int = 10_000,
    alpha: float = 0.05,
    stream: Optional[RandomStream] = None,
) -> CriticalRegion:
    """Null-simulated critical region for one competitor statistic."""
    return null_critical_region(null_spec, n, B, alpha, stream, statistic=ROW_STATISTICS[_method(method)])


def _method(method: str) -> str:
    m = method.upper()
    if m not in ROW_STATISTICS:
        raise ValueError(f"unknown competitor method {method!r}; choose from {sorted(ROW_STATISTICS)}")
    return m


def competitor_test(
    method: str,
    sample,
    alpha: float,
    calibration: Union[CriticalRegion, Callable[[int], CriticalRegion]],
) -> TestOutcome:
    """Two-sided test against null-simulated critical values.

    ``calibration`` is a ready :class:`CriticalRegion` or a callable that
    builds one for the sample size. A zero-spread sample gives an
    inconclusive outcome instead of raising.
    """
    m = _method(method)
    x = _values(sample)
    region = calibration(x.size) if callable(calibration) else calibration
    try:
        stat = _single(m, x)
    except DegenerateSampleError as exc:
        return TestOutcome(
            method=m,
            statistic=math.nan,
            alpha=alpha,
            reject=False,
            n=x.size,
            critical_lower=region.c1,
            critical_upper=region.c2,
            inconclusive=True,
            detail=str(exc),
        )
    return TestOutcome(
        method=m,
        statistic=stat,
        alpha=alpha,
        reject=region.rejects(stat),
        n=x.size,
        critical_lower=region.c1,
        critical_upper=region.c2,
    )
