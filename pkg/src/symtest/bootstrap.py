"""Simulated critical regions for the U-statistic (and any other row statistic).

Two calibrations are provided:

* :func:`bootstrap_critical_region` resamples the observed data with
  replacement. By default the replicate statistics are centred on the
  observed value, so the region estimates the null spread of the statistic
  around zero (the basic bootstrap); ``centered=False`` keeps the raw
  replicate quantiles.
* :func:`null_critical_region` simulates fresh samples from a symmetric
  null family. This is what the simulation harness uses.

Replicate ``b`` always draws from ``stream.substream(b)``, so regions do not
depend on evaluation order.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from . import _kernels
from .distributions import Distribution
from .errors import ParameterDomainError
from .estimator import as_sample, delta_hat
from .outcome import TestOutcome
from .rng import RandomStream

DATA_BOOTSTRAP = "DataBootstrap"
NULL_SIMULATED = "NullSimulated"

RowStatistic = Callable[[np.ndarray], np.ndarray]


@dataclass(frozen=True)
class CriticalRegion:
    """Two-sided acceptance interval ``[c1, c2]``; the statistic is rejected outside it."""

    c1: float
    c2: float
    alpha: float
    replicates: int
    source: str
    statistics: np.ndarray = field(repr=False, compare=False, default=None)

    def rejects(self, statistic: float) -> bool:
        return bool(statistic < self.c1 or statistic > self.c2)


def empirical_quantiles(stats: np.ndarray, alpha: float) -> tuple[float, float]:
    """``alpha/2`` and ``1 - alpha/2`` quantiles, linear interpolation at ``p(B-1)+1``."""
    lo, hi = np.quantile(stats, [alpha / 2.0, 1.0 - alpha / 2.0], method="linear")
    return float(lo), float(hi)


def _check(B: int, alpha: float, min_b: int) -> None:
    if int(B) < min_b:
        raise ParameterDomainError(f"need at least {min_b} replicates, got {B!r}")
    if not 0 < alpha < 1:
        raise ParameterDomainError(f"alpha must lie in (0, 1), got {alpha!r}")


def bootstrap_critical_region(
    sample,
    B: int = 1000,
    alpha: float = 0.05,
    stream: Optional[RandomStream] = None,
    *,
    centered: bool = True,
) -> CriticalRegion:
    _check(B, alpha, 100)
    s = as_sample(sample)
    stream = stream if stream is not None else RandomStream(0)
    n = s.n
    idx = np.empty((B, n), dtype=np.int64)
    for b in range(B):
        idx[b] = stream.substream(b).generator.integers(0, n, n)
    idx.sort(axis=1)
    # resampled indices into the sorted data, once sorted, give sorted resamples
    stats = _kernels.delta_rows(s.sorted[idx])
    if centered:
        stats = stats - delta_hat(s)
    c1, c2 = empirical_quantiles(stats, alpha)
    return CriticalRegion(c1, c2, alpha, int(B), DATA_BOOTSTRAP, stats)


def simulate_null_rows(null_spec: Distribution, n: int, B: int, stream: RandomStream) -> np.ndarray:
    """``B`` sorted samples of size ``n``; row ``b`` comes from ``stream.substream(b)``."""
    rows = np.empty((B, n))
    for b in range(B):
        rows[b] = null_spec.sample(stream.substream(b), n)
    rows.sort(axis=1)
    return rows


def null_critical_region(
    null_spec: Distribution,
    n: int,
    B: int = 10_000,
    alpha: float = 0.05,
    stream: Optional[RandomStream] = None,
    *,
    statistic: Optional[RowStatistic] = None,
) -> CriticalRegion:
    """Critical region of a row statistic under a simulated symmetric null.

    ``statistic`` maps sorted rows to one value per row; the default is the
    delta-hat U-statistic.
    """
    _check(B, alpha, 1000)
    if not null_spec.is_symmetric:
        raise ParameterDomainError(f"null family {null_spec.label} is not symmetric")
    if int(n) < 3:
        raise ParameterDomainError(f"n must be >= 3, got {n!r}")
    stream = stream if stream is not None else RandomStream(0)
    fn = statistic if statistic is not None else _kernels.delta_rows
    rows = simulate_null_rows(null_spec, int(n), int(B), stream)
    stats = np.asarray(fn(rows), dtype=float)
    stats = stats[np.isfinite(stats)]
    c1, c2 = empirical_quantiles(stats, alpha)
    return CriticalRegion(c1, c2, alpha, int(B), NULL_SIMULATED, stats)


def scr_test(
    sample,
    B: int = 1000,
    alpha: float = 0.05,
    stream: Optional[RandomStream] = None,
    *,
    region: Optional[CriticalRegion] = None,
) -> TestOutcome:
    """Reject when delta-hat falls strictly outside the critical region.

    Uses the data bootstrap unless a precomputed ``region`` is supplied.
    """
    s = as_sample(sample)
    if region is None:
        region = bootstrap_critical_region(s, B, alpha, stream)
    stat = delta_hat(s)
    return TestOutcome(
        method="SCR",
        statistic=stat,
        alpha=region.alpha,
        reject=region.rejects(stat),
        n=s.n,
        critical_lower=region.c1,
        critical_upper=region.c2,
    )
