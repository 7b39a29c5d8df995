"""The symmetry U-statistic: kernel, brute-force oracle and O(n) closed form."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

import numpy as np

from . import _kernels
from .errors import SampleSizeError

MIN_N = 3


@dataclass(frozen=True)
class SortedSample:
    """Validated observations plus their ascending sort, computed once.

    Parameters
    ----------
    values : array_like
        Observations in original order. Must be finite, at least three.
    """

    values: np.ndarray
    sorted: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        arr = np.array(self.values, dtype=np.float64).ravel()
        if arr.size < MIN_N:
            raise SampleSizeError(f"need at least {MIN_N} observations, got {arr.size}")
        if not np.all(np.isfinite(arr)):
            raise ValueError("sample contains NaN or infinite values")
        arr.setflags(write=False)
        srt = np.sort(arr)
        srt.setflags(write=False)
        object.__setattr__(self, "values", arr)
        object.__setattr__(self, "sorted", srt)

    @property
    def n(self) -> int:
        return int(self.values.size)

    def __len__(self) -> int:
        return self.n


def as_sample(data) -> SortedSample:
    return data if isinstance(data, SortedSample) else SortedSample(data)


def kernel_h(x1: float, x2: float, x3: float) -> float:
    """Symmetric degree-3 kernel ``(3 max + 3 min) / 6 - mean``."""
    hi = max(x1, x2, x3)
    lo = min(x1, x2, x3)
    return (1.5 * (hi + lo) - (x1 + x2 + x3)) / 3.0


def delta_hat(sample) -> float:
    """Closed-form estimate of the max+min departure measure from order statistics.

    Runs in O(n) on the pre-sorted data.
    """
    s = as_sample(sample)
    return float(_kernels.delta_rows(s.sorted[None, :])[0])


def delta_hat_naive(sample) -> float:
    """Average of :func:`kernel_h` over all C(n, 3) triples. O(n^3); oracle only."""
    s = as_sample(sample)
    x = s.values.tolist()
    total = math.fsum(kernel_h(a, b, c) for a, b, c in itertools.combinations(x, 3))
    return total / math.comb(s.n, 3)
