"""Standard normal and one-degree-of-freedom chi-square functions.

The chi-square(1) routines go through the normal: if Z is standard normal,
Z**2 is chi-square(1), so ``P(Z**2 <= x) = 2*Phi(sqrt(x)) - 1``.
"""

from __future__ import annotations

import numpy as np
from scipy import special as sc

from .errors import ParameterDomainError


def std_normal_cdf(x):
    return sc.ndtr(x)


def std_normal_quantile(p):
    p_arr = np.asarray(p, dtype=float)
    if np.any(~((p_arr > 0) & (p_arr < 1))):
        raise ParameterDomainError(f"normal quantile needs 0 < p < 1, got {p!r}")
    return sc.ndtri(p)


def chi2_cdf_1df(x):
    x_arr = np.asarray(x, dtype=float)
    if np.any(~(x_arr >= 0)):
        raise ParameterDomainError(f"chi-square cdf needs x >= 0, got {x!r}")
    # erf(sqrt(x/2)) == 2*Phi(sqrt(x)) - 1 without the cancellation near 0
    return sc.erf(np.sqrt(x_arr / 2.0)) if np.ndim(x) else float(sc.erf(np.sqrt(x_arr / 2.0)))


def chi2_sf_1df(x):
    """Upper tail ``1 - chi2_cdf_1df(x)`` computed without cancellation."""
    x_arr = np.asarray(x, dtype=float)
    if np.any(~(x_arr >= 0)):
        raise ParameterDomainError(f"chi-square survival needs x >= 0, got {x!r}")
    out = sc.erfc(np.sqrt(x_arr / 2.0))
    return out if np.ndim(x) else float(out)


def chi2_quantile_1df(p):
    p_arr = np.asarray(p, dtype=float)
    if np.any(~((p_arr >= 0) & (p_arr < 1))):
        raise ParameterDomainError(f"chi-square quantile needs 0 <= p < 1, got {p!r}")
    z = sc.ndtri((1.0 + p_arr) / 2.0)
    out = z * z
    return out if np.ndim(p) else float(out)
