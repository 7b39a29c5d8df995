import mpmath
import numpy as np
import pytest
from scipy import stats

from symtest.errors import ParameterDomainError
from symtest.special import (
    chi2_cdf_1df,
    chi2_quantile_1df,
    chi2_sf_1df,
    std_normal_cdf,
    std_normal_quantile,
)


def test_worked_values():
    assert std_normal_cdf(0.0) == 0.5
    assert chi2_cdf_1df(0.0) == 0.0
    assert std_normal_quantile(0.975) == pytest.approx(1.959964, abs=1e-6)
    assert chi2_quantile_1df(0.95) == pytest.approx(3.841459, abs=1e-5)


@pytest.mark.parametrize("x", [-8.0, -1.5, 0.3, 2.0, 6.5])
def test_normal_cdf_against_mpmath(x):
    ref = float(mpmath.ncdf(x))
    assert std_normal_cdf(x) == pytest.approx(ref, rel=1e-14)


@pytest.mark.parametrize("x", [1e-6, 0.5, 3.841459, 20.0, 80.0])
def test_chi2_1df_against_scipy(x):
    assert chi2_cdf_1df(x) == pytest.approx(stats.chi2.cdf(x, 1), rel=1e-12)
    assert chi2_sf_1df(x) == pytest.approx(stats.chi2.sf(x, 1), rel=1e-10)


def test_quantile_inverts_cdf():
    p = np.linspace(0.001, 0.999, 101)
    np.testing.assert_allclose(std_normal_cdf(std_normal_quantile(p)), p, rtol=1e-13)
    np.testing.assert_allclose(chi2_cdf_1df(chi2_quantile_1df(p)), p, rtol=1e-12)


@pytest.mark.parametrize("p", [0.0, 1.0, -0.1, 1.5])
def test_quantile_domain(p):
    with pytest.raises(ParameterDomainError):
        std_normal_quantile(p)
