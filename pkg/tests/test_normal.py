import math

import numpy as np
import pytest
from hypothesis import given, strategies as st
from scipy.special import ndtri
from scipy.stats import norm

from psiconc.normal import norm_cdf, norm_ppf


def test_ppf_matches_scipy_over_grid():
    p = np.concatenate([np.logspace(-300, -1, 400), np.linspace(0.01, 0.99, 999),
                        1 - np.logspace(-16, -2, 200)])
    assert np.max(np.abs(norm_ppf(p) - ndtri(p))) < 1e-12


def test_ppf_endpoints_and_symmetry():
    assert norm_ppf(0.0) == -math.inf
    assert norm_ppf(1.0) == math.inf
    assert norm_ppf(0.5) == pytest.approx(0.0, abs=1e-15)
    assert norm_ppf(0.975) == pytest.approx(1.959963984540054, abs=1e-13)


@pytest.mark.parametrize("p", [-0.1, 1.5, float("nan")])
def test_ppf_rejects_outside_unit_interval(p):
    with pytest.raises(ValueError):
        norm_ppf(p)


def test_cdf_scalar_type_and_values():
    assert isinstance(norm_cdf(0.3), float)
    x = np.linspace(-8, 8, 161)
    np.testing.assert_allclose(norm_cdf(x), norm.cdf(x), rtol=1e-13, atol=1e-300)


@given(st.floats(min_value=1e-12, max_value=1 - 1e-12))
def test_round_trip(p):
    assert norm_cdf(norm_ppf(p)) == pytest.approx(p, rel=1e-10, abs=1e-15)
