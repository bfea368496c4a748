import math

import numpy as np
import pytest
from hypothesis import given, strategies as st
from scipy.linalg import expm, logm

from psiconc import BoxCox, EmpiricalMeasure, Identity, Log, Logit
from psiconc.apps import (covariance_deviation_bound, geometric_mean_covariance, jacobi_eigh, log_linear_fit,
                          portfolio_bound, psi_median, regression_deviation_bound, spd_log, sym_exp)
from psiconc.errors import (DimensionMismatch, EmptySample, InvalidArgument, NonPositiveResponse, NotSpd,
                            RankDeficient)


def random_spd(rng, d, cond=100.0):
    q, _ = np.linalg.qr(rng.standard_normal((d, d)))
    w = np.exp(rng.uniform(0, math.log(cond), d))
    return (q * w) @ q.T


# regression

def test_noiseless_fit_recovers_coefficients(rng):
    X = np.column_stack([np.ones(40), rng.standard_normal((40, 2))])
    beta = np.array([0.3, -1.2, 2.0])
    fit = log_linear_fit(X, np.exp(X @ beta))
    np.testing.assert_allclose(fit.beta_hat, beta, atol=1e-10)
    assert fit.sigma_sq_hat == pytest.approx(0.0, abs=1e-20)


def test_intercept_only_is_mean_log(rng):
    y = rng.lognormal(1, 2, 30)
    fit = log_linear_fit(np.ones((30, 1)), y)
    assert fit.beta_hat[0] == pytest.approx(np.log(y).mean(), rel=1e-12)
    assert fit.sigma_sq_hat == pytest.approx(np.log(y).var(ddof=1), rel=1e-10)
    assert fit.lambda_min == pytest.approx(1.0)


def test_noisy_fit_within_error_scale(rng):
    n, p = 500, 3
    X = np.column_stack([np.ones(n), rng.standard_normal((n, p - 1))])
    beta = np.array([1.0, 0.5, -0.25])
    y = np.exp(X @ beta + rng.normal(0, 0.5, n))
    fit = log_linear_fit(X, y)
    assert np.linalg.norm(fit.beta_hat - beta) <= 3 * math.sqrt(p * 0.25 / (n * fit.lambda_min))
    ref, *_ = np.linalg.lstsq(X, np.log(y), rcond=None)
    np.testing.assert_allclose(fit.beta_hat, ref, rtol=1e-10)
    assert fit.lambda_min == pytest.approx(np.linalg.eigvalsh(X.T @ X / n)[0], rel=1e-12)


def test_regression_errors():
    X = np.ones((5, 2))
    with pytest.raises(RankDeficient):
        log_linear_fit(X, np.ones(5))
    with pytest.raises(NonPositiveResponse):
        log_linear_fit(np.ones((3, 1)), [1.0, 0.0, 2.0])
    with pytest.raises(DimensionMismatch):
        log_linear_fit(np.ones((3, 1)), [1.0, 2.0])
    with pytest.raises(RankDeficient):
        log_linear_fit(np.ones((1, 2)), [1.0])


def test_regression_bound():
    assert regression_deviation_bound(1, 100, 1.0, 1.0, 0.0) == 1.0
    assert regression_deviation_bound(1, 100, 1.0, 1.0, 1.0) == pytest.approx(2 * math.exp(-50), rel=1e-14)
    assert regression_deviation_bound(3, 2, 1.0, 1.0, 0.1) == 1.0
    with pytest.raises(InvalidArgument):
        regression_deviation_bound(1, 10, 0.0, 1.0, 1.0)


# portfolio

def test_portfolio_cap():
    b, cap = portfolio_bound(0.1, 252, 0.0)
    assert b == 1.0
    assert cap == pytest.approx(0.0123457, abs=5e-8)
    assert round(cap, 4) == 0.0123
    assert portfolio_bound(0.5, 1, 1.0)[1] == 1.0
    assert portfolio_bound(0.1, 10, 0.05, 0.005)[0] == pytest.approx(math.exp(-0.25), rel=1e-14)


def test_portfolio_cap_bounds_true_log_variance():
    # the two-point law at 1 +- delta has the largest variance of log R
    for d in (0.05, 0.1, 0.3, 0.6):
        var = (math.log((1 + d) / (1 - d)) / 2) ** 2
        assert var <= portfolio_bound(d, 1, 0.0)[1]


def test_portfolio_errors():
    for args in [(0.0, 1, 1.0), (1.0, 1, 1.0), (0.1, 0, 1.0), (0.1, 1, -1.0)]:
        with pytest.raises(InvalidArgument):
            portfolio_bound(*args)
    with pytest.raises(InvalidArgument):
        portfolio_bound(0.1, 1, 1.0, sigma_log_sq=0.5)


# matrix functions

@pytest.mark.parametrize("d", [1, 2, 5, 16, 64])
def test_jacobi_matches_numpy(d, rng):
    A = rng.standard_normal((d, d))
    A = A + A.T
    w, V = jacobi_eigh(A)
    np.testing.assert_allclose(w, np.linalg.eigvalsh(A), atol=1e-10 * np.abs(w).max())
    np.testing.assert_allclose(V.T @ V, np.eye(d), atol=1e-12)
    np.testing.assert_allclose((V * w) @ V.T, A, atol=1e-12 * np.linalg.norm(A))


def test_log_and_exp_against_scipy(rng):
    S = random_spd(rng, 6)
    np.testing.assert_allclose(spd_log(S), logm(S).real, atol=1e-11)
    np.testing.assert_allclose(sym_exp(spd_log(S)), S, rtol=1e-11, atol=1e-11)
    H = rng.standard_normal((6, 6))
    H = H + H.T
    np.testing.assert_allclose(sym_exp(H), expm(H), rtol=1e-11, atol=1e-11)


def test_geometric_mean_examples(rng):
    np.testing.assert_allclose(geometric_mean_covariance([np.diag([1.0, 4.0]), np.diag([4.0, 1.0])]),
                               np.diag([2.0, 2.0]), atol=1e-10)
    S = random_spd(rng, 4)
    np.testing.assert_allclose(geometric_mean_covariance([S]), S, rtol=1e-11)
    np.testing.assert_allclose(geometric_mean_covariance([np.eye(3)] * 3), np.eye(3), atol=1e-14)


def test_geometric_mean_properties(rng):
    A, B = random_spd(rng, 5), random_spd(rng, 5)
    G = geometric_mean_covariance([A, B])
    np.testing.assert_allclose(G, G.T, atol=0)
    assert np.linalg.eigvalsh(G)[0] > 0
    # determinant is the geometric mean of the determinants
    assert np.linalg.det(G) == pytest.approx(math.sqrt(np.linalg.det(A) * np.linalg.det(B)), rel=1e-9)
    # inverse-equivariant
    Gi = geometric_mean_covariance([np.linalg.inv(A), np.linalg.inv(B)])
    np.testing.assert_allclose(Gi, np.linalg.inv(G), rtol=1e-9, atol=1e-9)


def test_matrix_errors():
    with pytest.raises(NotSpd):
        spd_log(np.diag([1.0, -1.0]))
    with pytest.raises(NotSpd):
        spd_log(np.array([[1.0, 0.5], [0.0, 1.0]]))
    with pytest.raises(DimensionMismatch):
        geometric_mean_covariance([np.eye(2), np.eye(3)])
    with pytest.raises(DimensionMismatch):
        geometric_mean_covariance([np.eye(65)])
    with pytest.raises(InvalidArgument):
        geometric_mean_covariance([])


def test_covariance_bound():
    assert covariance_deviation_bound(10, 2, 1, 5, 0.0) == 1.0
    assert covariance_deviation_bound(1000, 2, 1, math.e, 0.5) == pytest.approx(8 * math.exp(-62.5), rel=1e-13)
    with pytest.raises(InvalidArgument):
        covariance_deviation_bound(10, 2, 0, 5, 1.0)


# psi-median

def test_psi_median_examples():
    assert psi_median([1.0, 10.0, 100.0], Log()) == 10.0
    assert psi_median([1.0, 100.0], Log()) == pytest.approx(10.0, rel=1e-15)
    assert psi_median([1.0, 100.0], Identity()) == 50.5
    assert psi_median([3.7], BoxCox(0.5)) == 3.7
    assert psi_median(EmpiricalMeasure.from_samples([5.0, 1.0, 2.0]), Log()) == 2.0
    with pytest.raises(EmptySample):
        psi_median([], Log())


@given(st.lists(st.floats(1e-6, 1 - 1e-6), min_size=1, max_size=99).filter(lambda v: len(v) % 2 == 1),
       st.sampled_from([Log(), Logit(), BoxCox(0.5)]))
def test_psi_median_equals_median_for_odd_sizes(x, t):
    assert psi_median(x, t) == np.median(x)
