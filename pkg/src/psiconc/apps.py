"""Applications: log-linear regression, log-return bounds, geometric-mean
covariance and the psi-median."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy.linalg import cho_factor, cho_solve

from .diffeo import CoordinateTransform
from .errors import (DimensionMismatch, EmptySample, InvalidArgument, NonPositiveResponse,
                     NotSpd, NumericalError, RankDeficient)
from .measure import EmpiricalMeasure


# multiplicative regression

@dataclass(frozen=True)
class LogLinearFit:
    beta_hat: np.ndarray
    sigma_sq_hat: float
    lambda_min: float


def log_linear_fit(X, y) -> LogLinearFit:
    """Least squares of log y on X through the Cholesky factor of X^T X.

    ``sigma_sq_hat`` is the residual variance with divisor n - p (0 when
    n == p); ``lambda_min`` is the smallest eigenvalue of X^T X / n.
    """
    X = np.asarray(X, dtype=float)
    if X.ndim == 1:
        X = X[:, None]
    y = np.asarray(y, dtype=float).reshape(-1)
    n, p = X.shape
    if y.size != n:
        raise DimensionMismatch(f"X has {n} rows but y has {y.size} entries")
    if n < p or p < 1:
        raise RankDeficient(f"need n >= p >= 1, got n={n}, p={p}")
    if np.any(~(y > 0)):
        raise NonPositiveResponse("all responses must be > 0")
    gram = X.T @ X
    lam_min = float(np.linalg.eigvalsh(gram / n)[0])
    if lam_min <= 1e-10:
        raise RankDeficient(f"smallest eigenvalue of X^T X / n is {lam_min:.3g}")
    ly = np.log(y)
    beta = cho_solve(cho_factor(gram), X.T @ ly)
    resid = ly - X @ beta
    s2 = float(resid @ resid) / (n - p) if n > p else 0.0
    return LogLinearFit(beta, s2, lam_min)


def regression_deviation_bound(p: int, n: int, lambda_min: float, sigma_sq: float, t: float) -> float:
    """min(1, 2p exp(-n t^2 lambda_min / (2 sigma^2)))."""
    if p < 1 or n < 1 or not lambda_min > 0 or not sigma_sq > 0 or not t >= 0:
        raise InvalidArgument("need p, n >= 1, lambda_min > 0, sigma_sq > 0, t >= 0")
    if t == 0:
        return 1.0
    return min(1.0, 2.0 * p * math.exp(-n * t * t * lambda_min / (2.0 * sigma_sq)))


# log-return concentration

def portfolio_bound(delta: float, n: int, t: float, sigma_log_sq: float | None = None):
    """Bound on P(log W_n - n E log R >= t sqrt n) for returns in [1 - delta, 1 + delta].

    Returns ``(bound, sigma_cap)`` where sigma_cap = delta^2 / (1 - delta)^2
    caps Var(log R); the supplied variance is used when given, else the cap.
    """
    if not 0 < delta < 1:
        raise InvalidArgument("delta must lie in (0, 1)")
    if n < 1 or not t >= 0:
        raise InvalidArgument("need n >= 1 and t >= 0")
    cap = delta * delta / ((1.0 - delta) ** 2)
    if sigma_log_sq is None:
        s2 = cap
    else:
        if not sigma_log_sq > 0 or sigma_log_sq > cap + 1e-12:
            raise InvalidArgument(f"sigma_log_sq must lie in (0, {cap:.6g}]")
        s2 = sigma_log_sq
    bound = 1.0 if t == 0 else min(1.0, math.exp(-t * t / (2.0 * s2)))
    return bound, cap


# matrix functions through a cyclic Jacobi eigensolver

def jacobi_eigh(M, tol: float = 1e-12, max_sweeps: int = 100):
    """Eigen-decomposition of a symmetric matrix by cyclic Jacobi rotations.

    Sweeps until the off-diagonal Frobenius norm is at most
    ``tol * ||M||_F``.  Returns ``(eigenvalues, eigenvectors)`` with
    eigenvalues ascending and eigenvectors as columns.
    """
    A = np.array(M, dtype=float)
    d = A.shape[0]
    if A.ndim != 2 or A.shape[1] != d:
        raise DimensionMismatch("matrix must be square")
    V = np.eye(d)
    scale = np.linalg.norm(A)
    target = tol * scale
    for _ in range(max_sweeps):
        off = float(np.linalg.norm(A - np.diag(np.diag(A))))
        if off <= target:
            break
        for p in range(d - 1):
            for q in range(p + 1, d):
                apq = A[p, q]
                if apq == 0.0:
                    continue
                theta = (A[q, q] - A[p, p]) / (2.0 * apq)
                t = math.copysign(1.0, theta) / (abs(theta) + math.sqrt(theta * theta + 1.0))
                c = 1.0 / math.sqrt(t * t + 1.0)
                s = t * c
                # A <- J^T A J with J the (p, q) rotation
                ap, aq = A[:, p].copy(), A[:, q].copy()
                A[:, p], A[:, q] = c * ap - s * aq, s * ap + c * aq
                ap, aq = A[p, :].copy(), A[q, :].copy()
                A[p, :], A[q, :] = c * ap - s * aq, s * ap + c * aq
                A[p, q] = A[q, p] = 0.0
                vp, vq = V[:, p].copy(), V[:, q].copy()
                V[:, p], V[:, q] = c * vp - s * vq, s * vp + c * vq
    else:
        raise NumericalError(f"Jacobi did not converge in {max_sweeps} sweeps")
    w = np.diag(A).copy()
    order = np.argsort(w)
    return w[order], V[:, order]


def _check_spd(S, d=None) -> np.ndarray:
    S = np.asarray(S, dtype=float)
    if S.ndim != 2 or S.shape[0] != S.shape[1]:
        raise DimensionMismatch("matrices must be square")
    if d is not None and S.shape[0] != d:
        raise DimensionMismatch(f"expected {d}x{d}, got {S.shape}")
    if not np.all(np.isfinite(S)) or np.max(np.abs(S - S.T)) > 1e-12 * max(1.0, np.max(np.abs(S))):
        raise NotSpd("matrix is not symmetric")
    return S


def _apply(S, fn, check_positive=False):
    w, V = jacobi_eigh(0.5 * (S + S.T))
    if check_positive and w[0] <= 0:
        raise NotSpd(f"matrix has non-positive eigenvalue {w[0]:.3g}")
    out = (V * fn(w)) @ V.T
    return 0.5 * (out + out.T)


def spd_log(S) -> np.ndarray:
    return _apply(_check_spd(S), np.log, check_positive=True)


def sym_exp(S) -> np.ndarray:
    return _apply(_check_spd(S), np.exp)


def geometric_mean_covariance(mats: Sequence) -> np.ndarray:
    """exp of the average matrix logarithm of SPD matrices.

    >>> geometric_mean_covariance([np.diag([1.0, 4.0]), np.diag([4.0, 1.0])]).round(12)
    array([[2., 0.],
           [0., 2.]])
    """
    mats = list(mats)
    if not mats:
        raise InvalidArgument("need at least one matrix")
    first = _check_spd(mats[0])
    d = first.shape[0]
    if d > 64:
        raise DimensionMismatch("dimension limited to 64")
    logs = [spd_log(_check_spd(S, d)) for S in mats]
    return sym_exp(sum(logs) / len(logs))


def covariance_deviation_bound(n: int, d: int, a: float, b: float, t: float) -> float:
    """min(1, 2 d^2 exp(-n t^2 / (2 d log^2(b/a))))."""
    if n < 1 or d < 1 or not 0 < a < b or not t >= 0:
        raise InvalidArgument("need n, d >= 1, 0 < a < b and t >= 0")
    if t == 0:
        return 1.0
    return min(1.0, 2.0 * d * d * math.exp(-n * t * t / (2.0 * d * math.log(b / a) ** 2)))


# robust location

def psi_median(samples, t: CoordinateTransform) -> float:
    """psi^{-1}(median of psi(x_i)); even sizes use the midpoint of the two
    middle transformed values."""
    x = samples.points if isinstance(samples, EmpiricalMeasure) else np.asarray(samples, dtype=float)
    x = np.asarray(x, dtype=float).reshape(-1)
    if x.size == 0:
        raise EmptySample("psi-median of an empty sample")
    y = t.forward(x)
    order = np.argsort(y, kind="stable")
    n = y.size
    if n % 2:
        # psi^{-1}(psi(x_k)) is x_k itself; skip the lossy round trip
        return float(x[order[n // 2]])
    mid = 0.5 * (y[order[n // 2 - 1]] + y[order[n // 2]])
    return float(t.inverse(mid))
