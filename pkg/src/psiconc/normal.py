"""Standard normal CDF and quantile function.

``norm_cdf`` goes through the complementary error function.  ``norm_ppf``
uses Acklam's rational approximation (relative error about 1.15e-9) followed
by one Halley step against ``norm_cdf``, which brings the error down to a
few ulps over the whole open unit interval.
"""

import math

import numpy as np
from scipy.special import erfc

_SQRT2 = math.sqrt(2.0)
_SQRT2PI = math.sqrt(2.0 * math.pi)

# Acklam's coefficients
_A = (-3.969683028665376e01, 2.209460984245205e02, -2.759285104469687e02,
      1.383577518672690e02, -3.066479806614716e01, 2.506628277459239e00)
_B = (-5.447609879822406e01, 1.615858368580409e02, -1.556989798598866e02,
      6.680131188771972e01, -1.328068155288572e01)
_C = (-7.784894002430293e-03, -3.223964580411365e-01, -2.400758277161838e00,
      -2.549732539343734e00, 4.374664141464968e00, 2.938163982698783e00)
_D = (7.784695709041462e-03, 3.224671290700398e-01, 2.445134137142996e00,
      3.754408661907416e00)
_P_LOW = 0.02425


def _scalar_or_array(x, out):
    return float(out) if np.ndim(x) == 0 else out


def norm_cdf(x):
    """Phi(x) = erfc(-x / sqrt 2) / 2."""
    xa = np.asarray(x, dtype=float)
    return _scalar_or_array(x, 0.5 * erfc(-xa / _SQRT2))


def _acklam(p):
    q = np.empty_like(p)
    lo = p < _P_LOW
    hi = p > 1.0 - _P_LOW
    mid = ~(lo | hi)

    if mid.any():
        pm = p[mid] - 0.5
        r = pm * pm
        num = (((((_A[0] * r + _A[1]) * r + _A[2]) * r + _A[3]) * r + _A[4]) * r + _A[5]) * pm
        den = ((((_B[0] * r + _B[1]) * r + _B[2]) * r + _B[3]) * r + _B[4]) * r + 1.0
        q[mid] = num / den
    for mask, sign, tail in ((lo, 1.0, p), (hi, -1.0, 1.0 - p)):
        if mask.any():
            s = np.sqrt(-2.0 * np.log(tail[mask]))
            num = ((((_C[0] * s + _C[1]) * s + _C[2]) * s + _C[3]) * s + _C[4]) * s + _C[5]
            den = (((_D[0] * s + _D[1]) * s + _D[2]) * s + _D[3]) * s + 1.0
            q[mask] = sign * num / den
    return q


def norm_ppf(p):
    """Inverse of :func:`norm_cdf` on (0, 1); returns -inf/inf at 0/1."""
    pa = np.atleast_1d(np.asarray(p, dtype=float))
    if np.any(np.isnan(pa)) or np.any((pa < 0.0) | (pa > 1.0)):
        raise ValueError("probabilities must lie in [0, 1]")
    out = np.empty_like(pa)
    inner = (pa > 0.0) & (pa < 1.0)
    out[pa == 0.0] = -np.inf
    out[pa == 1.0] = np.inf
    if inner.any():
        pi = pa[inner]
        x = _acklam(pi)
        # one Halley step; work with the smaller tail to avoid cancellation
        upper = pi > 0.5
        e = np.where(upper, 0.5 * erfc(x / _SQRT2) - (1.0 - pi), norm_cdf(x) - pi)
        e = np.where(upper, -e, e)
        u = e * _SQRT2PI * np.exp(0.5 * x * x)
        out[inner] = x - u / (1.0 + 0.5 * x * u)
    return _scalar_or_array(p, out.reshape(np.shape(p)))
