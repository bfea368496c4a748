"""Hoeffding-type constants and tail bounds in arbitrary coordinates.

All two-sided ``2 exp(...)`` bounds are capped at 1.  A zero denominator
(every range degenerate) means a point mass: the bound is 1 at t = 0 and 0
for t > 0.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

from .diffeo import CoordinateTransform, Identity, Log
from .errors import DomainError, InvalidArgument
from .measure import SupportInterval, as_interval

E_SQUARED = math.exp(2.0)

# Reference values published alongside the improvement factor, keyed by b/a.
CLAIMED_IMPROVEMENT = {E_SQUARED: 1.0, 100.0: 144.0, 1000.0: 21000.0}


def _capped_exp(prefactor: float, t: float, denom: float) -> float:
    """min(1, prefactor * exp(-t**2 / denom)) with the point-mass convention."""
    if t < 0 or math.isnan(t):
        raise InvalidArgument("deviation t must be >= 0")
    if t == 0:
        return 1.0
    if denom == 0:
        return 0.0
    return min(1.0, prefactor * math.exp(-t * t / denom))


def _positive(iv: SupportInterval) -> SupportInterval:
    if iv.a <= 0:
        raise DomainError(f"interval [{iv.a}, {iv.b}] must have a > 0")
    return iv


@dataclass(frozen=True)
class TailBoundReport:
    """A sub-Gaussian tail bound t -> min(1, prefactor * exp(-t^2 / (2 sigma_sq)))."""

    name: str
    sigma_sq: float
    transform: CoordinateTransform
    prefactor: float = 2.0
    assumptions: tuple = field(default_factory=tuple)

    def bound_at(self, t: float) -> float:
        return _capped_exp(self.prefactor, t, 2.0 * self.sigma_sq)

    @property
    def formula(self) -> str:
        return f"min(1, {self.prefactor:g} exp(-t^2 / (2 * {self.sigma_sq:.6g})))"


def hoeffding_constant(t: CoordinateTransform, iv) -> float:
    """(psi(b) - psi(a))^2 / 4, the extremal sub-Gaussian parameter on [a, b]."""
    iv = as_interval(iv)
    d = t.forward(iv.b) - t.forward(iv.a)
    return d * d / 4.0


def hoeffding_report(t: CoordinateTransform, iv, n: int = 1) -> TailBoundReport:
    """Two-sided bound for a sum of ``n`` independent psi(X_i), X_i in iv."""
    iv = as_interval(iv)
    if n < 1:
        raise InvalidArgument("n must be >= 1")
    return TailBoundReport(
        name=f"hoeffding[{t.label}]",
        sigma_sq=n * hoeffding_constant(t, iv),
        transform=t,
        assumptions=(
            f"X_i independent with values in [{iv.a:g}, {iv.b:g}]",
            f"statistic: sum of {t.label}(X_i) over {n} variables",
        ),
    )


def master_tail_bound(L: float, ranges: Sequence, t: float) -> float:
    """One-sided bound exp(-2 t^2 / (L^2 sum (b_i - a_i)^2)) for a function
    that is L-Lipschitz in psi-coordinates, given psi(X_i) in [a_i, b_i]."""
    if not L > 0:
        raise InvalidArgument("Lipschitz constant must be > 0")
    ivs = [as_interval(r) for r in ranges]
    if not ivs:
        raise InvalidArgument("need at least one range")
    s = math.fsum(iv.width ** 2 for iv in ivs)
    return _capped_exp(1.0, t, L * L * s / 2.0)


def improvement_factor(iv) -> float:
    """rho(a, b) = (b - a)^2 / log(b / a)^2."""
    iv = _positive(as_interval(iv))
    if iv.degenerate:
        raise DomainError("improvement factor needs a < b")
    return iv.width ** 2 / math.log(iv.b / iv.a) ** 2


def claimed_improvement(r: float, rel_tol: float = 1e-6):
    """Published reference value for ratio ``r``, or None."""
    for key, val in CLAIMED_IMPROVEMENT.items():
        if math.isclose(r, key, rel_tol=rel_tol):
            return val
    return None


@dataclass(frozen=True)
class Recommendation:
    """Identity-vs-log comparison on a positive interval.

    ``choice`` follows the formula: log wins iff the normalised ratio
    ((r - 1) / log r)^2 exceeds 1, which is every r > 1.  ``threshold_choice``
    applies the published cut-off r > e^2 instead; both are kept so callers
    can see where they disagree.
    """

    choice: CoordinateTransform
    ratio: float
    identity_constant: float
    log_constant: float
    raw_ratio: float
    threshold_choice: CoordinateTransform
    stated_threshold: float = E_SQUARED


def recommend_coordinate(iv) -> Recommendation:
    iv = _positive(as_interval(iv))
    if iv.degenerate:
        raise DomainError("recommendation needs a < b")
    r = iv.b / iv.a
    ratio = ((r - 1.0) / math.log(r)) ** 2
    id_c = hoeffding_constant(Identity(), iv)
    log_c = hoeffding_constant(Log(), iv)
    return Recommendation(
        choice=Log() if ratio > 1.0 else Identity(),
        ratio=ratio,
        identity_constant=id_c,
        log_constant=log_c,
        raw_ratio=id_c / log_c,
        threshold_choice=Log() if r > E_SQUARED else Identity(),
    )


def product_tail_bound(ivs: Sequence, t: float) -> tuple[float, float]:
    """Two-sided bounds on |log P_n - E log P_n| >= t for P_n = prod X_i.

    Returns ``(log_bound, classical_bound)`` with denominators
    sum log^2(b_i/a_i) and sum (b_i - a_i)^2 / a_i^2 respectively.
    """
    ivs = [_positive(as_interval(iv)) for iv in ivs]
    if not ivs:
        raise InvalidArgument("need at least one interval")
    s_log = math.fsum(math.log(iv.b / iv.a) ** 2 for iv in ivs)
    s_cls = math.fsum((iv.width / iv.a) ** 2 for iv in ivs)
    return _capped_exp(2.0, t, s_log / 2.0), _capped_exp(2.0, t, s_cls / 2.0)


def max_tail_bound(n: int, iv, t: float, mode: str = "identity") -> float:
    """Published upper-tail bound for the maximum of ``n`` i.i.d. variables:
    exp(-2 n t^2 / w^2) with w = b - a (identity) or log(b/a) (log),
    deviation measured from the median.

    This is the formula as stated; a bounded-differences argument only
    supports ``n`` in the denominator (see :func:`max_tail_bound_mcdiarmid`).
    """
    iv = as_interval(iv)
    if n < 1:
        raise InvalidArgument("n must be >= 1")
    w = _width(iv, mode)
    return _capped_exp(1.0, t, w * w / (2.0 * n))


def max_tail_bound_mcdiarmid(n: int, iv, t: float, mode: str = "identity") -> float:
    """exp(-2 t^2 / (n w^2)): the bounded-differences bound for the maximum."""
    iv = as_interval(iv)
    if n < 1:
        raise InvalidArgument("n must be >= 1")
    w = _width(iv, mode)
    return _capped_exp(1.0, t, n * w * w / 2.0)


def _width(iv: SupportInterval, mode: str) -> float:
    mode = mode.lower()
    if mode == "identity":
        return iv.width
    if mode == "log":
        _positive(iv)
        return math.log(iv.b / iv.a)
    raise InvalidArgument(f"mode must be 'identity' or 'log', got {mode!r}")

