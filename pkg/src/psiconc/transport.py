"""psi-Wasserstein distances between weighted empirical measures on the line.

In one dimension the monotone (quantile) coupling is optimal for every
convex cost, so W_p(psi_* mu, psi_* nu) is an integral over u in (0, 1) of
|Q_mu(u) - Q_nu(u)|^p with both quantile functions taken after pushing the
atoms through psi.  Quantile functions of empirical measures are step
functions; integrating over the merged breakpoints is exact.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .diffeo import CoordinateTransform, EmpiricalGaussianizer, Identity, gaussianize, push
from .errors import InvalidArgument
from .measure import EmpiricalMeasure


def _cumulative(w: np.ndarray) -> np.ndarray:
    c = np.cumsum(w)
    c[-1] = 1.0
    return c


@dataclass(frozen=True)
class Coupling1D:
    """Monotone coupling of two measures as blocks (u_lo, u_hi, x, y):
    mass u_hi - u_lo moves from atom x of ``left`` to atom y of ``right``."""

    left: EmpiricalMeasure
    right: EmpiricalMeasure

    def blocks(self):
        cl, cr = _cumulative(self.left.weights), _cumulative(self.right.weights)
        u = np.union1d(cl, cr)
        u_lo = np.concatenate([[0.0], u[:-1]])
        keep = u > u_lo
        u, u_lo = u[keep], u_lo[keep]
        # the atom whose cumulative interval contains the block
        il = np.minimum(np.searchsorted(cl, u, side="left"), cl.size - 1)
        ir = np.minimum(np.searchsorted(cr, u, side="left"), cr.size - 1)
        return u_lo, u, self.left.points[il], self.right.points[ir]

    def cost(self, p: float) -> float:
        u_lo, u_hi, x, y = self.blocks()
        return float(np.dot(u_hi - u_lo, np.abs(x - y) ** p))


def wasserstein_1d(mu: EmpiricalMeasure, nu: EmpiricalMeasure, p: float = 1.0) -> float:
    if not p >= 1:
        raise InvalidArgument("p must be >= 1")
    c = Coupling1D(mu, nu).cost(p)
    return c if p == 1 else c ** (1.0 / p)


def psi_wasserstein(mu: EmpiricalMeasure, nu: EmpiricalMeasure,
                    t: CoordinateTransform | None = None, p: float = 1.0) -> float:
    """W_p between the pushforwards of ``mu`` and ``nu`` through ``t``."""
    if not p >= 1:
        raise InvalidArgument("p must be >= 1")
    t = t or Identity()
    return wasserstein_1d(push(mu, t), push(nu, t), p)


@dataclass(frozen=True)
class T2Result:
    shift: float
    lhs: float
    rhs: float
    holds: bool
    empirical_lhs: float | None = None
    mc_gap: float | None = None


def t2_check(shift: float, n_report: int = 0, seed: int = 0,
             gaussianizer: EmpiricalGaussianizer | None = None) -> T2Result:
    """Transport-entropy inequality W_2 <= sqrt(2 KL) for a Gaussian shift.

    In coordinates where the reference is N(0, 1) and the other law is
    N(shift, 1), both sides are closed form: W_2 = |shift| and
    KL = shift^2 / 2, so the inequality is tight.

    With ``n_report > 0`` the same comparison is made on data: ``n_report``
    draws from the reference pulled back through the Gaussianizer (fitted
    on log-normal data unless one is supplied) and ``n_report`` draws of
    the shifted law, compared under psi-W_2.  ``mc_gap`` is the empirical
    distance minus |shift|.
    """
    shift = float(shift)
    lhs = math.sqrt(shift * shift)
    kl = shift * shift / 2.0
    rhs = math.sqrt(2.0 * kl)
    res = T2Result(shift, lhs, rhs, lhs <= rhs + 1e-12)
    if n_report <= 0:
        return res

    rng = np.random.default_rng(seed)
    if gaussianizer is None:
        fit = np.exp(rng.standard_normal(max(n_report, 10)))
        gaussianizer = gaussianize(EmpiricalMeasure.from_samples(fit))
    z_ref = rng.standard_normal(n_report)
    z_alt = rng.standard_normal(n_report) + shift
    mu = EmpiricalMeasure.from_samples(gaussianizer.inverse(z_ref))
    nu = EmpiricalMeasure.from_samples(gaussianizer.inverse(z_alt))
    emp = psi_wasserstein(nu, mu, gaussianizer, 2.0)
    return T2Result(shift, lhs, rhs, res.holds, emp, emp - lhs)
