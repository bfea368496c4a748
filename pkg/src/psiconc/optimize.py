"""Concentration functional and data-driven coordinate selection.

Two deterministic estimators of the sub-Gaussian parameter of psi(X) under
an empirical measure are provided:

``RANGE``
    (max psi(x) - min psi(x))^2 / 4, exact for the two-point extremal law.
``MGF``
    max over a signed log-spaced lambda grid of 2 log M(lambda) / lambda^2,
    with M the centred empirical moment generating function.  The grid is
    expressed in units of 1 / range so the estimate scales by alpha^2 under
    psi -> alpha psi + beta.

Selection compares candidates through the ratio of the estimate to the
variance of psi(X), which is invariant under affine rescaling of psi.  The
raw parameter is not: shrinking psi shrinks it, so a raw argmin over the
Box-Cox path always drifts to the most compressive lambda.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from enum import Enum
from typing import Sequence

import numpy as np

from .diffeo import AffineOf, BoxCox, CoordinateTransform, Identity, Log, Logit
from .errors import DomainError, EmptyGrid, InvalidArgument, UnknownFamily
from .measure import EmpiricalMeasure, SupportInterval, as_interval


class Estimator(str, Enum):
    RANGE = "range"
    MGF = "mgf"


RangeBased = Estimator.RANGE
MgfGrid = Estimator.MGF

_U = np.logspace(-2.0, 2.0, 41)
MGF_GRID = np.concatenate([-_U[::-1], _U])
"""Dimensionless lambda * range values scanned by the MGF estimator."""

BOXCOX_GRID = (-1.0, -0.5, 0.0, 0.5, 1.0, 2.0)
GOLDEN_ITERATIONS = 20
TIE_TOL = 1e-12


def _transformed(m: EmpiricalMeasure, t: CoordinateTransform):
    y = t.forward(m.points)
    order = np.lexsort((m.weights, y))
    return y[order], m.weights[order]


def _mgf_sup(z: np.ndarray, w: np.ndarray, spread: float) -> float:
    best = 0.0
    for g in MGF_GRID:
        lam = g / spread
        lz = lam * z
        # sum w (e^{lz} - 1 - lz) avoids cancellation for small lambda
        s = float(np.dot(w, np.expm1(lz) - lz))
        v = 2.0 * math.log1p(s) / (lam * lam)
        if v > best:
            best = v
    return best


def _functional_and_variance(m, t, estimator):
    estimator = Estimator(estimator)
    # both quantities ignore shifts and scale by alpha^2, so affine wrappers
    # are applied analytically rather than through alpha * psi + beta, which
    # cancels badly when beta dominates the spread
    scale = 1.0
    while isinstance(t, AffineOf):
        t.forward(m.points)  # domain check on the full transform
        scale *= t.alpha * t.alpha
        t = t.inner
    y, w = _transformed(m, t)
    spread = float(y[-1] - y[0])
    if spread == 0.0:
        return 0.0, 0.0
    z = y - float(np.dot(w, y))
    var = float(np.dot(w, z * z))
    if estimator is Estimator.RANGE:
        return scale * (spread * spread / 4.0), scale * var
    return scale * float(_mgf_sup(z, w, spread)), scale * var


def concentration_functional(m: EmpiricalMeasure, t: CoordinateTransform,
                             estimator=Estimator.MGF) -> float:
    """Estimated sub-Gaussian parameter of psi(X), X ~ m.

    >>> m = EmpiricalMeasure.from_samples([1.0, math.exp(4.0)])
    >>> concentration_functional(m, Log(), "range")
    4.0
    """
    return _functional_and_variance(m, t, estimator)[0]


def sub_gaussian_ratio(m: EmpiricalMeasure, t: CoordinateTransform,
                       estimator=Estimator.MGF) -> float:
    """concentration_functional / variance of psi(X); 0 for a point mass."""
    f, var = _functional_and_variance(m, t, estimator)
    return 0.0 if var == 0.0 else f / var


def _valid_on(t: CoordinateTransform, iv: SupportInterval) -> bool:
    return iv.a in t.domain and iv.b in t.domain


@dataclass(frozen=True)
class TransformGrid:
    """Finite candidate set.  With ``refine`` set, the best Box-Cox grid
    point is polished by golden-section search inside its bracketing cell."""

    candidates: tuple
    domain_filter: SupportInterval
    refine: bool = True

    def __post_init__(self):
        object.__setattr__(self, "candidates", tuple(self.candidates))
        object.__setattr__(self, "domain_filter", as_interval(self.domain_filter))
        if not self.candidates:
            raise EmptyGrid("transform grid has no candidates")
        for c in self.candidates:
            if not _valid_on(c, self.domain_filter):
                raise DomainError(f"{c.label} is not defined on [{self.domain_filter.a}, {self.domain_filter.b}]")

    @classmethod
    def default(cls, support, refine: bool = True) -> "TransformGrid":
        iv = as_interval(support)
        cands: list[CoordinateTransform] = [Identity()]
        if iv.a > 0:
            cands.append(Log())
        if iv.a > 0 and iv.b < 1:
            cands.append(Logit())
        cands.extend(BoxCox(lam) for lam in BOXCOX_GRID
                     if iv.a > 0 or (iv.a == 0 and lam >= 1.0))
        return cls(tuple(cands), iv, refine)

    @classmethod
    def for_measures(cls, ms: Sequence[EmpiricalMeasure], refine: bool = True) -> "TransformGrid":
        lo = min(float(m.points[0]) for m in ms)
        hi = max(float(m.points[-1]) for m in ms)
        return cls.default(SupportInterval(lo, hi), refine)


def tie_key(t: CoordinateTransform):
    """Preference order among equal values: identity, log, then smallest |lambda|."""
    b = t.base
    if isinstance(b, Identity):
        return (0, 0.0)
    if isinstance(b, Log):
        return (1, 0.0)
    if isinstance(b, BoxCox):
        return (2, abs(b.lam))
    return (3, 0.0)


def boxcox_lambda(t: CoordinateTransform):
    """Box-Cox exponent equivalent to ``t`` up to an affine map, or None."""
    b = t.base
    if isinstance(b, Identity):
        return 1.0
    if isinstance(b, Log):
        return 0.0
    if isinstance(b, BoxCox):
        return b.lam
    return None


@dataclass(frozen=True)
class Selection:
    best: CoordinateTransform
    value: float
    table: list = field(default_factory=list)

    @property
    def lam_hat(self):
        return boxcox_lambda(self.best)


def _golden_section(f, lo: float, hi: float, iterations: int = GOLDEN_ITERATIONS) -> float:
    invphi = (math.sqrt(5.0) - 1.0) / 2.0
    c = hi - invphi * (hi - lo)
    d = lo + invphi * (hi - lo)
    fc, fd = f(c), f(d)
    for _ in range(iterations):
        if fc <= fd:
            hi, d, fd = d, c, fc
            c = hi - invphi * (hi - lo)
            fc = f(c)
        else:
            lo, c, fc = c, d, fd
            d = lo + invphi * (hi - lo)
            fd = f(d)
    return 0.5 * (lo + hi)


def _pick(rows):
    vmin = min(v for _, v in rows)
    tol = TIE_TOL * max(1.0, abs(vmin))
    tied = [(tie_key(t), i, t, v) for i, (t, v) in enumerate(rows) if v <= vmin + tol]
    _, _, t, v = min(tied, key=lambda r: (r[0], r[1]))
    return t, v


def select_optimal_transform(ms: Sequence[EmpiricalMeasure], grid: TransformGrid | None = None,
                             estimator=Estimator.MGF, normalize: bool = True,
                             workers: int = 1) -> Selection:
    """Argmin over the grid of the worst case over ``ms``.

    With ``normalize`` (the default) each candidate is scored by
    :func:`sub_gaussian_ratio`; otherwise by the raw functional.  Results
    are reduced in candidate order, so ``workers`` never changes the answer.
    """
    ms = list(ms)
    if not ms:
        raise InvalidArgument("need at least one measure")
    if grid is None:
        grid = TransformGrid.for_measures(ms)
    for m in ms:
        if not grid.domain_filter.contains(m.points):
            raise DomainError("measure support leaves the grid's domain filter")
    score = sub_gaussian_ratio if normalize else concentration_functional

    def worst(t):
        return max(score(m, t, estimator) for m in ms)

    if workers > 1:
        with ThreadPoolExecutor(workers) as ex:
            values = list(ex.map(worst, grid.candidates))
    else:
        values = [worst(t) for t in grid.candidates]
    rows = list(zip(grid.candidates, values))

    bc = sorted((t.lam, v) for t, v in rows if isinstance(t, BoxCox))
    if grid.refine and len(bc) >= 2:
        vmin = min(v for _, v in bc)
        k = min((i for i, (_, v) in enumerate(bc) if v <= vmin + TIE_TOL * max(1.0, vmin)),
                key=lambda i: abs(bc[i][0]))
        lo = bc[max(k - 1, 0)][0]
        hi = bc[min(k + 1, len(bc) - 1)][0]
        lam = _golden_section(lambda x: worst(BoxCox(x)), lo, hi)
        if all(lam != l for l, _ in bc):
            rows.append((BoxCox(lam), worst(BoxCox(lam))))

    best, value = _pick(rows)
    return Selection(best, value, rows)


# closed-form optimal coordinates for common families

def catalog_optimal(family: str, **params) -> CoordinateTransform:
    """Optimal coordinate for a named family.

    >>> catalog_optimal("beta", alpha=2, beta=3)
    Logit()
    """
    fam = family.strip().lower()
    if fam == "gaussian":
        return Identity()
    if fam in ("lognormal", "pareto"):
        return Log()
    if fam == "gamma":
        shape = params.get("shape")
        if shape is None or not shape > 0:
            raise InvalidArgument("gamma needs shape > 0")
        return BoxCox(0.5) if shape > 1 else Log()
    if fam == "beta":
        return Logit()
    if fam == "bounded_positive":
        r = params.get("r")
        if r is None and "a" in params and "b" in params:
            r = params["b"] / params["a"]
        if r is None or not r >= 1:
            raise InvalidArgument("bounded_positive needs ratio r = b/a >= 1")
        return Log() if r > math.exp(2.0) else Identity()
    raise UnknownFamily(family)


@dataclass(frozen=True)
class _Family:
    log_partition: object
    mean_map: object
    natural: object
    theta_ok: object
    param_ok: object


_FAMILIES = {
    "bernoulli": _Family(
        lambda th: math.log1p(math.exp(th)) if th < 30 else th + math.log1p(math.exp(-th)),
        lambda th: 1.0 / (1.0 + math.exp(-th)) if th >= 0 else math.exp(th) / (1.0 + math.exp(th)),
        lambda p: math.log(p) - math.log1p(-p),
        lambda th: math.isfinite(th),
        lambda p: 0.0 < p < 1.0,
    ),
    "poisson": _Family(
        math.exp, math.exp, math.log,
        lambda th: math.isfinite(th),
        lambda rate: rate > 0,
    ),
    "exponential": _Family(
        lambda th: -math.log(-th),
        lambda th: -1.0 / th,
        lambda rate: -rate,
        lambda th: th < 0,
        lambda rate: rate > 0,
    ),
    "gaussian": _Family(
        lambda th: 0.5 * th * th,
        lambda th: th,
        lambda mean: mean,
        lambda th: math.isfinite(th),
        lambda mean: math.isfinite(mean),
    ),
}


@dataclass(frozen=True)
class ExpFamilySpec:
    """One-parameter exponential family with its usual parameter
    (p, rate, rate, mean) and a connection index alpha in {-1, 0, 1}.
    The Gaussian member has unit variance."""

    family: str
    param: float | None = None
    alpha: int = 1

    def __post_init__(self):
        fam = self.family.strip().lower()
        if fam not in _FAMILIES:
            raise UnknownFamily(self.family)
        object.__setattr__(self, "family", fam)
        if self.alpha not in (-1, 0, 1):
            raise InvalidArgument("alpha must be -1, 0 or 1")
        if self.param is not None and not _FAMILIES[fam].param_ok(self.param):
            raise InvalidArgument(f"{fam} parameter {self.param} out of range")

    def natural_parameter(self) -> float:
        if self.param is None:
            raise InvalidArgument("spec has no parameter; pass theta explicitly")
        return _FAMILIES[self.family].natural(self.param)


def log_partition(family: str, theta: float) -> float:
    fam = _FAMILIES[family.lower()]
    if not fam.theta_ok(theta):
        raise DomainError(f"theta={theta} outside the natural parameter space of {family}")
    return fam.log_partition(theta)


def mean_parameter(family: str, theta: float) -> float:
    """Gradient of the log-partition function."""
    fam = _FAMILIES[family.lower()]
    if not fam.theta_ok(theta):
        raise DomainError(f"theta={theta} outside the natural parameter space of {family}")
    return fam.mean_map(theta)


def exp_family_coordinate(spec: ExpFamilySpec, theta: float | None = None) -> float:
    """theta (alpha=1), grad A(theta) (alpha=-1) or their average (alpha=0).

    ``theta`` defaults to the natural parameter of ``spec.param``.
    """
    if theta is None:
        theta = spec.natural_parameter()
    theta = float(theta)
    mu = mean_parameter(spec.family, theta)
    if spec.alpha == 1:
        return theta
    if spec.alpha == -1:
        return mu
    return 0.5 * (theta + mu)


def post_compose_all(grid: TransformGrid, alpha: float, beta: float) -> TransformGrid:
    """Same grid with every candidate wrapped in x -> alpha x + beta."""
    return TransformGrid(tuple(AffineOf(alpha, beta, c) for c in grid.candidates),
                         grid.domain_filter, refine=False)
