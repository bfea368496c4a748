"""Coordinate transforms: strictly monotone smooth maps between intervals.

Every transform supports scalar or array input for ``forward``, ``inverse``
and ``derivative`` and checks its argument against the domain (or image)
before evaluating.  Instances are immutable.

>>> forward(Log(), 1.0)
0.0
>>> inverse(BoxCox(2.0), 4.0)
3.0
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DegenerateData, DomainError, InsufficientData, InvalidArgument, RangeError
from .measure import EmpiricalMeasure
from .normal import norm_ppf

INF = math.inf


@dataclass(frozen=True)
class Interval:
    """Interval of the extended real line with per-end closedness."""

    lo: float = -INF
    hi: float = INF
    lo_closed: bool = False
    hi_closed: bool = False

    def mask(self, x: np.ndarray) -> np.ndarray:
        above = x >= self.lo if self.lo_closed else x > self.lo
        below = x <= self.hi if self.hi_closed else x < self.hi
        return above & below

    def __contains__(self, x) -> bool:
        return bool(np.all(self.mask(np.asarray(x, dtype=float))))

    def includes(self, other: "Interval") -> bool:
        """True when ``other`` is a subset of this interval."""
        lo_ok = other.lo > self.lo or (
            other.lo == self.lo and (self.lo_closed or not other.lo_closed or self.lo == -INF)
        )
        hi_ok = other.hi < self.hi or (
            other.hi == self.hi and (self.hi_closed or not other.hi_closed or self.hi == INF)
        )
        return lo_ok and hi_ok

    def __str__(self) -> str:
        return f"{'[' if self.lo_closed else '('}{self.lo:g}, {self.hi:g}{']' if self.hi_closed else ')'}"


REAL_LINE = Interval()
POSITIVE = Interval(0.0, INF)
UNIT = Interval(0.0, 1.0)


def _ret(x, y):
    return float(y) if np.ndim(x) == 0 else y


class CoordinateTransform:
    """Base class.  Subclasses implement ``_f``, ``_finv`` and ``_df`` on arrays."""

    domain: Interval = REAL_LINE
    image: Interval = REAL_LINE
    increasing: bool = True

    def _f(self, x):
        raise NotImplementedError

    def _finv(self, y):
        raise NotImplementedError

    def _df(self, x):
        raise NotImplementedError

    def _check_domain(self, x: np.ndarray):
        if np.any(np.isnan(x)) or not np.all(self.domain.mask(x)):
            bad = x[~self.domain.mask(x)] if x.ndim else x
            raise DomainError(f"{self.label}: {np.ravel(bad)[:3]} outside domain {self.domain}")

    def forward(self, x):
        xa = np.asarray(x, dtype=float)
        self._check_domain(xa)
        with np.errstate(divide="ignore"):
            return _ret(x, self._f(xa))

    def inverse(self, y):
        ya = np.asarray(y, dtype=float)
        if np.any(np.isnan(ya)) or not np.all(self.image.mask(ya)):
            raise RangeError(f"{self.label}: value outside image {self.image}")
        with np.errstate(divide="ignore", over="ignore"):
            return _ret(y, self._finv(ya))

    def derivative(self, x):
        xa = np.asarray(x, dtype=float)
        self._check_domain(xa)
        with np.errstate(divide="ignore"):
            return _ret(x, self._df(xa))

    @property
    def label(self) -> str:
        return type(self).__name__.lower()

    @property
    def base(self) -> "CoordinateTransform":
        """The transform with any affine wrappers removed."""
        return self


@dataclass(frozen=True)
class Identity(CoordinateTransform):
    def _f(self, x):
        return x + 0.0

    def _finv(self, y):
        return y + 0.0

    def _df(self, x):
        return np.ones_like(x)

    @property
    def label(self):
        return "identity"


@dataclass(frozen=True)
class Log(CoordinateTransform):
    domain = POSITIVE

    def _f(self, x):
        return np.log(x)

    def _finv(self, y):
        return np.exp(y)

    def _df(self, x):
        return 1.0 / x

    @property
    def label(self):
        return "log"


@dataclass(frozen=True)
class BoxCox(CoordinateTransform):
    """(x**lam - 1) / lam, and exactly ``log`` when ``lam == 0``.

    The domain is (0, inf) for lam < 1 and [0, inf) for lam >= 1.  Small
    |lam| goes through expm1/log1p to keep the limit towards log accurate.
    """

    lam: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, "lam", float(self.lam))
        if not math.isfinite(self.lam):
            raise InvalidArgument("Box-Cox lambda must be finite")

    @property
    def domain(self):
        return Interval(0.0, INF, lo_closed=self.lam >= 1.0)

    @property
    def image(self):
        lam = self.lam
        if lam > 0:
            return Interval(-1.0 / lam, INF, lo_closed=lam >= 1.0)
        if lam < 0:
            return Interval(-INF, -1.0 / lam)
        return REAL_LINE

    def _f(self, x):
        lam = self.lam
        if lam == 0.0:
            return np.log(x)
        if abs(lam) < 0.25:
            return np.expm1(lam * np.log(x)) / lam
        return (np.power(x, lam) - 1.0) / lam

    def _finv(self, y):
        lam = self.lam
        if lam == 0.0:
            return np.exp(y)
        if abs(lam) < 0.25:
            return np.exp(np.log1p(lam * y) / lam)
        return np.power(1.0 + lam * y, 1.0 / lam)

    def _df(self, x):
        if self.lam == 0.0:
            return 1.0 / x
        return np.power(x, self.lam - 1.0)

    @property
    def label(self):
        return f"boxcox:{self.lam:g}"


@dataclass(frozen=True)
class Logit(CoordinateTransform):
    domain = UNIT

    def _f(self, x):
        return np.log(x) - np.log1p(-x)

    def _finv(self, y):
        e = np.exp(-np.abs(y))
        return np.where(y >= 0, 1.0 / (1.0 + e), e / (1.0 + e))

    def _df(self, x):
        return 1.0 / (x * (1.0 - x))

    @property
    def label(self):
        return "logit"


@dataclass(frozen=True)
class Arctan(CoordinateTransform):
    image = Interval(-math.pi / 2, math.pi / 2)

    def _f(self, x):
        return np.arctan(x)

    def _finv(self, y):
        return np.tan(y)

    def _df(self, x):
        return 1.0 / (1.0 + x * x)

    @property
    def label(self):
        return "arctan"


def _map_interval(t: CoordinateTransform, src: Interval) -> Interval:
    """Image of ``src`` (a subset of t's domain) under the monotone map t."""
    ends = []
    for e, closed, dom_e, dom_closed in (
        (src.lo, src.lo_closed, t.domain.lo, t.domain.lo_closed),
        (src.hi, src.hi_closed, t.domain.hi, t.domain.hi_closed),
    ):
        if math.isinf(e) or (e == dom_e and not dom_closed):
            is_lo_end = e == t.domain.lo
            img_end = t.image.lo if (is_lo_end == t.increasing) else t.image.hi
            ends.append((img_end, False))
        else:
            with np.errstate(divide="ignore"):
                ends.append((float(t._f(np.asarray(e))), closed))
    (v0, c0), (v1, c1) = ends
    if not t.increasing:
        (v0, c0), (v1, c1) = (v1, c1), (v0, c0)
    return Interval(v0, v1, c0, c1)


@dataclass(frozen=True)
class AffineOf(CoordinateTransform):
    """x -> alpha * inner(x) + beta, alpha nonzero."""

    alpha: float = 1.0
    beta: float = 0.0
    inner: CoordinateTransform = field(default_factory=Identity)

    def __post_init__(self):
        object.__setattr__(self, "alpha", float(self.alpha))
        object.__setattr__(self, "beta", float(self.beta))
        if self.alpha == 0.0 or not math.isfinite(self.alpha) or not math.isfinite(self.beta):
            raise InvalidArgument("affine map needs finite alpha != 0 and finite beta")

    @property
    def domain(self):
        return self.inner.domain

    @property
    def increasing(self):
        return (self.alpha > 0) == self.inner.increasing

    @property
    def image(self):
        img = self.inner.image
        lo, hi = self.alpha * img.lo + self.beta, self.alpha * img.hi + self.beta
        if self.alpha > 0:
            return Interval(lo, hi, img.lo_closed, img.hi_closed)
        return Interval(hi, lo, img.hi_closed, img.lo_closed)

    def _f(self, x):
        return self.alpha * self.inner._f(x) + self.beta

    def _finv(self, y):
        return self.inner._finv((y - self.beta) / self.alpha)

    def _df(self, x):
        return self.alpha * self.inner._df(x)

    @property
    def label(self):
        return f"affine({self.alpha:g},{self.beta:g},{self.inner.label})"

    @property
    def base(self):
        return self.inner.base


@dataclass(frozen=True)
class Composed(CoordinateTransform):
    """outer(inner(x)); build with :func:`compose`, which checks compatibility."""

    outer: CoordinateTransform
    inner: CoordinateTransform

    @property
    def domain(self):
        return self.inner.domain

    @property
    def increasing(self):
        return self.outer.increasing == self.inner.increasing

    @property
    def image(self):
        return _map_interval(self.outer, self.inner.image)

    def _f(self, x):
        return self.outer._f(self.inner._f(x))

    def _finv(self, y):
        return self.inner._finv(self.outer._finv(y))

    def _df(self, x):
        return self.outer._df(self.inner._f(x)) * self.inner._df(x)

    @property
    def label(self):
        return f"{self.outer.label}∘{self.inner.label}"


@dataclass(frozen=True, eq=False)
class EmpiricalGaussianizer(CoordinateTransform):
    """Piecewise-linear monotone map through ``knots``, extended linearly
    beyond the end knots with the end-segment slopes."""

    knots_x: np.ndarray
    knots_y: np.ndarray

    def __post_init__(self):
        kx = np.array(self.knots_x, dtype=float).reshape(-1)
        ky = np.array(self.knots_y, dtype=float).reshape(-1)
        if kx.size < 2 or kx.shape != ky.shape:
            raise InvalidArgument("need at least two knots of matching length")
        if np.any(np.diff(kx) <= 0) or np.any(np.diff(ky) <= 0):
            raise InvalidArgument("knots must be strictly increasing in both coordinates")
        kx.setflags(write=False)
        ky.setflags(write=False)
        object.__setattr__(self, "knots_x", kx)
        object.__setattr__(self, "knots_y", ky)

    @staticmethod
    def _pl(x, xs, ys):
        out = np.interp(x, xs, ys)
        lo_slope = (ys[1] - ys[0]) / (xs[1] - xs[0])
        hi_slope = (ys[-1] - ys[-2]) / (xs[-1] - xs[-2])
        out = np.where(x < xs[0], ys[0] + lo_slope * (x - xs[0]), out)
        return np.where(x > xs[-1], ys[-1] + hi_slope * (x - xs[-1]), out)

    def _f(self, x):
        return self._pl(x, self.knots_x, self.knots_y)

    def _finv(self, y):
        return self._pl(y, self.knots_y, self.knots_x)

    def _df(self, x):
        kx, ky = self.knots_x, self.knots_y
        seg = np.clip(np.searchsorted(kx, x, side="right") - 1, 0, kx.size - 2)
        return (ky[seg + 1] - ky[seg]) / (kx[seg + 1] - kx[seg])

    @property
    def knots(self):
        return list(zip(self.knots_x.tolist(), self.knots_y.tolist()))

    @property
    def label(self):
        return f"gaussianizer[{self.knots_x.size} knots]"


def forward(t: CoordinateTransform, x):
    return t.forward(x)


def inverse(t: CoordinateTransform, y):
    return t.inverse(y)


def derivative(t: CoordinateTransform, x):
    return t.derivative(x)


def compose(outer: CoordinateTransform, inner: CoordinateTransform) -> CoordinateTransform:
    """The transform x -> outer(inner(x)).

    Identity on either side is dropped, and an outer ``AffineOf`` over the
    identity is folded into an ``AffineOf`` of ``inner``; both shortcuts
    evaluate with the same floating point operations as the nested form.
    """
    if isinstance(inner, Identity):
        # the composite is ``outer`` on its own domain
        return outer
    if not outer.domain.includes(inner.image):
        raise DomainError(
            f"cannot compose {outer.label} after {inner.label}: image {inner.image} "
            f"not inside domain {outer.domain}"
        )
    if isinstance(outer, Identity):
        return inner
    if isinstance(outer, AffineOf) and isinstance(outer.inner, Identity):
        return AffineOf(outer.alpha, outer.beta, inner)
    return Composed(outer, inner)


def push(m: EmpiricalMeasure, t: CoordinateTransform) -> EmpiricalMeasure:
    """Pushforward of an empirical measure: atoms mapped through ``t``."""
    y = t.forward(m.points)
    order = np.lexsort((m.weights, y))
    return EmpiricalMeasure(y[order], m.weights[order])


def gaussianize(samples: EmpiricalMeasure) -> EmpiricalGaussianizer:
    """Rank-based map sending ``samples`` approximately to N(0, 1).

    Atom i (in sorted order) gets the normal score of its mid-rank
    cumulative weight, which is ``(i - 0.5) / n`` for equal weights.  Tied
    values share one knot placed at the weighted mean of their scores.
    """
    n = len(samples)
    if n < 10:
        raise InsufficientData(f"gaussianize needs at least 10 points, got {n}")
    x, w = samples.points, samples.weights
    cw = np.cumsum(w)
    cw[-1] = 1.0
    mid = cw - 0.5 * w
    scores = norm_ppf(np.clip(mid, 1e-300, 1.0 - 1e-16))

    uniq, start = np.unique(x, return_index=True)
    if uniq.size < 10:
        raise DegenerateData(f"gaussianize needs at least 10 distinct values, got {uniq.size}")
    if uniq.size == n:
        ky = scores
    else:
        sw = np.add.reduceat(w, start)
        with np.errstate(invalid="ignore"):
            ky = np.add.reduceat(w * scores, start) / sw
        # zero-weight groups fall back to the unweighted mean
        zero = sw == 0
        if zero.any():
            counts = np.diff(np.append(start, n))
            ky[zero] = (np.add.reduceat(scores, start) / counts)[zero]
    return EmpiricalGaussianizer(uniq, ky)


def parse_transform(spec: str) -> CoordinateTransform:
    """Parse a short name: identity, log, logit, arctan, boxcox:<lambda>."""
    s = spec.strip().lower()
    simple = {"identity": Identity, "id": Identity, "log": Log, "logit": Logit, "arctan": Arctan}
    if s in simple:
        return simple[s]()
    if s.startswith("boxcox:") or s.startswith("boxcox="):
        try:
            return BoxCox(float(s[7:]))
        except ValueError:
            pass
    raise InvalidArgument(f"unknown transform {spec!r}")
