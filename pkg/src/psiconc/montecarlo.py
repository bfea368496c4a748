"""Seeded samplers and Monte Carlo checks of the tail bounds.

Replications are generated in fixed chunks of ``CHUNK`` replications; chunk
``k`` draws from ``numpy.random.default_rng(SeedSequence([seed, k]))``.
Chunks are concatenated in index order, so results are bit-identical for
any number of workers.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from scipy import special

from . import bounds
from .diffeo import CoordinateTransform, Identity, Log, gaussianize
from .errors import DomainError, InsufficientData, InvalidArgument, InvalidParameters, PsiConcError
from .measure import EmpiricalMeasure, SupportInterval
from .normal import norm_cdf, norm_ppf
from .optimize import concentration_functional

CHUNK = 10_000


class BoundViolation(PsiConcError):
    """Empirical tail exceeded the bound by more than three standard errors."""


# distribution catalog

class DistributionSpec:
    """Base class; subclasses define ``ppf`` and ``support``."""

    bounded = True

    @property
    def support(self) -> SupportInterval:
        raise NotImplementedError

    def ppf(self, u: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def _require(self, ok: bool, msg: str):
        if not ok:
            raise InvalidParameters(f"{type(self).__name__}: {msg}")


@dataclass(frozen=True)
class Uniform(DistributionSpec):
    a: float
    b: float

    def __post_init__(self):
        self._require(math.isfinite(self.a) and math.isfinite(self.b) and self.a < self.b, "need a < b")

    @property
    def support(self):
        return SupportInterval(self.a, self.b)

    def ppf(self, u):
        return self.a + (self.b - self.a) * u


@dataclass(frozen=True)
class TwoPoint(DistributionSpec):
    """Mass ``1 - w`` at ``a`` and ``w`` at ``b``."""

    a: float
    b: float
    w: float = 0.5

    def __post_init__(self):
        self._require(self.a < self.b, "need a < b")
        self._require(0.0 <= self.w <= 1.0, "weight must lie in [0, 1]")

    @property
    def support(self):
        return SupportInterval(self.a, self.b)

    def ppf(self, u):
        return np.where(u < 1.0 - self.w, self.a, self.b)


@dataclass(frozen=True)
class LogNormal(DistributionSpec):
    m: float = 0.0
    s: float = 1.0
    bounded = False

    def __post_init__(self):
        self._require(self.s > 0 and math.isfinite(self.m), "need s > 0")

    @property
    def support(self):
        raise DomainError("log-normal support (0, inf) is unbounded")

    def ppf(self, u):
        return np.exp(self.m + self.s * norm_ppf(u))


@dataclass(frozen=True)
class Gamma(DistributionSpec):
    shape: float
    scale: float = 1.0
    bounded = False

    def __post_init__(self):
        self._require(self.shape > 0 and self.scale > 0, "need shape > 0 and scale > 0")

    @property
    def support(self):
        raise DomainError("gamma support (0, inf) is unbounded")

    def ppf(self, u):
        return self.scale * special.gammaincinv(self.shape, u)


@dataclass(frozen=True)
class ParetoTruncated(DistributionSpec):
    """Pareto(alpha) with scale ``a`` conditioned on [a, b]."""

    alpha: float
    a: float
    b: float

    def __post_init__(self):
        self._require(self.alpha > 0, "need alpha > 0")
        self._require(0 < self.a < self.b, "need 0 < a < b")

    @property
    def support(self):
        return SupportInterval(self.a, self.b)

    def ppf(self, u):
        mass = -math.expm1(self.alpha * math.log(self.a / self.b))  # 1 - (a/b)^alpha
        return np.minimum(self.a * (1.0 - u * mass) ** (-1.0 / self.alpha), self.b)


@dataclass(frozen=True)
class Beta(DistributionSpec):
    alpha: float
    beta: float
    bounded = False

    def __post_init__(self):
        self._require(self.alpha > 0 and self.beta > 0, "need alpha, beta > 0")

    @property
    def support(self):
        raise DomainError("beta support (0, 1) is open")

    def ppf(self, u):
        return special.betaincinv(self.alpha, self.beta, u)


_SPECS = {
    "uniform": Uniform, "twopoint": TwoPoint, "lognormal": LogNormal,
    "gamma": Gamma, "pareto": ParetoTruncated, "beta": Beta,
}


def make_spec(name: str, *params: float) -> DistributionSpec:
    """``make_spec("pareto", 1, 1, 1000)`` and friends."""
    try:
        cls = _SPECS[name.strip().lower()]
    except KeyError:
        raise InvalidParameters(f"unknown distribution {name!r}; choose from {sorted(_SPECS)}")
    try:
        return cls(*params)
    except TypeError as exc:
        raise InvalidParameters(f"{name}: {exc}")


def _open_uniform(rng: np.random.Generator, shape) -> np.ndarray:
    # shift by half a grid step so u never hits 0
    return rng.random(shape) + 2.0 ** -54


def _draw(spec: DistributionSpec, rng: np.random.Generator, shape) -> np.ndarray:
    return spec.ppf(_open_uniform(rng, shape))


def sample(spec: DistributionSpec, n: int, seed: int) -> EmpiricalMeasure:
    """``n`` inverse-CDF draws, deterministic in (spec, n, seed)."""
    if n < 1:
        raise InvalidParameters("n must be >= 1")
    rng = np.random.default_rng(np.random.SeedSequence([seed, 0]))
    return EmpiricalMeasure.from_samples(_draw(spec, rng, n))


def sample_array(spec: DistributionSpec, n: int, seed: int) -> np.ndarray:
    """Same draws as :func:`sample`, unsorted."""
    if n < 1:
        raise InvalidParameters("n must be >= 1")
    rng = np.random.default_rng(np.random.SeedSequence([seed, 0]))
    return _draw(spec, rng, n)


# bound verification

STATISTICS = ("sum", "product", "max")
DEFAULT_LEVELS = (0.0, 0.25, 0.5, 1.0, 1.5, 2.0, 2.5, 3.0)


@dataclass
class SimResult:
    statistic: str
    transform: str
    t_grid: list
    empirical_tail: list
    bound: list
    n_reps: int
    seed: int
    stderr: list
    center: float = 0.0
    center_stderr: float = 0.0
    sigma_sq_hat: float = 0.0
    spec: str = ""
    dominated: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(self.dominated)

    def summary(self) -> str:
        bad = [t for t, ok in zip(self.t_grid, self.dominated) if not ok]
        head = f"{self.spec} {self.statistic}/{self.transform} seed={self.seed}"
        return f"{head}: PASS" if not bad else f"{head}: FAIL at t={bad}"


def _statistic_plan(spec: DistributionSpec, n_vars: int, statistic: str, t: CoordinateTransform):
    """Return (reduce, bound_fn, scale) for the statistic/transform pair."""
    statistic = statistic.lower()
    if statistic not in STATISTICS:
        raise InvalidArgument(f"statistic must be one of {STATISTICS}")
    if not spec.bounded:
        raise DomainError(f"{type(spec).__name__} has unbounded support; no Hoeffding bound applies")
    iv = spec.support
    base = t.base
    if statistic == "sum":
        lo, hi = sorted((t.forward(iv.a), t.forward(iv.b)))
        ranges = [SupportInterval(lo, hi)] * n_vars
        denom = n_vars * (hi - lo) ** 2 / 2.0

        def bound(x):
            return min(1.0, 2.0 * bounds.master_tail_bound(1.0, ranges, x))

        return (lambda X: t.forward(X).sum(axis=1)), bound, denom
    if iv.a <= 0:
        raise DomainError(f"{statistic} statistic needs positive support, got a={iv.a}")
    ivs = [iv] * n_vars
    if statistic == "product":
        if isinstance(base, Log):
            idx, denom = 0, n_vars * math.log(iv.b / iv.a) ** 2 / 2.0
        elif isinstance(base, Identity):
            idx, denom = 1, n_vars * (iv.width / iv.a) ** 2 / 2.0
        else:
            raise InvalidArgument("product statistic supports identity or log")
        return (lambda X: np.log(X).sum(axis=1)), (lambda x: bounds.product_tail_bound(ivs, x)[idx]), denom
    # max
    if isinstance(base, Log):
        mode, w = "log", math.log(iv.b / iv.a)
        reduce = lambda X: np.log(X.max(axis=1))  # noqa: E731
    elif isinstance(base, Identity):
        mode, w = "identity", iv.width
        reduce = lambda X: X.max(axis=1)  # noqa: E731
    else:
        raise InvalidArgument("max statistic supports identity or log")
    return reduce, (lambda x: bounds.max_tail_bound(n_vars, iv, x, mode)), w * w / (2.0 * n_vars)


def default_t_grid(spec: DistributionSpec, n_vars: int, statistic: str,
                   transform: CoordinateTransform, levels=DEFAULT_LEVELS) -> list:
    """Deviations at which the bound's exponent equals -level^2."""
    _, _, denom = _statistic_plan(spec, n_vars, statistic, transform)
    return [lv * math.sqrt(denom) for lv in levels]


def _chunk_stat(spec, n_vars, reduce, seed, k, size):
    rng = np.random.default_rng(np.random.SeedSequence([seed, k]))
    return reduce(_draw(spec, rng, (size, n_vars)))


def simulate_statistic(spec: DistributionSpec, n_vars: int, reduce, n_reps: int, seed: int,
                       workers: int = 1) -> np.ndarray:
    sizes = [min(CHUNK, n_reps - s) for s in range(0, n_reps, CHUNK)]
    jobs = [(spec, n_vars, reduce, seed, k, size) for k, size in enumerate(sizes)]
    if workers > 1:
        with ThreadPoolExecutor(workers) as ex:
            parts = list(ex.map(lambda j: _chunk_stat(*j), jobs))
    else:
        parts = [_chunk_stat(*j) for j in jobs]
    return np.concatenate(parts)


def verify_bound(spec: DistributionSpec, n_vars: int, statistic: str,
                 transform: CoordinateTransform, t_grid: Sequence[float] | None = None,
                 n_reps: int = 100_000, seed: int = 0, workers: int = 1) -> SimResult:
    """Estimate P(|T - center| >= t) and compare with the matching bound.

    The centre is the replication mean for sums and products (taken on the
    log scale for products) and the replication median for maxima.  A grid
    point is dominated when empirical <= bound + 3 * stderr.
    """
    if n_vars < 1 or n_reps < 1:
        raise InvalidArgument("n_vars and n_reps must be >= 1")
    reduce, bound_fn, denom = _statistic_plan(spec, n_vars, statistic, transform)
    if t_grid is None:
        t_grid = [lv * math.sqrt(denom) for lv in DEFAULT_LEVELS]
    t_grid = [float(t) for t in t_grid]
    if any(t < 0 for t in t_grid):
        raise InvalidArgument("t_grid must be non-negative")

    T = simulate_statistic(spec, n_vars, reduce, n_reps, seed, workers)
    Ts = np.sort(T)
    if statistic.lower() == "max":
        center = float(np.median(T))
        k = max(1, int(math.sqrt(n_reps) / 2))
        mid = n_reps // 2
        center_se = float(Ts[min(mid + k, n_reps - 1)] - Ts[max(mid - k, 0)]) / 2.0
    else:
        center = float(T.mean())
        center_se = float(T.std() / math.sqrt(n_reps))
    dev = np.abs(T - center)

    emp, se, bnd, ok = [], [], [], []
    for t in t_grid:
        p = float(np.count_nonzero(dev >= t)) / n_reps
        s = math.sqrt(p * (1.0 - p) / n_reps)
        b = bound_fn(t)
        emp.append(p)
        se.append(s)
        bnd.append(b)
        ok.append(p <= b + 3.0 * s)
    sig = concentration_functional(EmpiricalMeasure.from_samples(T), Identity(), "mgf")
    return SimResult(
        statistic=statistic.lower(), transform=transform.label, t_grid=t_grid,
        empirical_tail=emp, bound=bnd, n_reps=n_reps, seed=seed, stderr=se,
        center=center, center_stderr=center_se, sigma_sq_hat=sig, spec=repr(spec), dominated=ok,
    )


def assert_dominated(result: SimResult) -> SimResult:
    if not result.passed:
        rows = "\n".join(
            f"  t={t:.6g} empirical={p:.6g} bound={b:.6g} stderr={s:.3g}"
            for t, p, b, s, ok in zip(result.t_grid, result.empirical_tail, result.bound,
                                      result.stderr, result.dominated) if not ok)
        raise BoundViolation(f"{result.summary()}\n{rows}")
    return result


# transported enlargement

@dataclass(frozen=True)
class EnlargementRow:
    eps: float
    measured: float
    floor: float
    stderr: float

    @property
    def gap(self) -> float:
        return self.measured - self.floor


def enlargement_check(samples: EmpiricalMeasure, eps_grid: Sequence[float], n_holdout: int,
                      seed: int = 0) -> list[EnlargementRow]:
    """Fit a Gaussianizer on part of ``samples`` and measure, on the held-out
    rest, the fraction inside the eps-enlargement of the half-space
    {gaussianized value <= 0}.  The floor is Phi(eps)."""
    x = samples.points
    if n_holdout < 1 or x.size - n_holdout < 10:
        raise InsufficientData("need at least 10 fitting points besides the holdout")
    perm = np.random.default_rng(np.random.SeedSequence([seed, 0])).permutation(x.size)
    hold, fit = x[perm[:n_holdout]], x[perm[n_holdout:]]
    psi = gaussianize(EmpiricalMeasure.from_samples(fit))
    z = psi.forward(hold)
    rows = []
    for eps in eps_grid:
        eps = float(eps)
        if eps < 0:
            raise InvalidArgument("eps must be >= 0")
        p = float(np.count_nonzero(z < eps)) / n_holdout
        rows.append(EnlargementRow(eps, p, norm_cdf(eps), math.sqrt(p * (1.0 - p) / n_holdout)))
    return rows
