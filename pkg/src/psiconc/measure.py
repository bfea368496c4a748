"""Weighted empirical measures on the real line and support intervals."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import EmptySample, InvalidArgument


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=float)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class EmpiricalMeasure:
    """Finitely supported probability measure with sorted atoms.

    Build one with :meth:`from_samples`, which sorts and normalises; the
    plain constructor only validates.
    """

    points: np.ndarray
    weights: np.ndarray

    def __post_init__(self):
        pts = _frozen(self.points).reshape(-1)
        w = _frozen(self.weights).reshape(-1)
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "weights", w)
        if pts.size == 0:
            raise EmptySample("empirical measure needs at least one point")
        if pts.shape != w.shape:
            raise InvalidArgument("points and weights differ in length")
        if not np.all(np.isfinite(pts)):
            raise InvalidArgument("points must be finite")
        if np.any(w < 0) or not np.all(np.isfinite(w)):
            raise InvalidArgument("weights must be finite and non-negative")
        if abs(math.fsum(w) - 1.0) > 1e-12:
            raise InvalidArgument("weights must sum to 1")
        if np.any(np.diff(pts) < 0):
            raise InvalidArgument("points must be sorted ascending")

    @classmethod
    def from_samples(cls, values, weights=None) -> "EmpiricalMeasure":
        x = np.asarray(values, dtype=float).reshape(-1)
        if x.size == 0:
            raise EmptySample("no samples")
        if weights is None:
            w = np.full(x.size, 1.0 / x.size)
        else:
            w = np.asarray(weights, dtype=float).reshape(-1)
            if w.shape != x.shape:
                raise InvalidArgument("points and weights differ in length")
            if np.any(w < 0):
                raise InvalidArgument("weights must be non-negative")
            w = w / math.fsum(w)
        # sort by value, ties by weight, so the layout depends only on the multiset
        order = np.lexsort((w, x))
        return cls(x[order], w[order])

    def __len__(self) -> int:
        return self.points.size

    @property
    def is_uniform(self) -> bool:
        return bool(np.all(self.weights == self.weights[0]))

    def mean(self) -> float:
        return float(np.dot(self.weights, self.points))

    def variance(self) -> float:
        c = self.points - self.mean()
        return float(np.dot(self.weights, c * c))

    def median(self) -> float:
        """Lower weighted median (first atom with cumulative weight >= 1/2)."""
        cw = np.cumsum(self.weights)
        return float(self.points[np.searchsorted(cw, 0.5 - 1e-15)])

    def __repr__(self) -> str:
        return f"EmpiricalMeasure(n={len(self)}, min={self.points[0]:g}, max={self.points[-1]:g})"


@dataclass(frozen=True)
class SupportInterval:
    """Closed interval [a, b] with a <= b; a == b is a degenerate point mass."""

    a: float
    b: float

    def __post_init__(self):
        a, b = float(self.a), float(self.b)
        if not (math.isfinite(a) and math.isfinite(b)):
            raise InvalidArgument("interval endpoints must be finite")
        if a > b:
            raise InvalidArgument(f"empty interval [{a}, {b}]")
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)

    @property
    def width(self) -> float:
        return self.b - self.a

    @property
    def ratio(self) -> float:
        if self.a <= 0:
            raise InvalidArgument("ratio b/a needs a > 0")
        return self.b / self.a

    @property
    def degenerate(self) -> bool:
        return self.a == self.b

    def contains(self, x) -> bool:
        x = np.asarray(x, dtype=float)
        return bool(np.all((x >= self.a) & (x <= self.b)))


def as_interval(iv) -> SupportInterval:
    if isinstance(iv, SupportInterval):
        return iv
    a, b = iv
    return SupportInterval(a, b)
