"""Concentration bounds under monotone coordinate changes.

Transforms live in :mod:`psiconc.diffeo`, closed-form bounds in
:mod:`psiconc.bounds`, coordinate selection in :mod:`psiconc.optimize`,
one-dimensional transport in :mod:`psiconc.transport`, simulation checks in
:mod:`psiconc.montecarlo` and the applied estimators in :mod:`psiconc.apps`.
"""

__version__ = "0.1.0"

from .diffeo import (  # noqa: E402
    AffineOf, Arctan, BoxCox, CoordinateTransform, EmpiricalGaussianizer, Identity, Log, Logit,
    compose, derivative, forward, gaussianize, inverse, push,
)
from .measure import EmpiricalMeasure, SupportInterval  # noqa: E402

__all__ = [
    "AffineOf", "Arctan", "BoxCox", "CoordinateTransform", "EmpiricalGaussianizer", "Identity",
    "Log", "Logit", "compose", "derivative", "forward", "gaussianize", "inverse", "push",
    "EmpiricalMeasure", "SupportInterval",
]
