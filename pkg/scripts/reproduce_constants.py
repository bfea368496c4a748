#!/usr/bin/env python3
"""Print the closed-form constants next to the values quoted in the source
text: improvement factors, the portfolio variance cap and the Hoeffding
constants used in the examples."""

from __future__ import annotations

import argparse
import math
from dataclasses import dataclass, field

from psiconc import Identity, Log
from psiconc.apps import portfolio_bound
from psiconc.bounds import E_SQUARED, claimed_improvement, hoeffding_constant, improvement_factor


@dataclass
class ConstantsConfig:
    ratios: list = field(default_factory=lambda: [E_SQUARED, 100.0, 1000.0])
    deltas: list = field(default_factory=lambda: [0.05, 0.1, 0.2, 0.5])


def run(cfg: ConstantsConfig) -> None:
    print(f"{'b/a':>10} {'rho':>12} {'published':>10} {'rel. diff':>10}")
    for r in cfg.ratios:
        rho = improvement_factor((1.0, r))
        claim = claimed_improvement(r)
        diff = "" if claim is None else f"{abs(rho - claim) / claim:10.2%}"
        print(f"{r:10.4g} {rho:12.2f} {'' if claim is None else f'{claim:10g}':>10} {diff}")
    print()
    print(f"{'delta':>6} {'sigma_cap':>10}")
    for d in cfg.deltas:
        print(f"{d:6.2f} {portfolio_bound(d, 1, 0.0)[1]:10.7f}")
    print()
    for iv in [(0.0, 1.0), (1.0, E_SQUARED), (1.0, 1000.0)]:
        t = Identity() if iv[0] <= 0 else Log()
        print(f"hoeffding[{t.label}] on [{iv[0]:g}, {iv[1]:.4g}] = {hoeffding_constant(t, iv):.6g}")
    print(f"identity constant on [1, 1000] = {hoeffding_constant(Identity(), (1.0, 1000.0)):.6g}"
          f" (ratio to log {improvement_factor((1.0, 1000.0)):.1f}, ln(1000)^2/4 = {math.log(1000) ** 2 / 4:.4f})")


def main() -> None:
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--ratios", type=float, nargs="+")
    p.add_argument("--deltas", type=float, nargs="+")
    a = p.parse_args()
    cfg = ConstantsConfig()
    if a.ratios:
        cfg.ratios = a.ratios
    if a.deltas:
        cfg.deltas = a.deltas
    run(cfg)


if __name__ == "__main__":
    main()
