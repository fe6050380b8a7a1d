"""Residual verification of catalog instances at sampled points."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .catalog import Family, SolutionInstance, evaluate
from .equations import normalized_residual
from .fixtures import DEFAULTS, DEFAULT_T_WINDOW, DEFAULT_X_WINDOW, random_instance, sample_points

RESIDUAL_TOL = 1e-8


@dataclass(frozen=True)
class ResidualReport:
    instance: SolutionInstance
    label: str
    max_residual: float
    samples: int
    rejected: int

    @property
    def passed(self) -> bool:
        return self.max_residual <= RESIDUAL_TOL

    def as_dict(self) -> dict:
        return {"label": self.label, "params": self.instance.as_dict(),
                "anchor": self.instance.info.anchor, "max_residual": self.max_residual,
                "samples": self.samples, "rejected": self.rejected, "passed": self.passed}


def check_instance(s: SolutionInstance, rng, samples: int = 200, t_window=DEFAULT_T_WINDOW,
                   x_window=DEFAULT_X_WINDOW, label: str = "") -> ResidualReport:
    """Largest normalized residual over ``samples`` valid points of the window."""
    t, x, rejected = sample_points(s, rng, samples, t_window, x_window)
    jet = evaluate(s, t, x)
    r = normalized_residual(s.eq, jet, t, x)
    return ResidualReport(s, label or s.family.value, float(np.max(r)), samples, rejected)


def check_family(family: Family, seed: int, samples: int = 200, draws: int = 3) -> list[ResidualReport]:
    """Default (figure) instance plus ``draws`` seeded random instances of ``family``."""
    family = Family(family)
    rng = np.random.default_rng([seed, list(Family).index(family)])
    fx = DEFAULTS[family]
    out = [check_instance(fx.instance, rng, samples, fx.t_window, fx.x_window, label=fx.name)]
    for i in range(draws):
        s = random_instance(family, rng)
        out.append(check_instance(s, rng, samples, label=f"random-{i + 1}"))
    return out
