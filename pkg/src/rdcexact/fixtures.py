"""Parameter fixtures: figure parameter sets, per-family defaults, random draws.

Figure sets are keyed ``fig1`` .. ``fig6``.  Windows are not taken from any
plot; they are chosen to show the qualitative feature each set is known for
(zero boundary values, boundedness, a travelling front...).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .catalog import Family, SolutionInstance, validity
from .equations import EquationSpec, Reaction
from .errors import ConstraintError, DomainError

DEFAULT_T_WINDOW = (0.0, 2.0)
DEFAULT_X_WINDOW = (-5.0, 5.0)


def t2ii_equation(lam: float, l1: float, roots=None, p=None, q=None) -> EquationSpec:
    """R_T2ii equation whose reduction cubic has the given roots (or p, q).

    Roots of ``k^3 + 3pk + 2q`` must sum to zero; then
    ``lambda2 = 3 lambda1 p`` and ``lambda3 = 2 lambda1 q``.
    """
    if roots is not None:
        r1, r2, r3 = roots
        if abs(r1 + r2 + r3) > 1e-12 * (1 + abs(r1) + abs(r2) + abs(r3)):
            raise ConstraintError("roots of a depressed cubic must sum to zero")
        p = (r1 * r2 + r1 * r3 + r2 * r3) / 3.0
        q = -r1 * r2 * r3 / 2.0
    return EquationSpec(Reaction.T2II, lam=lam, l1=l1, l2=3.0 * l1 * p, l3=2.0 * l1 * q)


def s2_equation(lam: float, l1: float, l3: float) -> EquationSpec:
    l2 = -3.0 * float(np.cbrt(l1 * l3 * l3 / 4.0))
    return EquationSpec(Reaction.T2II, lam=lam, l1=l1, l2=l2, l3=l3)


@dataclass(frozen=True)
class Fixture:
    name: str
    instance: SolutionInstance
    t_window: tuple[float, float] = DEFAULT_T_WINDOW
    x_window: tuple[float, float] = DEFAULT_X_WINDOW
    caption: str = ""
    notes: str = ""
    grid: tuple[int, int] = field(default=(41, 81))     # (nt, nx) for surface output


# Caption roots 0.1, 2, 3 do not sum to zero; they are shifted by their mean
# so that they are the roots of a depressed cubic (same spacings).
_FIG5_ROOTS = tuple(r - (0.1 + 2.0 + 3.0) / 3.0 for r in (0.1, 2.0, 3.0))

FIGURES: dict[str, Fixture] = {
    "fig1": Fixture(
        "fig1",
        SolutionInstance(Family.T1I_EXP,
                         EquationSpec(Reaction.T1I, m=1, lam=3, l1=-1, l2=0, l3=1), c1=4, c2=-4),
        t_window=(0.0, 2.0), x_window=(0.0, 10.0),
        caption="m=1, lambda=3, lambda1=-1, lambda2=0, c1=-c2=4",
        notes="zero at x=0, decays as x -> infinity and t -> infinity"),
    "fig2": Fixture(
        "fig2",
        SolutionInstance(Family.T1I_TRIG,
                         EquationSpec(Reaction.T1I, m=1, lam=2, l1=-1, l2=0, l3=1), c1=1, c2=0),
        t_window=(0.0, 2.0), x_window=(-math.pi / 2, math.pi / 2),
        caption="m=1, lambda=2, lambda1=-1, lambda2=0, c1=1, c2=0",
        notes="zero at x = +-pi/2"),
    "fig3": Fixture(
        "fig3",
        SolutionInstance(Family.T1I_FAST,
                         EquationSpec(Reaction.T1I, m=-2, lam=1, l1=1, l2=-1, l3=0), c1=1, c2=1),
        t_window=(0.0, 5.0), x_window=(-10.0, 10.0),
        caption="lambda=1, lambda1=1, c1=1, c2=1",
        notes="positive and bounded, tends to 1 as t -> infinity"),
    "fig4": Fixture(
        "fig4",
        SolutionInstance(Family.T1II_EXP,
                         EquationSpec(Reaction.T1II, lam=1, l1=1, l2=1, l3=1), c1=-1, c2=-1),
        t_window=(0.0, 1.0), x_window=(-3.0, 3.0),
        caption="lambda=1, lambda1=1, lambda2=1, lambda3=1, c1=-1, c2=-1",
        notes="decays to zero as x -> +-infinity"),
    "fig5": Fixture(
        "fig5",
        SolutionInstance(Family.T2II_S3, t2ii_equation(1.0, 0.5, roots=_FIG5_ROOTS),
                         c1=1, c2=1, c3=1),
        t_window=(0.0, 2.0), x_window=(0.0, 20.0),
        caption="lambda=1, lambda1=0.5, c1=c2=c3=1, alpha = (0.1, 2, 3) shifted to zero sum",
        notes="two-shock wave; roots shifted by their mean 1.7 to (-1.6, 0.3, 1.3)"),
    "fig6": Fixture(
        "fig6",
        SolutionInstance(Family.T2II_FN,
                         EquationSpec(Reaction.T2II, lam=1, l1=-1, l2=1, l3=0), c1=1, c2=1, c3=1),
        t_window=(0.0, 2.0), x_window=(-12.0, -3.5),
        caption="lambda=1, lambda2=1, c1=c2=c3=1, alpha2=1, alpha3=-1",
        notes="valid where x < -3t/2"),
}

FIGURE_FAMILY = {f.instance.family: name for name, f in FIGURES.items()}


def _defaults() -> dict[Family, Fixture]:
    F, R = Family, Reaction
    out = {
        F.T1I_LIN: SolutionInstance(F.T1I_LIN, EquationSpec(R.T1I, m=1, lam=2, l2=1, l3=0), c1=1, c2=1),
        F.T1I_DEG: SolutionInstance(F.T1I_DEG, EquationSpec(R.T1I, m=1, lam=2, l1=-1, l3=0.5),
                                    c1=1, c2=1),
        F.T1II_LIN: SolutionInstance(F.T1II_LIN, EquationSpec(R.T1II, lam=1, l2=1, l3=1), c1=0, c2=1),
        F.T1II_DEG: SolutionInstance(F.T1II_DEG, EquationSpec(R.T1II, lam=2, l1=-1, l2=0.5, l3=1),
                                     c1=0.5, c2=0.5),
        F.T1II_TRIG: SolutionInstance(F.T1II_TRIG, EquationSpec(R.T1II, lam=1, l1=-1, l2=0, l3=1),
                                      c1=1, c2=0.5),
        F.T1III_H: SolutionInstance(F.T1III_H, EquationSpec(R.T1III, lam=1, l2=1, l3=-1), c1=5, c2=0.5),
        F.T2I_A: SolutionInstance(F.T2I_A, EquationSpec(R.T2I, m=1, lam=1, l2=0.5), c1=1, c2=10),
        F.T2I_B: SolutionInstance(F.T2I_B, EquationSpec(R.T2I, m=1, lam=1, l1=1, l2=0.5), c1=1, c2=12),
        F.T2II_S1A: SolutionInstance(F.T2II_S1A, EquationSpec(R.T2II, lam=1, l1=1), c1=10),
        F.T2II_S1B: SolutionInstance(F.T2II_S1B, EquationSpec(R.T2II, lam=1, l1=1), c1=10, c2=60),
        F.T2II_S2A: SolutionInstance(F.T2II_S2A, s2_equation(1.0, 1.0, -2.0), c1=1, c2=0.2),
        F.T2II_S2B: SolutionInstance(F.T2II_S2B, s2_equation(1.0, 1.0, -2.0), c1=1, c2=0.2, c3=5),
        F.T2II_S4: SolutionInstance(F.T2II_S4, t2ii_equation(1.0, 1.0, p=0.5, q=-1.0 / 3.0),
                                    c1=1, c2=0.1, c3=0),
    }
    fixtures = {fam: Fixture(f"default-{fam.value}", inst) for fam, inst in out.items()}
    for name, fx in FIGURES.items():
        fixtures[fx.instance.family] = fx
    return fixtures


DEFAULTS: dict[Family, Fixture] = _defaults()


# x-windows for method-of-lines cross-checks of the default instances over
# t in [t0, t0 + 0.1] (t0 = start of the fixture's t-window): U stays
# moderate there, so neither the explicit step nor the grid error degenerates.
EVOLVE_WINDOWS: dict[Family, tuple[float, float]] = {
    Family.T1I_LIN: (-1.5, 4.0),
    Family.T1I_EXP: (0.5, 4.0),
    Family.T1I_DEG: (-0.5, 4.0),
    Family.T1I_TRIG: (-1.2, 1.2),
    Family.T1I_FAST: (-10.0, 10.0),
    Family.T1II_LIN: (-0.7, 1.0),
    Family.T1II_EXP: (-0.2, 1.2),
    Family.T1II_DEG: (-1.5, 4.0),
    Family.T1II_TRIG: (-1.8, 4.0),
    Family.T1III_H: (-1.5, 3.5),
    Family.T2I_A: (-5.0, 5.0),
    Family.T2I_B: (-5.0, 5.0),
    Family.T2II_S1A: (-10.0, -6.0),
    Family.T2II_S1B: (-5.0, 5.0),
    Family.T2II_S2A: (0.0, 5.0),
    Family.T2II_S2B: (0.5, 5.0),
    Family.T2II_S3: (1.0, 10.0),
    Family.T2II_FN: (-10.0, -2.0),
    Family.T2II_S4: (-5.0, 5.0),
}


def default_instance(family: Family) -> SolutionInstance:
    return DEFAULTS[Family(family)].instance


# ---------------------------------------------------------------------------
# random draws
# ---------------------------------------------------------------------------

def _pm(rng, lo, hi):
    return float(rng.choice([-1.0, 1.0]) * rng.uniform(lo, hi))


def _m(rng):
    m = float(rng.choice([-2.0, -0.5, 0.5, 1.0, 2.0, 3.0, rng.uniform(-0.8, 3.0)]))
    return m


def _draw(family: Family, rng) -> SolutionInstance:
    F, R = Family, Reaction
    u = rng.uniform
    if family in (F.T1I_LIN, F.T1II_LIN):
        reaction = R.T1I if family is F.T1I_LIN else R.T1II
        m = _m(rng) if family is F.T1I_LIN else None
        eq = EquationSpec(reaction, m=m, lam=_pm(rng, 0.3, 1.5), l2=_pm(rng, 0.2, 1.5),
                          l3=u(-1, 1))
        return SolutionInstance(family, eq, c1=u(2, 6), c2=u(0.05, 0.5))
    if family in (F.T1I_EXP, F.T1I_DEG, F.T1I_TRIG, F.T1II_EXP, F.T1II_DEG, F.T1II_TRIG):
        power = family.value.startswith("T1I_")
        m = _m(rng) if power else -1.0
        k = m + 1.0 if power else 1.0
        lam = _pm(rng, 0.3, 1.2)
        l1 = _pm(rng, 0.2, 1.0)
        target = {"EXP": u(0.2, 3.0), "DEG": 0.0, "TRIG": -u(0.2, 3.0)}[family.value.split("_")[1]]
        l3 = (target - lam * lam) / (4.0 * l1 * k)
        l2 = u(-1, 1) * abs(l1)
        eq = EquationSpec(R.T1I if power else R.T1II, m=m if power else None, lam=lam,
                          l1=l1, l2=l2, l3=l3)
        if family.value.endswith("TRIG"):
            return SolutionInstance(family, eq, c1=u(0.5, 2), c2=u(-0.5, 0.5))
        if family.value.endswith("DEG"):
            return SolutionInstance(family, eq, c1=u(1, 3), c2=u(-0.3, 0.3))
        scale = 1.0 if power else 0.1
        return SolutionInstance(family, eq, c1=scale * u(0.2, 2), c2=scale * u(0.2, 2))
    if family is F.T1I_FAST:
        l1 = _pm(rng, 0.2, 1.5)
        eq = EquationSpec(R.T1I, m=-2, lam=_pm(rng, 0.3, 1.5), l1=l1, l2=-l1, l3=0)
        return SolutionInstance(family, eq, c1=u(0.1, 2), c2=u(0.1, 2))
    if family is F.T1III_H:
        eq = EquationSpec(R.T1III, lam=_pm(rng, 0.3, 1.5), l2=u(-1, 1), l3=u(-1, 1))
        return SolutionInstance(family, eq, c1=u(3, 8), c2=u(0.01, 0.3))
    if family is F.T2I_A:
        lam = _pm(rng, 0.3, 1.5)
        eq = EquationSpec(R.T2I, m=_m(rng), lam=lam, l2=u(-1, 1))
        return SolutionInstance(family, eq, c1=math.copysign(u(0.5, 3), lam), c2=u(5, 15) * math.copysign(1, lam))
    if family is F.T2I_B:
        eq = EquationSpec(R.T2I, m=_m(rng), lam=_pm(rng, 0.3, 1.5), l1=_pm(rng, 0.2, 1.0),
                          l2=u(-1, 1))
        return SolutionInstance(family, eq, c1=u(0.1, 2), c2=u(-15, 15))
    if family in (F.T2II_S1A, F.T2II_S1B):
        eq = EquationSpec(R.T2II, lam=_pm(rng, 0.5, 1.5), l1=_pm(rng, 0.2, 1.0))
        return SolutionInstance(family, eq, c1=_pm(rng, 2, 10), c2=u(-60, 60))
    if family in (F.T2II_S2A, F.T2II_S2B):
        eq = s2_equation(_pm(rng, 0.5, 1.5), _pm(rng, 0.2, 1.0), _pm(rng, 0.2, 2.0))
        return SolutionInstance(family, eq, c1=u(0.05, 2), c2=u(0.05, 2), c3=u(-5, 5))
    if family is F.T2II_S3:
        while True:
            r1, r2 = u(-2, 2), u(-2, 2)
            r3 = -r1 - r2
            if min(abs(r1 - r2), abs(r1 - r3), abs(r2 - r3)) > 0.2:
                break
        eq = t2ii_equation(_pm(rng, 0.5, 1.5), _pm(rng, 0.2, 1.0), roots=(r1, r2, r3))
        return SolutionInstance(family, eq, c1=u(0.1, 2), c2=u(0.1, 2), c3=u(0.1, 2))
    if family is F.T2II_FN:
        l2 = _pm(rng, 0.2, 1.5)
        eq = EquationSpec(R.T2II, lam=_pm(rng, 0.5, 1.5), l1=-l2, l2=l2, l3=0)
        return SolutionInstance(family, eq, c1=u(0, 1), c2=u(0.1, 2), c3=u(0.1, 2))
    if family is F.T2II_S4:
        while True:
            p, q = u(-1, 1), _pm(rng, 0.2, 1.5)
            if p ** 3 + q * q > 0.05:
                break
        eq = t2ii_equation(_pm(rng, 0.5, 1.5), _pm(rng, 0.2, 1.0), p=p, q=q)
        return SolutionInstance(family, eq, c1=u(0.5, 2), c2=u(0, 0.3), c3=u(0, 2 * math.pi))
    raise ValueError(family)


def sample_points(s: SolutionInstance, rng, n: int, t_window=DEFAULT_T_WINDOW,
                  x_window=DEFAULT_X_WINDOW, max_batches: int = 50):
    """``n`` uniformly drawn (t, x) points inside the validity domain.

    Returns ``(t, x, rejected)``.  Raises :class:`DomainError` when the
    window holds (almost) no valid points.
    """
    ts, xs = [], []
    have = rejected = 0
    for _ in range(max_batches):
        t = rng.uniform(*t_window, size=4 * n)
        x = rng.uniform(*x_window, size=4 * n)
        ok = validity(s, t, x).ok
        ts.append(t[ok])
        xs.append(x[ok])
        have += int(ok.sum())
        rejected += int((~ok).sum())
        if have >= n:
            break
    if have < n:
        raise DomainError(f"{s.family.value}: only {have} valid points found in "
                          f"t in {t_window}, x in {x_window}")
    t = np.concatenate(ts)
    x = np.concatenate(xs)
    return t[:n], x[:n], rejected


def random_instance(family: Family, rng, t_window=DEFAULT_T_WINDOW, x_window=DEFAULT_X_WINDOW,
                    min_fraction: float = 0.2, max_tries: int = 500) -> SolutionInstance:
    """Rejection-sample a valid instance that is valid on a fair part of the window."""
    family = Family(family)
    for _ in range(max_tries):
        try:
            s = _draw(family, rng)
        except ConstraintError:
            continue
        t = rng.uniform(*t_window, size=400)
        x = rng.uniform(*x_window, size=400)
        if np.mean(validity(s, t, x).ok) >= min_fraction:
            return s
    raise RuntimeError(f"could not draw a valid {family.value} instance")
