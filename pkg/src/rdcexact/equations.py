"""Reaction-diffusion-convection equation families and their pointwise residual.

Every equation handled here has the shape

    U_t = [U^m U_x]_x + conv + C(U),

with ``conv = lam U^m U_x`` (:attr:`Convection.POWER_M`) or
``conv = lam U^(m+1) U_x`` (:attr:`Convection.POWER_M1`).
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .errors import ConstraintError, DomainError, EvaluationError, UsageError
from .jet import Jet2


class Convection(str, enum.Enum):
    POWER_M = "PowerConvM"
    POWER_M1 = "PowerConvM1"


class Reaction(str, enum.Enum):
    T1I = "R_T1i"      # (l1 U^(m+1) + l2)(U^-m - l3)
    T1II = "R_T1ii"    # (l1 ln U + l2)(U - l3), m = -1
    T1III = "R_T1iii"  # l2 U^(1/2) + l3, m = -1/2
    T2I = "R_T2i"      # l1 U + l2 U^-m
    T2II = "R_T2ii"    # (l1 U^(3/2) + l2 U^(1/2) + l3)(l1/(2 lam^2) + U^(1/2)), m = -1/2


_ALLOWED = {
    Reaction.T1I: Convection.POWER_M,
    Reaction.T1II: Convection.POWER_M,
    Reaction.T1III: Convection.POWER_M,
    Reaction.T2I: Convection.POWER_M1,
    Reaction.T2II: Convection.POWER_M1,
}

_FIXED_M = {Reaction.T1II: -1.0, Reaction.T1III: -0.5, Reaction.T2II: -0.5}

# Relative width of the band inside which a discriminant counts as zero.
DELTA_TOL = 1e-12


@dataclass(frozen=True)
class EquationSpec:
    """Immutable description of one RDC equation.

    ``m`` may be omitted for the reactions that pin it (exponential and
    half-power cases); it is filled in automatically.
    """

    reaction: Reaction
    lam: float
    l1: float = 0.0
    l2: float = 0.0
    l3: float = 0.0
    m: float | None = None
    convection: Convection | None = None

    def __post_init__(self):
        reaction = Reaction(self.reaction)
        object.__setattr__(self, "reaction", reaction)
        conv = _ALLOWED[reaction] if self.convection is None else Convection(self.convection)
        if conv is not _ALLOWED[reaction]:
            raise ConstraintError(f"{reaction.value} only appears with {_ALLOWED[reaction].value}")
        object.__setattr__(self, "convection", conv)

        fixed = _FIXED_M.get(reaction)
        if fixed is not None:
            if self.m is not None and float(self.m) != fixed:
                raise ConstraintError(f"{reaction.value} requires m = {fixed}, got {self.m}")
            object.__setattr__(self, "m", fixed)
        elif self.m is None:
            raise ConstraintError(f"{reaction.value} needs an explicit diffusion exponent m")
        for name in ("lam", "l1", "l2", "l3", "m"):
            val = float(getattr(self, name))
            if not math.isfinite(val):
                raise ConstraintError(f"{name} must be finite")
            object.__setattr__(self, name, val)

        if self.lam == 0.0:
            raise ConstraintError("convection coefficient lambda must be nonzero")
        if reaction in (Reaction.T1I, Reaction.T2I) and self.m == -1.0:
            raise ConstraintError(f"{reaction.value} requires m != -1")
        if reaction is Reaction.T2II and self.l1 == 0.0:
            raise ConstraintError("R_T2ii requires lambda1 != 0")

    # -- helpers ----------------------------------------------------------
    @property
    def needs_positive(self) -> bool:
        """Whether U must stay strictly positive for the equation to make sense."""
        if self.reaction in (Reaction.T1II, Reaction.T1III, Reaction.T2II):
            return True
        return not float(self.m).is_integer() or self.m < 0

    def diffusivity(self, u):
        return np.power(u, self.m)

    def describe(self) -> str:
        return (f"{self.reaction.value}/{self.convection.value}: m={self.m:g}, lam={self.lam:g}, "
                f"l1={self.l1:g}, l2={self.l2:g}, l3={self.l3:g}")

    def as_dict(self) -> dict:
        return {"reaction": self.reaction.value, "convection": self.convection.value,
                "m": self.m, "lam": self.lam, "l1": self.l1, "l2": self.l2, "l3": self.l3}


def _check_positive(eq: EquationSpec, u) -> None:
    if not eq.needs_positive:
        return
    arr = np.asarray(u)
    if np.any(~(arr > 0)):
        worst = float(np.min(arr))
        raise DomainError(f"U must be strictly positive for {eq.reaction.value} with m={eq.m:g}; "
                          f"got {worst!r}", value=worst, where="U")


def reaction_value(eq: EquationSpec, u):
    """C(u) for the equation's reaction term (scalar or array)."""
    _check_positive(eq, u)
    u = np.asarray(u, dtype=float) if np.ndim(u) else float(u)
    m, l1, l2, l3 = eq.m, eq.l1, eq.l2, eq.l3
    r = eq.reaction
    if r is Reaction.T1I:
        return (l1 * u ** (m + 1.0) + l2) * (u ** (-m) - l3)
    if r is Reaction.T1II:
        return (l1 * np.log(u) + l2) * (u - l3)
    if r is Reaction.T1III:
        return l2 * np.sqrt(u) + l3
    if r is Reaction.T2I:
        return l1 * u + l2 * u ** (-m)
    s = np.sqrt(u)
    return (l1 * u * s + l2 * s + l3) * (l1 / (2.0 * eq.lam ** 2) + s)


def discriminant(eq: EquationSpec) -> float:
    """Sign-selector of the exponential / degenerate / trigonometric branches."""
    if eq.reaction is Reaction.T1I:
        return eq.lam ** 2 + 4.0 * eq.l1 * (eq.m + 1.0) * eq.l3
    if eq.reaction is Reaction.T1II:
        return eq.lam ** 2 + 4.0 * eq.l1 * eq.l3
    raise UsageError(f"discriminant is only defined for R_T1i and R_T1ii, not {eq.reaction.value}")


def discriminant_sign(eq: EquationSpec) -> int:
    """-1, 0 or +1, treating a discriminant inside the rounding band as zero."""
    d = discriminant(eq)
    k = eq.m + 1.0 if eq.reaction is Reaction.T1I else 1.0
    scale = eq.lam ** 2 + 4.0 * abs(eq.l1 * k * eq.l3)
    if abs(d) <= DELTA_TOL * scale:
        return 0
    return 1 if d > 0 else -1


def residual(eq: EquationSpec, jet: Jet2, t=None, x=None):
    """U_t - [U^m U_x]_x - conv - C(U) evaluated from a jet of U.

    ``t`` and ``x`` are only used to label an :class:`EvaluationError`.
    """
    u, ut, ux, uxx = jet.u, jet.ut, jet.ux, jet.uxx
    _check_positive(eq, u)
    m = eq.m
    with np.errstate(all="ignore"):
        um = np.power(u, m)
        diffusion = m * np.power(u, m - 1.0) * ux * ux + um * uxx
        conv_pow = um if eq.convection is Convection.POWER_M else np.power(u, m + 1.0)
        out = ut - diffusion - eq.lam * conv_pow * ux - reaction_value(eq, u)
    if not np.all(np.isfinite(out)):
        raise EvaluationError("residual is not finite", t=t, x=x)
    return out


def normalized_residual(eq: EquationSpec, jet: Jet2, t=None, x=None):
    """|residual| / (1 + |U_t| + |U_xx|)."""
    r = residual(eq, jet, t, x)
    return np.abs(r) / (1.0 + np.abs(jet.ut) + np.abs(jet.uxx))
