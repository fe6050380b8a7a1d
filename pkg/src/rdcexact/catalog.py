"""Closed-form exact solutions of the RDC equation families.

Each family is described by a :class:`FamilyInfo` row: the equation it solves,
the parameter constraints, the integration constants it uses and a function
that builds the *bracket* ``V(t, x)``.  The solution is obtained from the
bracket by one of two maps:

* ``power``: ``U = V^(1/(m+1))`` with ``V > 0`` enforced,
* ``exp``:   ``U = exp(V)`` (diffusion exponent ``m = -1``).

Brackets are written with the functions of :mod:`rdcexact.jet`, so the same
code yields exact derivatives when fed seeded jets and plain values when fed
floats or arrays.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Callable, NamedTuple

import numpy as np

from . import jet as J
from .cubic import CubicKind, CubicSolution, solve_cubic
from .equations import (Convection, EquationSpec, Reaction, discriminant,
                        discriminant_sign)
from .errors import ConstraintError, DomainError, UsageError
from .jet import Jet2

# exp(V) stays a normal double well inside this bound
EXP_LIMIT = 700.0
REL_TOL = 1e-12


class Family(str, enum.Enum):
    T1I_LIN = "T1I_LIN"
    T1I_EXP = "T1I_EXP"
    T1I_DEG = "T1I_DEG"
    T1I_TRIG = "T1I_TRIG"
    T1I_FAST = "T1I_FAST"
    T1II_LIN = "T1II_LIN"
    T1II_EXP = "T1II_EXP"
    T1II_DEG = "T1II_DEG"
    T1II_TRIG = "T1II_TRIG"
    T1III_H = "T1III_H"
    T2I_A = "T2I_A"
    T2I_B = "T2I_B"
    T2II_S1A = "T2II_S1A"
    T2II_S1B = "T2II_S1B"
    T2II_S2A = "T2II_S2A"
    T2II_S2B = "T2II_S2B"
    T2II_S3 = "T2II_S3"
    T2II_FN = "T2II_FN"
    T2II_S4 = "T2II_S4"


T1_FAMILIES = tuple(f for f in Family if f.value.startswith("T1"))
T2II_FAMILIES = tuple(f for f in Family if f.value.startswith("T2II"))


@dataclass(frozen=True)
class SolutionInstance:
    """A catalog family bound to an equation and its integration constants."""

    family: Family
    eq: EquationSpec
    c1: float = 0.0
    c2: float = 0.0
    c3: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "family", Family(self.family))
        for name in ("c1", "c2", "c3"):
            object.__setattr__(self, name, float(getattr(self, name)))
        check_constraints(self.family, self.eq)

    @property
    def info(self) -> "FamilyInfo":
        return CATALOG[self.family]

    def as_dict(self) -> dict:
        d = {"family": self.family.value, **self.eq.as_dict()}
        for name in self.info.constants:
            d[name] = getattr(self, name)
        return d


@dataclass(frozen=True)
class DerivedCoefficients:
    """Cubic data and exponent coefficients of an R_T2ii family."""

    roots: CubicSolution
    alphas: tuple[float, ...] = ()
    betas: tuple[float, ...] = ()
    gammas: tuple[float, ...] = ()
    a: float | None = None
    b: float | None = None

    @property
    def p(self) -> float:
        return self.roots.p

    @property
    def q(self) -> float:
        return self.roots.q


class Validity(NamedTuple):
    ok: object          # bool or boolean array
    diagnostic: str


# ---------------------------------------------------------------------------
# constraint checks
# ---------------------------------------------------------------------------

def _close(a: float, b: float) -> bool:
    return abs(a - b) <= REL_TOL * max(1.0, abs(a), abs(b))


def _fail(family: Family, msg: str):
    raise ConstraintError(f"{family.value}: {msg}")


def _need_reaction(family: Family, eq: EquationSpec, reaction: Reaction):
    if eq.reaction is not reaction:
        _fail(family, f"needs reaction {reaction.value}, got {eq.reaction.value}")


def _check_t1_branch(family: Family, eq: EquationSpec, want: int):
    if eq.l1 == 0.0:
        _fail(family, "needs lambda1 != 0")
    sign = discriminant_sign(eq)
    if sign != want:
        name = {1: "> 0", 0: "= 0", -1: "< 0"}[want]
        _fail(family, f"needs delta {name}, got delta = {discriminant(eq):.17g}")


def t2ii_pq(eq: EquationSpec) -> tuple[float, float]:
    """Cubic coefficients of the linearised reduction for reaction R_T2ii."""
    return eq.l2 / (3.0 * eq.l1), eq.l3 / (2.0 * eq.l1)


_T2II_KIND = {
    Family.T2II_S1A: CubicKind.TRIPLE,
    Family.T2II_S1B: CubicKind.TRIPLE,
    Family.T2II_S2A: CubicKind.REAL_PLUS_DOUBLE,
    Family.T2II_S2B: CubicKind.REAL_PLUS_DOUBLE,
    Family.T2II_S3: CubicKind.THREE_DISTINCT,
    Family.T2II_FN: CubicKind.THREE_DISTINCT,
    Family.T2II_S4: CubicKind.ONE_REAL_PAIR,
}


def check_constraints(family: Family, eq: EquationSpec) -> None:
    """Raise :class:`ConstraintError` unless ``eq`` is solved by ``family``."""
    family = Family(family)
    R = Reaction
    if family in (Family.T1I_LIN, Family.T1I_EXP, Family.T1I_DEG, Family.T1I_TRIG):
        _need_reaction(family, eq, R.T1I)
        if family is Family.T1I_LIN:
            if eq.l1 != 0.0:
                _fail(family, "needs lambda1 = 0")
            if eq.l2 == 0.0:
                _fail(family, "needs lambda2 != 0")
        else:
            _check_t1_branch(family, eq, {Family.T1I_EXP: 1, Family.T1I_DEG: 0,
                                          Family.T1I_TRIG: -1}[family])
    elif family is Family.T1I_FAST:
        _need_reaction(family, eq, R.T1I)
        if eq.m != -2.0 or eq.l1 == 0.0 or eq.l3 != 0.0 or not _close(eq.l2, -eq.l1):
            _fail(family, "needs m = -2, lambda1 != 0, lambda2 = -lambda1, lambda3 = 0 "
                          "(reaction lambda1 U (1 - U))")
    elif family in (Family.T1II_LIN, Family.T1II_EXP, Family.T1II_DEG, Family.T1II_TRIG):
        _need_reaction(family, eq, R.T1II)
        if family is Family.T1II_LIN:
            if eq.l1 != 0.0:
                _fail(family, "needs lambda1 = 0")
        else:
            _check_t1_branch(family, eq, {Family.T1II_EXP: 1, Family.T1II_DEG: 0,
                                          Family.T1II_TRIG: -1}[family])
    elif family is Family.T1III_H:
        _need_reaction(family, eq, R.T1III)
    elif family in (Family.T2I_A, Family.T2I_B):
        _need_reaction(family, eq, R.T2I)
        if family is Family.T2I_A and eq.l1 != 0.0:
            _fail(family, "needs lambda1 = 0")
        if family is Family.T2I_B and eq.l1 == 0.0:
            _fail(family, "needs lambda1 != 0")
    else:
        _need_reaction(family, eq, R.T2II)
        if family is Family.T2II_FN:
            if eq.l2 == 0.0 or eq.l3 != 0.0 or not _close(eq.l1, -eq.l2):
                _fail(family, "needs lambda1 = -lambda2 != 0 and lambda3 = 0")
        if family in (Family.T2II_S2A, Family.T2II_S2B):
            want = -3.0 * float(np.cbrt(eq.l1 * eq.l3 ** 2 / 4.0))
            if eq.l3 == 0.0 or not math.isclose(eq.l2, want, rel_tol=1e-9, abs_tol=1e-12):
                _fail(family, f"needs lambda3 != 0 and lambda2 = -3 cbrt(lambda1 lambda3^2 / 4) "
                              f"= {want:.17g}, got {eq.l2:.17g}")
        kind = solve_cubic(*t2ii_pq(eq)).kind
        if kind is not _T2II_KIND[family]:
            _fail(family, f"cubic classification is {kind.value}, "
                          f"family needs {_T2II_KIND[family].value}")


def derive_coefficients(s: SolutionInstance) -> DerivedCoefficients:
    """Roots of the reduction cubic and the exponent coefficients of a T2II family."""
    if s.family not in T2II_FAMILIES:
        raise UsageError(f"{s.family.value} is not an R_T2ii family")
    eq = s.eq
    lam, l1 = eq.lam, eq.l1
    p, q = t2ii_pq(eq)
    roots = solve_cubic(p, q)
    want = _T2II_KIND[s.family]
    if roots.kind is not want:
        raise ConstraintError(f"{s.family.value}: cubic classification {roots.kind.value} "
                              f"does not match {want.value}")
    r = l1 / (2.0 * lam)           # lambda1 / (2 lambda)
    s1 = 3.0 * l1 / (2.0 * lam)    # lambda1* = 3 lambda1 / (2 lambda)
    if want is CubicKind.TRIPLE:
        return DerivedCoefficients(roots, alphas=(0.0, 0.0, 0.0))
    if want is CubicKind.REAL_PLUS_DOUBLE:
        a1, a2 = roots.roots
        betas = (s1 * a2 * (s1 - lam * a2), s1 * a2, -r * (s1 + 2.0 * lam * a2), -r)
        return DerivedCoefficients(roots, alphas=(a1, a2), betas=betas)
    if want is CubicKind.THREE_DISTINCT:
        al = roots.roots
        betas = tuple(-r * (lam * a * a + s1 * a) for a in al)
        gammas = tuple(r * a for a in al)
        return DerivedCoefficients(roots, alphas=al, betas=betas, gammas=gammas)
    a, b = roots.a, roots.b
    betas = (-s1 * a,
             -r * (lam * (b * b + 3.0 * a * a) - 3.0 * s1 * a),
             r * b,
             -r * b * (2.0 * lam * a + s1))
    return DerivedCoefficients(roots, alphas=(roots.roots[0],), betas=betas, a=a, b=b)


# ---------------------------------------------------------------------------
# brackets
# ---------------------------------------------------------------------------

def _k(eq: EquationSpec) -> float:
    return eq.m + 1.0


def _lin_bracket(s, T, X, k):
    eq = s.eq
    return eq.l2 * k * T + s.c1 + s.c2 * J.exp(-eq.lam * X) + (eq.l2 * eq.l3 * k / eq.lam) * X


def _branch_bracket(s, T, X, k, branch):
    eq = s.eq
    d = discriminant(eq)
    shift = eq.l2 / eq.l1
    growth = eq.l1 * k * T - 0.5 * eq.lam * X
    if branch == "exp":
        w = 0.5 * math.sqrt(d)
        body = s.c1 * J.exp(growth + w * X) + s.c2 * J.exp(growth - w * X)
    elif branch == "deg":
        body = J.exp(growth) * (s.c1 + s.c2 * X)
    else:
        w = 0.5 * math.sqrt(-d)
        body = J.exp(growth) * (s.c1 * J.cos(w * X) + s.c2 * J.sin(w * X))
    return body - shift


def _fast_bracket(s, T, X):
    eq = s.eq
    return 1.0 + J.exp(-eq.l1 * T) * (s.c1 + s.c2 * J.exp(-eq.lam * X))


def _t1iii_bracket(s, T, X):
    eq = s.eq
    return 0.5 * eq.l2 * T + s.c1 + s.c2 * J.exp(-eq.lam * X) - (eq.l3 / (2.0 * eq.lam)) * X


def _t2i_a_bracket(s, T, X):
    eq = s.eq
    k = _k(eq)
    num = -X + eq.l2 * k * (0.5 * eq.lam * T * T + s.c1 * T) + s.c2
    return num / (eq.lam * T + s.c1)


def _t2i_b_bracket(s, T, X):
    eq = s.eq
    k = _k(eq)
    decay = J.exp(-eq.l1 * k * T)
    num = k * (-(eq.l1 / eq.lam) * X + eq.l2 * T - (s.c1 * eq.l2 / (eq.l1 * k)) * decay) + s.c2
    return num / (1.0 + s.c1 * decay)


def _s1a_bracket(s, T, X):
    eq = s.eq
    lam, l1 = eq.lam, eq.l1
    return 1.0 / (-(3.0 * l1 * l1 / (4.0 * lam * lam)) * T + (l1 / (2.0 * lam)) * X + s.c1)


def _s1b_bracket(s, T, X):
    eq = s.eq
    lam, l1 = eq.lam, eq.l1
    z = X - (3.0 * l1 / (2.0 * lam)) * T
    num = 2.0 * z + 2.0 * lam * s.c1 / l1
    den = (l1 / (2.0 * lam)) * z * z + s.c1 * z - 2.0 * lam * T + s.c2
    return num / den


def _s2_bracket(s, T, X, with_linear):
    dc = derive_coefficients(s)
    a2 = dc.alphas[1]
    b0, b1, b2, b3 = dc.betas
    E = J.exp(b0 * T - b1 * X)
    if not with_linear:
        return (-2.0 * s.c1 * a2 * E + a2 * s.c2) / (s.c1 * E + s.c2)
    lin = b2 * T - b3 * X + s.c3
    return (-2.0 * s.c1 * a2 * E + s.c2 * a2 * (lin + 1.0 / a2)) / (s.c1 * E + s.c2 * lin)


def _s3_bracket(s, T, X):
    dc = derive_coefficients(s)
    num = 0.0
    den = 0.0
    for a, c, b, g in zip(dc.alphas, (s.c1, s.c2, s.c3), dc.betas, dc.gammas):
        e = c * J.exp(b * T + g * X)
        num = num + a * e
        den = den + e
    return num / den


def _fn_bracket(s, T, X):
    eq = s.eq
    lam, l2 = eq.lam, eq.l2
    dc = derive_coefficients(s)
    _, a2, a3 = dc.alphas
    r = l2 / (2.0 * lam)

    def wave(a):
        return J.exp(r * (lam * a * a - (3.0 * l2 / (2.0 * lam)) * a) * T - r * a * X)

    e2 = s.c2 * wave(a2)
    e3 = s.c3 * wave(a3)
    return (a2 * e2 + a3 * e3) / (s.c1 + e2 + e3)


def _s4_bracket(s, T, X):
    dc = derive_coefficients(s)
    a, b = dc.a, dc.b
    b0, b1, b2, b3 = dc.betas
    E = J.exp(b0 * X + b1 * T)
    ph = b2 * X + b3 * T - s.c3
    cph, sph = J.cos(ph), J.sin(ph)
    num = -2.0 * s.c1 * a * E + s.c2 * (a * cph - b * sph)
    den = s.c1 * E + s.c2 * cph
    return num / den


# ---------------------------------------------------------------------------
# metadata table
# ---------------------------------------------------------------------------

EQ_T1I = "U_t = [U^m U_x]_x + λ U^m U_x + (λ₁ U^(m+1) + λ₂)(U^(-m) - λ₃)"
EQ_T1I_LIN = "U_t = [U^m U_x]_x + λ U^m U_x + λ₂ U^(-m) - λ₂ λ₃"
EQ_FAST = "U_t = [U^(-2) U_x]_x + λ U^(-2) U_x + λ₁ U (1 - U)"
EQ_T1II = "U_t = [U^(-1) U_x]_x + λ U^(-1) U_x + (λ₁ ln U + λ₂)(U - λ₃)"
EQ_T1III = "U_t = [U^(-1/2) U_x]_x + λ U^(-1/2) U_x + λ₂ U^(1/2) + λ₃"
EQ_T2I_A = "U_t = [U^m U_x]_x + λ U^(m+1) U_x + λ₂ U^(-m)"
EQ_T2I_B = "U_t = [U^m U_x]_x + λ U^(m+1) U_x + λ₁ U + λ₂ U^(-m)"
EQ_T2II = ("U_t = [U^(-1/2) U_x]_x + λ U^(1/2) U_x "
           "+ (λ₁ U^(3/2) + λ₂ U^(1/2) + λ₃)(λ₁/(2λ²) + U^(1/2))")
EQ_T2II_S1 = "U_t = [U^(-1/2) U_x]_x + λ U^(1/2) U_x + λ₁ U² + (λ₁²/(2λ²)) U^(3/2)"
EQ_T2II_S2 = ("U_t = [U^(-1/2) U_x]_x + λ U^(1/2) U_x "
              "+ (λ₁ U^(3/2) - 3 cbrt(λ₁ λ₃²/4) U^(1/2) + λ₃)(λ₁/(2λ²) + U^(1/2))")
EQ_FN = ("U_t = [U^(-1/2) U_x]_x + λ U^(1/2) U_x + λ₂ U^(1/2) (U^(1/2) - δ)(1 - U), "
         "δ = λ₂/(2λ²)")


@dataclass(frozen=True)
class FamilyInfo:
    id: Family
    equation: str
    constraints: tuple[str, ...]
    constants: tuple[str, ...]
    anchor: str
    reaction: Reaction
    bracket: Callable = field(repr=False, compare=False)
    to_u: str = "power"            # or "exp"

    def as_dict(self) -> dict:
        return {"id": self.id.value, "equation": self.equation,
                "constraints": list(self.constraints), "constants": list(self.constants),
                "anchor": self.anchor}


def _info(fid, equation, constraints, constants, anchor, reaction, bracket, to_u="power"):
    return FamilyInfo(Family(fid), equation, tuple(constraints), tuple(constants), anchor,
                      reaction, bracket, to_u)


_C12 = ("c1", "c2")
_C123 = ("c1", "c2", "c3")

CATALOG: dict[Family, FamilyInfo] = {i.id: i for i in [
    _info("T1I_LIN", EQ_T1I_LIN, ["λ₂ ≠ 0", "m ≠ -1", "λ₁ = 0"], _C12,
          "power diffusion, ansatz V = λ₂* t + φ(x), linear φ-equation",
          Reaction.T1I, lambda s, T, X: _lin_bracket(s, T, X, _k(s.eq))),
    _info("T1I_EXP", EQ_T1I, ["m ≠ -1", "λ₁ ≠ 0", "δ = λ² + 4λ₁(m+1)λ₃ > 0"], _C12,
          "power diffusion, ansatz V = φ(x) exp(λ₁* t) - λ₂*/λ₁*, exponential branch",
          Reaction.T1I, lambda s, T, X: _branch_bracket(s, T, X, _k(s.eq), "exp")),
    _info("T1I_DEG", EQ_T1I, ["m ≠ -1", "λ₁ ≠ 0", "δ = λ² + 4λ₁(m+1)λ₃ = 0"], _C12,
          "power diffusion, ansatz V = φ(x) exp(λ₁* t) - λ₂*/λ₁*, degenerate branch",
          Reaction.T1I, lambda s, T, X: _branch_bracket(s, T, X, _k(s.eq), "deg")),
    _info("T1I_TRIG", EQ_T1I, ["m ≠ -1", "λ₁ ≠ 0", "δ = λ² + 4λ₁(m+1)λ₃ < 0"], _C12,
          "power diffusion, ansatz V = φ(x) exp(λ₁* t) - λ₂*/λ₁*, trigonometric branch",
          Reaction.T1I, lambda s, T, X: _branch_bracket(s, T, X, _k(s.eq), "trig")),
    _info("T1I_FAST", EQ_FAST, ["m = -2", "λ₁ ≠ 0", "λ₂ = -λ₁", "λ₃ = 0", "δ = λ²"], _C12,
          "Murray equation with fast diffusion, exponential branch",
          Reaction.T1I, _fast_bracket),
    _info("T1II_LIN", EQ_T1II, ["m = -1", "λ₁ = 0"], _C12,
          "exponential substitution V = ln U, ansatz V = λ₂ t + φ(x)",
          Reaction.T1II, lambda s, T, X: _lin_bracket(s, T, X, 1.0), "exp"),
    _info("T1II_EXP", EQ_T1II, ["m = -1", "λ₁ ≠ 0", "δ = λ² + 4λ₁λ₃ > 0"], _C12,
          "exponential substitution V = ln U, exponential branch",
          Reaction.T1II, lambda s, T, X: _branch_bracket(s, T, X, 1.0, "exp"), "exp"),
    _info("T1II_DEG", EQ_T1II, ["m = -1", "λ₁ ≠ 0", "δ = λ² + 4λ₁λ₃ = 0"], _C12,
          "exponential substitution V = ln U, degenerate branch",
          Reaction.T1II, lambda s, T, X: _branch_bracket(s, T, X, 1.0, "deg"), "exp"),
    _info("T1II_TRIG", EQ_T1II, ["m = -1", "λ₁ ≠ 0", "δ = λ² + 4λ₁λ₃ < 0"], _C12,
          "exponential substitution V = ln U, trigonometric branch",
          Reaction.T1II, lambda s, T, X: _branch_bracket(s, T, X, 1.0, "trig"), "exp"),
    _info("T1III_H", EQ_T1III, ["m = -1/2", "h = λ₂/2 (constant branch)"], _C12,
          "half-power diffusion, U = (h t + φ(x))² with constant h",
          Reaction.T1III, _t1iii_bracket),
    _info("T2I_A", EQ_T2I_A, ["m ≠ -1", "λ₁ = 0"], _C12,
          "convection λ U^(m+1) U_x, operator with x-transport, λ₁ = 0",
          Reaction.T2I, _t2i_a_bracket),
    _info("T2I_B", EQ_T2I_B, ["m ≠ -1", "λ₁ ≠ 0"], _C12,
          "convection λ U^(m+1) U_x, operator with x-transport, λ₁ ≠ 0",
          Reaction.T2I, _t2i_b_bracket),
    _info("T2II_S1A", EQ_T2II_S1, ["m = -1/2", "λ₁ ≠ 0", "λ₂ = λ₃ = 0 (p = q = 0)"], ("c1",),
          "linearised reduction, triple root k = 0, first solution",
          Reaction.T2II, _s1a_bracket),
    _info("T2II_S1B", EQ_T2II_S1, ["m = -1/2", "λ₁ ≠ 0", "λ₂ = λ₃ = 0 (p = q = 0)"], _C12,
          "linearised reduction, triple root k = 0, second solution",
          Reaction.T2II, _s1b_bracket),
    _info("T2II_S2A", EQ_T2II_S2, ["m = -1/2", "λ₁ ≠ 0", "λ₃ ≠ 0",
                                   "λ₂ = -3·(λ₁λ₃²/4)^(1/3)", "p³ = -q² ≠ 0"], _C12,
          "linearised reduction, simple plus double root, exponential solution",
          Reaction.T2II, lambda s, T, X: _s2_bracket(s, T, X, False)),
    _info("T2II_S2B", EQ_T2II_S2, ["m = -1/2", "λ₁ ≠ 0", "λ₃ ≠ 0",
                                   "λ₂ = -3·(λ₁λ₃²/4)^(1/3)", "p³ = -q² ≠ 0"], _C123,
          "linearised reduction, simple plus double root, exponential-linear solution",
          Reaction.T2II, lambda s, T, X: _s2_bracket(s, T, X, True)),
    _info("T2II_S3", EQ_T2II, ["m = -1/2", "λ₁ ≠ 0", "p³ + q² < 0"], _C123,
          "linearised reduction, three distinct real roots (two-shock wave)",
          Reaction.T2II, _s3_bracket),
    _info("T2II_FN", EQ_FN, ["m = -1/2", "λ₁ = -λ₂ ≠ 0", "λ₃ = 0", "p = -1/3, q = 0"], _C123,
          "generalised Fitzhugh-Nagumo equation with fast diffusion",
          Reaction.T2II, _fn_bracket),
    _info("T2II_S4", EQ_T2II, ["m = -1/2", "λ₁ ≠ 0", "p³ + q² > 0"], _C123,
          "linearised reduction, one real root and a complex pair (quasi-periodic)",
          Reaction.T2II, _s4_bracket),
]}


def list_catalog() -> list[dict]:
    return [CATALOG[f].as_dict() for f in Family]


# ---------------------------------------------------------------------------
# evaluation
# ---------------------------------------------------------------------------

def _broadcast(j: Jet2) -> Jet2:
    parts = np.broadcast_arrays(*(np.asarray(v, dtype=float) for v in j.astuple()))
    if parts[0].ndim == 0:
        return Jet2(*(float(p) for p in parts))
    return Jet2(*(p.copy() for p in parts))


def bracket(s: SolutionInstance, t, x) -> Jet2:
    """The pre-power field V(t, x) with its exact partials.

    For ``power`` families ``V = U^(m+1)``; for ``exp`` families ``V = ln U``.
    """
    with np.errstate(over="ignore", invalid="ignore"):
        V = J.lift(s.info.bracket(s, J.seed_t(t), J.seed_x(x)))
    return _broadcast(V)


def bracket_value(s: SolutionInstance, t, x):
    with np.errstate(all="ignore"):
        return s.info.bracket(s, np.asarray(t, dtype=float) if np.ndim(t) else float(t),
                              np.asarray(x, dtype=float) if np.ndim(x) else float(x))


def _exponent(s: SolutionInstance) -> float:
    return 1.0 / (s.eq.m + 1.0)


def _check_bracket(s: SolutionInstance, V, t, x) -> None:
    V = np.asarray(V, dtype=float)
    if s.info.to_u == "exp":
        bad = ~(np.abs(V) <= EXP_LIMIT)
        if np.any(bad):
            raise DomainError(f"{s.family.value}: ln U = {float(V[bad].flat[0]) if V.ndim else float(V)!r} "
                              f"is outside the representable range at {_where(t, x, bad)}",
                              value=float(V[bad].flat[0]) if V.ndim else float(V), where="ln U")
        return
    bad = ~(V > 0)
    if np.any(bad):
        v = float(V[bad].flat[0]) if V.ndim else float(V)
        raise DomainError(f"{s.family.value}: bracket U^(m+1) = {v!r} is not strictly positive "
                          f"at {_where(t, x, bad)}", value=v, where="U^(m+1)")


def _where(t, x, bad) -> str:
    tt, xx = np.broadcast_arrays(np.asarray(t, dtype=float), np.asarray(x, dtype=float))
    if tt.ndim == 0:
        return f"(t, x) = ({float(tt)!r}, {float(xx)!r})"
    idx = np.argmax(np.broadcast_to(bad, tt.shape))
    return f"(t, x) = ({tt.flat[idx]!r}, {xx.flat[idx]!r})"


def _bracket_to_u(s: SolutionInstance, V):
    if s.info.to_u == "exp":
        return J.exp(V)
    return J.power(V, _exponent(s))


def evaluate(s: SolutionInstance, t, x) -> Jet2:
    """U(t, x) with exact partials ``u_t``, ``u_x``, ``u_xx``."""
    V = bracket(s, t, x)
    _check_bracket(s, V.u, t, x)
    with np.errstate(over="ignore", under="ignore"):
        U = _bracket_to_u(s, V)
    U = _broadcast(U)
    finite = np.isfinite(U.u) & np.isfinite(U.ut) & np.isfinite(U.ux) & np.isfinite(U.uxx)
    if not np.all(finite):
        raise DomainError(f"{s.family.value}: U or its derivatives overflow at "
                          f"{_where(t, x, ~finite)}", where="U")
    return U


def value(s: SolutionInstance, t, x):
    """U(t, x) without derivatives.

    Unlike :func:`evaluate` a bracket equal to zero is accepted (giving U = 0
    when the exponent is positive), so boundary zeros can be inspected.
    """
    V = np.asarray(bracket_value(s, t, x), dtype=float)
    if s.info.to_u == "exp":
        _check_bracket(s, V, t, x)
        out = np.exp(V)
    else:
        bad = ~(V >= 0) | ((V == 0) & (_exponent(s) < 0))
        if np.any(bad):
            _check_bracket(s, np.where(bad, V, 1.0), t, x)
        out = np.power(V, _exponent(s))
    return float(out) if out.ndim == 0 else out


def validity(s: SolutionInstance, t, x) -> Validity:
    """Whether (t, x) lies inside the family's domain, with a reason if not.

    Power families need a strictly positive, finite bracket (for the
    R_T2ii families this is the quotient ``V = U^(1/2)`` before
    squaring); exponential families need ``|ln U| <= EXP_LIMIT``.
    """
    with np.errstate(all="ignore"):
        V = np.asarray(bracket_value(s, t, x), dtype=float)
        if s.info.to_u == "exp":
            ok = np.isfinite(V) & (np.abs(V) <= EXP_LIMIT)
            reason = "ln U is not finite or exceeds the double-precision range"
        else:
            U = np.power(np.where(V > 0, V, 1.0), _exponent(s))
            ok = np.isfinite(V) & (V > 0) & np.isfinite(U) & (U > 0)
            reason = ("quotient V = U^(1/2) must be strictly positive"
                      if s.family in T2II_FAMILIES else "bracket U^(m+1) must be strictly positive")
    if ok.ndim == 0:
        ok = bool(ok)
        return Validity(ok, "ok" if ok else f"{s.family.value}: {reason} (value {float(V)!r})")
    n_bad = int(ok.size - np.count_nonzero(ok))
    return Validity(ok, "ok" if n_bad == 0 else f"{s.family.value}: {reason} at {n_bad} of {ok.size} points")


def select_branch(eq: EquationSpec) -> Family:
    """Family for an R_T1i or R_T1ii equation chosen by the sign of delta."""
    if eq.reaction is Reaction.T1I:
        names = (Family.T1I_LIN, Family.T1I_EXP, Family.T1I_DEG, Family.T1I_TRIG)
    elif eq.reaction is Reaction.T1II:
        names = (Family.T1II_LIN, Family.T1II_EXP, Family.T1II_DEG, Family.T1II_TRIG)
    else:
        raise UsageError(f"branch selection needs R_T1i or R_T1ii, got {eq.reaction.value}")
    if eq.l1 == 0.0:
        return names[0]
    return {1: names[1], 0: names[2], -1: names[3]}[discriminant_sign(eq)]


def matched_branch_constants(delta: float, c1: float, c2: float) -> tuple[float, float]:
    """Constants of the exp/trig branch that tend to the degenerate ``c1 + c2 x``.

    As delta -> 0 the exponential pair ``c1' e^{w x} + c2' e^{-w x}`` (or
    ``c1' cos wx + c2' sin wx``) with ``w = sqrt|delta|/2`` reproduces
    ``c1 + c2 x`` to first order.
    """
    if delta == 0.0:
        return c1, c2
    w = 0.5 * math.sqrt(abs(delta))
    if delta > 0:
        return 0.5 * (c1 + c2 / w), 0.5 * (c1 - c2 / w)
    return c1, c2 / w


def surface(s: SolutionInstance, t, x) -> np.ndarray:
    """U on a grid with NaN outside the domain.

    Points where the bracket vanishes and U = 0 is a genuine value (positive
    exponent) are kept, so zero boundary values show up as zeros.
    """
    T, X = np.broadcast_arrays(np.asarray(t, dtype=float), np.asarray(x, dtype=float))
    with np.errstate(all="ignore"):
        V = np.asarray(bracket_value(s, T, X), dtype=float)
        ok = np.asarray(validity(s, T, X).ok, dtype=bool)
        if s.info.to_u == "power" and _exponent(s) > 0:
            ok = ok | (V == 0)
    out = np.full(T.shape, np.nan)
    if np.any(ok):
        out[ok] = value(s, T[ok], X[ok])
    return out
