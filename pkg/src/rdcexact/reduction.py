"""Reduction scaffolding: substitution, ansatz shapes and linearisation.

These pieces re-derive the catalog formulas step by step so each step can be
checked on its own:

* ``V = U^(m+1)`` (or ``ln U`` when m = -1) and its inverse,
* the ansatz ``V = l2* t + phi(x)`` / ``V = phi(x) exp(l1* t) - l2*/l1*``,
* the general solution ``phi`` of ``phi'' + lam phi' - l2* l3 = 0``,
* ``V = W_y / W`` with ``W`` in the kernel of ``W''' + 3p W' + 2q W``,
* the rescaling ``y = (l1*/3) x``.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import jet as J
from .cubic import CubicKind, CubicSolution
from .equations import EquationSpec, Reaction
from .errors import DomainError, UsageError
from .jet import Jet2


class ReducedContext(str, enum.Enum):
    T1_POWER = "T1Power"
    T1_EXP = "T1Exp"
    T2II = "T2ii"


@dataclass(frozen=True)
class ReducedParams:
    l1s: float
    l2s: float
    l3s: float
    context: ReducedContext

    @classmethod
    def from_equation(cls, eq: EquationSpec) -> "ReducedParams":
        if eq.reaction is Reaction.T1I:
            k = eq.m + 1.0
            return cls(eq.l1 * k, eq.l2 * k, eq.l3, ReducedContext.T1_POWER)
        if eq.reaction is Reaction.T1II:
            return cls(eq.l1, eq.l2, eq.l3, ReducedContext.T1_EXP)
        if eq.reaction is Reaction.T2II:
            return cls(3.0 * eq.l1 / (2.0 * eq.lam), eq.l2 / 2.0, eq.l3 / 2.0, ReducedContext.T2II)
        raise UsageError(f"no reduced parameters for {eq.reaction.value}")


def u_to_v(u: Jet2, m: float) -> Jet2:
    if m == -1.0:
        return J.log(u)
    J._require_positive(u.u, "U")
    return J.power(u, m + 1.0)


def v_to_u(v: Jet2, m: float) -> Jet2:
    if m == -1.0:
        return J.exp(v)
    r = 1.0 / (m + 1.0)
    if not float(r).is_integer():
        J._require_positive(v.u, "V")
    return J.power(v, r)


def build_ansatz(rp: ReducedParams, phi: Jet2, t: float) -> Jet2:
    """Ansatz solving ``V_t = l1* V + l2*`` for a given phi(x) jet.

    ``phi`` only carries x-derivatives; its t-slot is ignored.
    """
    if rp.l1s == 0.0:
        return Jet2(rp.l2s * t + phi.u, rp.l2s + 0.0 * phi.u, phi.ux, phi.uxx)
    g = np.exp(rp.l1s * t)
    return Jet2(phi.u * g - rp.l2s / rp.l1s, rp.l1s * phi.u * g, phi.ux * g, phi.uxx * g)


def phi_linear_solution(lam: float, l2s: float, l3: float, c1: float, c2: float, x) -> Jet2:
    """General solution of ``phi'' + lam phi' - l2* l3 = 0`` as an x-jet."""
    if lam == 0.0:
        raise UsageError("phi equation needs lambda != 0")
    e = c2 * np.exp(-lam * np.asarray(x, dtype=float))
    slope = l2s * l3 / lam
    phi = c1 + e + slope * x
    return Jet2(phi, 0.0 * phi, -lam * e + slope, lam * lam * e)


def scale_x_to_y(l1s: float, x):
    if l1s == 0.0:
        raise UsageError("rescaling needs lambda1* != 0")
    return l1s / 3.0 * x


def scale_y_to_x(l1s: float, y):
    if l1s == 0.0:
        raise UsageError("rescaling needs lambda1* != 0")
    return 3.0 / l1s * y


def kernel_basis(roots: CubicSolution, y):
    """Basis of the kernel of ``W''' + 3pW' + 2qW`` and derivatives up to third order.

    Returns a list of ``(w, w', w'', w''')`` tuples of arrays.
    """
    y = np.asarray(y, dtype=float)
    kind = roots.kind
    if kind is CubicKind.TRIPLE:
        one, zero = np.ones_like(y), np.zeros_like(y)
        return [(one, zero, zero, zero), (y, one, zero, zero), (y * y, 2 * y, 2 * one, zero)]

    def expo(k):
        e = np.exp(k * y)
        return (e, k * e, k * k * e, k ** 3 * e)

    if kind is CubicKind.REAL_PLUS_DOUBLE:
        a1, a2 = roots.roots
        e = np.exp(a2 * y)
        # y e^{a y}: derivatives (a^n y + n a^(n-1)) e^{a y}
        ye = (y * e, (a2 * y + 1) * e, (a2 ** 2 * y + 2 * a2) * e, (a2 ** 3 * y + 3 * a2 ** 2) * e)
        return [expo(a1), expo(a2), ye]
    if kind is CubicKind.THREE_DISTINCT:
        return [expo(k) for k in roots.roots]
    a, b = roots.a, roots.b
    z = complex(a, b)
    ez = np.exp(z * y)
    cs = tuple((z ** n * ez).real for n in range(4))
    sn = tuple((z ** n * ez).imag for n in range(4))
    return [expo(roots.roots[0]), cs, sn]


def w_to_v(coeffs: Sequence[float], roots: CubicSolution, y, min_rel: float = 0.0) -> Jet2:
    """``V = W_y / W`` with ``W = sum(c_i w_i)``; returned as a jet in y (``ux`` = d/dy).

    Raises :class:`DomainError` where ``|W|`` drops below ``min_rel`` times the
    largest ``|W|`` over the supplied points (or hits zero).
    """
    basis = kernel_basis(roots, y)
    W = [sum(c * b[n] for c, b in zip(coeffs, basis)) for n in range(4)]
    w0 = np.asarray(W[0], dtype=float)
    scale = float(np.max(np.abs(w0))) if w0.size else 0.0
    if np.any(w0 == 0) or np.any(np.abs(w0) < min_rel * scale):
        raise DomainError("W is too close to zero for V = W_y/W", value=float(np.min(np.abs(w0))),
                          where="W")
    Wj = Jet2(w0, 0.0, W[1], W[2])
    Wyj = Jet2(W[1], 0.0, W[2], W[3])
    return Wyj / Wj


def linearized_ode_residual(v: Jet2, p: float, q: float):
    """``V_yy + 3 V V_y + V^3 + 3 p V + 2 q`` for a y-jet of V."""
    return v.uxx + 3.0 * v.u * v.ux + v.u ** 3 + 3.0 * p * v.u + 2.0 * q


def ansatz_constraint_residual(rp: ReducedParams, v: Jet2):
    """``V_t - (l1* V + l2*)``: zero on any solution built from the ansatz."""
    return v.ut - (rp.l1s * v.u + rp.l2s)


def t2ii_constraint_residual(eq: EquationSpec, v: Jet2):
    """Invariant-surface condition of the R_T2ii operator in V = U^(1/2)::

        V_t - [(lam V - l1*) V_x + lam l1* V^3 / 3 + l2* V + l3*]
    """
    rp = ReducedParams.from_equation(eq)
    lam = eq.lam
    rhs = (lam * v.u - rp.l1s) * v.ux + lam * rp.l1s * v.u ** 3 / 3.0 + rp.l2s * v.u + rp.l3s
    return v.ut - rhs


def t2ii_constraint_scale(eq: EquationSpec, v: Jet2):
    """``1 + |V_t| +`` the magnitudes of the right-hand terms, for a relative residual."""
    rp = ReducedParams.from_equation(eq)
    lam = eq.lam
    return (1.0 + np.abs(v.ut) + np.abs((lam * v.u - rp.l1s) * v.ux)
            + np.abs(lam * rp.l1s * v.u ** 3 / 3.0) + np.abs(rp.l2s * v.u) + abs(rp.l3s))
