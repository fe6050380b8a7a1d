"""Second-order forward jets in (t, x).

A :class:`Jet2` carries a field value together with ``u_t``, ``u_x`` and
``u_xx``.  Mixed and second time derivatives are never needed by a PDE that is
first order in time, so they are not tracked.

Fields may be Python floats or numpy arrays of a common shape; every operation
broadcasts.  The elementary functions below also accept plain numbers/arrays
and then simply evaluate, which lets the closed-form solutions be written once
and evaluated either with derivatives (seeded jets) or as bare values.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

import numpy as np

from .errors import DomainError

Number = Union[float, int, np.ndarray]


@dataclass(frozen=True)
class Jet2:
    u: Number
    ut: Number = 0.0
    ux: Number = 0.0
    uxx: Number = 0.0

    # -- construction -----------------------------------------------------
    @classmethod
    def const(cls, c: Number) -> "Jet2":
        return cls(c, 0.0, 0.0, 0.0)

    def astuple(self) -> tuple:
        return (self.u, self.ut, self.ux, self.uxx)

    # -- arithmetic ---------------------------------------------------------
    def __neg__(self) -> "Jet2":
        return Jet2(-self.u, -self.ut, -self.ux, -self.uxx)

    def __pos__(self) -> "Jet2":
        return self

    def __add__(self, other) -> "Jet2":
        b = lift(other)
        return Jet2(self.u + b.u, self.ut + b.ut, self.ux + b.ux, self.uxx + b.uxx)

    __radd__ = __add__

    def __sub__(self, other) -> "Jet2":
        b = lift(other)
        return Jet2(self.u - b.u, self.ut - b.ut, self.ux - b.ux, self.uxx - b.uxx)

    def __rsub__(self, other) -> "Jet2":
        return lift(other) - self

    def __mul__(self, other) -> "Jet2":
        if not isinstance(other, Jet2):
            return Jet2(self.u * other, self.ut * other, self.ux * other, self.uxx * other)
        a, b = self, other
        return Jet2(
            a.u * b.u,
            a.ut * b.u + a.u * b.ut,
            a.ux * b.u + a.u * b.ux,
            a.uxx * b.u + 2.0 * a.ux * b.ux + a.u * b.uxx,
        )

    __rmul__ = __mul__

    def __truediv__(self, other) -> "Jet2":
        if not isinstance(other, Jet2):
            if np.any(np.asarray(other) == 0):
                raise DomainError("division of a jet by zero", value=0.0, where="divisor")
            return Jet2(self.u / other, self.ut / other, self.ux / other, self.uxx / other)
        return self * reciprocal(other)

    def __rtruediv__(self, other) -> "Jet2":
        return reciprocal(self) * other

    def __pow__(self, r) -> "Jet2":
        return power(self, r)


def lift(a) -> Jet2:
    """Wrap a constant as a jet; jets pass through untouched."""
    return a if isinstance(a, Jet2) else Jet2(a, 0.0, 0.0, 0.0)


def seed_t(t: Number) -> Jet2:
    return Jet2(t, 1.0, 0.0, 0.0)


def seed_x(x: Number) -> Jet2:
    return Jet2(x, 0.0, 1.0, 0.0)


def _chain(a: Jet2, f, df, d2f) -> Jet2:
    return Jet2(f, df * a.ut, df * a.ux, d2f * a.ux * a.ux + df * a.uxx)


def _require_positive(u, name: str) -> None:
    arr = np.asarray(u)
    bad = ~(arr > 0)
    if np.any(bad):
        offending = float(np.min(np.where(bad, arr, np.inf))) if arr.ndim else float(arr)
        raise DomainError(f"{name} requires a strictly positive argument, got {offending!r}",
                          value=offending, where=name)


def _require_nonzero(u, name: str) -> None:
    if np.any(np.asarray(u) == 0):
        raise DomainError(f"{name} of a quantity equal to zero", value=0.0, where=name)


def reciprocal(a):
    if not isinstance(a, Jet2):
        _require_nonzero(a, "division")
        return 1.0 / np.asarray(a, dtype=float) if np.ndim(a) else 1.0 / a
    _require_nonzero(a.u, "division")
    inv = 1.0 / a.u
    return _chain(a, inv, -inv * inv, 2.0 * inv * inv * inv)


def exp(a):
    if not isinstance(a, Jet2):
        return np.exp(a)
    e = np.exp(a.u)
    return _chain(a, e, e, e)


def log(a):
    if not isinstance(a, Jet2):
        _require_positive(a, "log")
        return np.log(a)
    _require_positive(a.u, "log")
    inv = 1.0 / a.u
    return _chain(a, np.log(a.u), inv, -inv * inv)


ln = log


def sqrt(a):
    if not isinstance(a, Jet2):
        _require_positive(a, "sqrt")
        return np.sqrt(a)
    _require_positive(a.u, "sqrt")
    s = np.sqrt(a.u)
    return _chain(a, s, 0.5 / s, -0.25 / (s * a.u))


def sin(a):
    if not isinstance(a, Jet2):
        return np.sin(a)
    s, c = np.sin(a.u), np.cos(a.u)
    return _chain(a, s, c, -s)


def cos(a):
    if not isinstance(a, Jet2):
        return np.cos(a)
    s, c = np.sin(a.u), np.cos(a.u)
    return _chain(a, c, -s, -c)


def _is_integer(r: float) -> bool:
    return float(r).is_integer()


def power(a, r: float):
    """``a**r`` for a real exponent.

    Integer exponents use the monomial rule and accept any base (nonzero for
    negative powers).  Non-integer exponents follow ``exp(r ln a)`` and need a
    strictly positive base.
    """
    r = float(r)
    base = a.u if isinstance(a, Jet2) else a
    if _is_integer(r):
        n = int(r)
        if n < 0:
            _require_nonzero(base, "negative integer power")
        if not isinstance(a, Jet2):
            return np.power(np.asarray(base, dtype=float), n) if np.ndim(base) else float(base) ** n
        if n == 0:
            return Jet2(np.ones_like(np.asarray(base, dtype=float)) if np.ndim(base) else 1.0)
        f = base ** n
        df = n * base ** (n - 1) if n != 1 else np.ones_like(base) if np.ndim(base) else 1.0
        d2f = n * (n - 1) * base ** (n - 2) if n not in (0, 1) else 0.0
        return _chain(a, f, df, d2f)
    _require_positive(base, "fractional power")
    if not isinstance(a, Jet2):
        return np.power(base, r)
    f = np.power(base, r)
    df = r * f / base
    d2f = r * (r - 1.0) * f / (base * base)
    return _chain(a, f, df, d2f)
