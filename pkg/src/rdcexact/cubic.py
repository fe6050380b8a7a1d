"""Depressed cubic ``k^3 + 3 p k + 2 q = 0`` with explicit root classification.

The four cases follow the sign of ``p^3 + q^2``:

* ``TripleRoot``      p = q = 0, all roots 0
* ``RealPlusDouble``  p^3 = -q^2 != 0, roots -2 cbrt(q) and cbrt(q) (double)
* ``ThreeDistinct``   p^3 + q^2 < 0, trigonometric form
* ``OneRealPair``     p^3 + q^2 > 0, one real root and ``a +- i b``
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np


class CubicKind(str, enum.Enum):
    TRIPLE = "TripleRoot"
    REAL_PLUS_DOUBLE = "RealPlusDouble"
    THREE_DISTINCT = "ThreeDistinct"
    ONE_REAL_PAIR = "OneRealPair"


def boundary_tol(p: float, q: float) -> float:
    return 1e-12 * (1.0 + abs(p) ** 3 + q * q)


def q_zero_tol(p: float) -> float:
    return 1e-14 * (1.0 + abs(p) ** 1.5)


@dataclass(frozen=True)
class CubicSolution:
    p: float
    q: float
    discriminant: float
    kind: CubicKind
    roots: tuple[float, ...]
    # only set for OneRealPair: real root alpha and the pair a +- i b
    a: float | None = None
    b: float | None = None

    @property
    def real_roots(self) -> tuple[float, ...]:
        """Distinct real roots in the labelled order."""
        return self.roots

    @property
    def alpha(self) -> float:
        return self.roots[0]

    def all_roots(self) -> list[complex]:
        """The three roots with multiplicity (complex for OneRealPair)."""
        if self.kind is CubicKind.TRIPLE:
            return [self.roots[0]] * 3
        if self.kind is CubicKind.REAL_PLUS_DOUBLE:
            return [self.roots[0], self.roots[1], self.roots[1]]
        if self.kind is CubicKind.THREE_DISTINCT:
            return list(self.roots)
        return [self.roots[0], complex(self.a, self.b), complex(self.a, -self.b)]

    def polynomial(self, k):
        return k ** 3 + 3.0 * self.p * k + 2.0 * self.q

    def describe(self) -> str:
        if self.kind is CubicKind.TRIPLE:
            return f"{self.kind.value} k={self.roots[0]:.17g}"
        if self.kind is CubicKind.REAL_PLUS_DOUBLE:
            return f"{self.kind.value} alpha1={self.roots[0]:.17g} alpha2={self.roots[1]:.17g} (double)"
        if self.kind is CubicKind.THREE_DISTINCT:
            return f"{self.kind.value} " + " ".join(
                f"alpha{i + 1}={r:.17g}" for i, r in enumerate(self.roots))
        return f"{self.kind.value} alpha={self.roots[0]:.17g} a={self.a:.17g} b={self.b:.17g}"


def classify(p: float, q: float) -> CubicKind:
    p, q = float(p), float(q)
    if p == 0.0 and q == 0.0:
        return CubicKind.TRIPLE
    d = p ** 3 + q * q
    if abs(d) <= boundary_tol(p, q):
        return CubicKind.REAL_PLUS_DOUBLE
    return CubicKind.THREE_DISTINCT if d < 0 else CubicKind.ONE_REAL_PAIR


def _three_distinct(p: float, q: float) -> tuple[float, float, float]:
    r = 2.0 * (-p) ** 0.5          # 2 (-p^3)^(1/6)
    if abs(q) <= q_zero_tol(p):
        s = math.sqrt(-3.0 * p)
        return (0.0, s, -s)
    # atan2 keeps the angle finite as q -> 0 (it tends to pi/2)
    theta = math.atan2(math.sqrt(max(-p ** 3 - q * q, 0.0)), abs(q)) / 3.0
    if q > 0:
        return (-r * math.cos(theta),
                r * math.cos(theta - math.pi / 3.0),
                r * math.cos(theta + math.pi / 3.0))
    return (r * math.cos(theta),
            -r * math.cos(theta - math.pi / 3.0),
            -r * math.cos(theta + math.pi / 3.0))


def solve_cubic(p: float, q: float) -> CubicSolution:
    p, q = float(p), float(q)
    if not (math.isfinite(p) and math.isfinite(q)):
        raise ValueError("p and q must be finite")
    kind = classify(p, q)
    d = p ** 3 + q * q
    if kind is CubicKind.TRIPLE:
        return CubicSolution(p, q, d, kind, (0.0,))
    if kind is CubicKind.REAL_PLUS_DOUBLE:
        c = float(np.cbrt(q))
        return CubicSolution(p, q, d, kind, (-2.0 * c, c))
    if kind is CubicKind.THREE_DISTINCT:
        return CubicSolution(p, q, d, kind, _three_distinct(p, q))
    sd = math.sqrt(d)
    u = float(np.cbrt(-q + sd))
    v = float(np.cbrt(q + sd))
    alpha = u - v
    return CubicSolution(p, q, d, kind, (alpha,), a=-0.5 * alpha, b=math.sqrt(3.0) / 2.0 * (u + v))
