import math

import numpy as np
import pytest

from rdcexact.cubic import CubicKind, boundary_tol, classify, solve_cubic

K = CubicKind


def cubic(k, p, q):
    return k ** 3 + 3 * p * k + 2 * q


def bisect(p, q, lo, hi, iters=200):
    flo = cubic(lo, p, q)
    for _ in range(iters):
        mid = 0.5 * (lo + hi)
        fm = cubic(mid, p, q)
        if fm == 0:
            return mid
        if (fm < 0) == (flo < 0):
            lo, flo = mid, fm
        else:
            hi = mid
    return 0.5 * (lo + hi)


def bisection_roots(p, q):
    """Three real roots by bisection between the critical points +-sqrt(-p)."""
    s = math.sqrt(-p)
    bound = 1 + 3 * abs(p) + 2 * abs(q)
    return sorted([bisect(p, q, -bound, -s), bisect(p, q, -s, s), bisect(p, q, s, bound)])


# -- worked examples ------------------------------------------------------------

def test_triple_root():
    sol = solve_cubic(0, 0)
    assert sol.kind is K.TRIPLE and sol.roots == (0.0,)
    assert sol.describe() == "TripleRoot k=0"


def test_three_distinct_q_zero():
    sol = solve_cubic(-1 / 3, 0)
    assert sol.kind is K.THREE_DISTINCT
    assert np.allclose(sol.roots, (0, 1, -1), atol=1e-15)


def test_real_plus_double():
    sol = solve_cubic(-1, 1)
    assert sol.kind is K.REAL_PLUS_DOUBLE
    assert sol.roots == (-2.0, 1.0)


def test_one_real_pair():
    sol = solve_cubic(0, -4)
    assert sol.kind is K.ONE_REAL_PAIR
    assert sol.roots[0] == pytest.approx(2, abs=1e-15)
    assert sol.a == pytest.approx(-1, abs=1e-15)
    assert sol.b == pytest.approx(math.sqrt(3), abs=1e-15)
    for k in sol.all_roots():
        assert abs(cubic(k, 0, -4)) <= 1e-13


@pytest.mark.parametrize("p,q,kind", [(1, 1, K.ONE_REAL_PAIR), (-1, 1, K.REAL_PLUS_DOUBLE),
                                      (-2, 1, K.THREE_DISTINCT), (0, 0, K.TRIPLE)])
def test_classify_examples(p, q, kind):
    assert classify(p, q) is kind


def test_nonfinite_rejected():
    with pytest.raises(ValueError):
        solve_cubic(float("nan"), 0)


# -- random suites --------------------------------------------------------------

def region_sample(rng, kind):
    if kind is K.THREE_DISTINCT:
        while True:
            p, q = -rng.uniform(0.01, 10), rng.uniform(-10, 10)
            if p ** 3 + q * q < -boundary_tol(p, q) * 10:
                return p, q
    if kind is K.ONE_REAL_PAIR:
        while True:
            p, q = rng.uniform(-10, 10), rng.uniform(-10, 10)
            if p ** 3 + q * q > boundary_tol(p, q) * 10:
                return p, q
    c = rng.uniform(-3, 3)                 # p = -c^2, q = c^3
    return -c * c, c ** 3


@pytest.mark.parametrize("kind", [K.THREE_DISTINCT, K.ONE_REAL_PAIR, K.REAL_PLUS_DOUBLE])
def test_random_region(rng, kind):
    for _ in range(1000):
        p, q = region_sample(rng, kind)
        sol = solve_cubic(p, q)
        assert sol.kind is kind
        for k in sol.roots:
            assert abs(cubic(k, p, q)) <= 1e-10 * (1 + abs(k) ** 3)
        assert abs(sum(sol.all_roots())) <= 1e-10 * (1 + max(abs(k) for k in sol.all_roots()))
        if kind is K.ONE_REAL_PAIR:
            assert sol.roots[0] + 2 * sol.a == pytest.approx(0, abs=1e-10 * (1 + abs(sol.a)))
            z = complex(sol.a, sol.b)
            assert abs(cubic(z, p, q)) <= 1e-10 * (1 + abs(z) ** 3)
        if kind is K.THREE_DISTINCT:
            assert np.allclose(sorted(sol.roots), bisection_roots(p, q), rtol=0, atol=1e-10)


def test_round_trip(rng):
    for _ in range(1000):
        r1, r2 = rng.uniform(-5, 5, size=2)
        r3 = -r1 - r2
        p = (r1 * r2 + r1 * r3 + r2 * r3) / 3
        q = -r1 * r2 * r3 / 2
        spread = min(abs(r1 - r2), abs(r1 - r3), abs(r2 - r3))
        if spread < 1e-2:
            continue
        sol = solve_cubic(p, q)
        assert sol.kind is K.THREE_DISTINCT
        scale = max(abs(r1), abs(r2), abs(r3), 1.0)
        assert np.allclose(sorted(sol.roots), sorted((r1, r2, r3)), rtol=0, atol=1e-9 * scale)


def test_continuity_across_q_zero(rng):
    for _ in range(100):
        p = -rng.uniform(0.05, 5)
        base = sorted(solve_cubic(p, 0.0).roots)
        for q in (1e-10, -1e-10):
            assert np.allclose(sorted(solve_cubic(p, q).roots), base, atol=1e-6)


def test_q_zero_uses_closed_form():
    sol = solve_cubic(-3.0, 1e-16)
    assert sol.roots == (0.0, 3.0, -3.0)


def test_boundary_band():
    p, q = -1.0, 1.0 + 1e-14
    assert classify(p, q) is K.REAL_PLUS_DOUBLE
    assert classify(-1.0, 1.0 + 1e-6) is K.ONE_REAL_PAIR
    assert classify(-1.0, 1.0 - 1e-6) is K.THREE_DISTINCT


def test_describe_has_full_precision():
    text = solve_cubic(-2, 1).describe()
    assert text.startswith("ThreeDistinct")
    vals = [float(part.split("=")[1]) for part in text.split()[1:]]
    assert vals == list(solve_cubic(-2, 1).roots)
