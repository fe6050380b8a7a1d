import math

import numpy as np
import pytest

from rdcexact import jet as J
from rdcexact.catalog import T2II_FAMILIES, Family, SolutionInstance, bracket, evaluate
from rdcexact.cubic import CubicKind, solve_cubic
from rdcexact.equations import EquationSpec, Reaction
from rdcexact.errors import DomainError, UsageError
from rdcexact.fixtures import default_instance, random_instance, sample_points
from rdcexact.jet import Jet2
from rdcexact.reduction import (ReducedContext, ReducedParams, ansatz_constraint_residual,
                                build_ansatz, kernel_basis, linearized_ode_residual,
                                phi_linear_solution, scale_x_to_y, scale_y_to_x,
                                t2ii_constraint_residual, t2ii_constraint_scale, u_to_v, v_to_u, w_to_v)

F, R = Family, Reaction


# -- substitution ---------------------------------------------------------------

def test_u_to_v_identity_for_m_zero():
    j = Jet2(2.5, 0.1, -0.3, 0.7)
    assert u_to_v(j, 0.0).astuple() == j.astuple()


def test_u_to_v_log():
    assert u_to_v(Jet2(math.e, 0, 0, 0), -1.0).u == pytest.approx(1.0, abs=1e-16)


def test_u_to_v_square():
    v = u_to_v(Jet2(3.0, 1.0, 2.0, 0.0), 1.0)
    assert v.astuple() == (9.0, 6.0, 12.0, 8.0)


@pytest.mark.parametrize("m", [-2.0, -1.0, -0.5, 0.5, 1.0, 2.5])
def test_round_trip(rng, m):
    for _ in range(50):
        j = Jet2(*rng.uniform(0.3, 3.0, size=1), *rng.uniform(-1, 1, size=3))
        back = v_to_u(u_to_v(j, m), m)
        assert np.allclose(back.astuple(), j.astuple(), rtol=1e-12, atol=1e-12)


def test_substitution_needs_positive():
    with pytest.raises(DomainError):
        u_to_v(Jet2(-1.0, 0, 0, 0), 0.5)
    with pytest.raises(DomainError):
        v_to_u(Jet2(-1.0, 0, 0, 0), 1.0)          # 1/(m+1) = 1/2
    assert v_to_u(Jet2(-2.0, 0, 0, 0), -0.5).u == 4.0   # 1/(m+1) = 2


# -- ansatz ---------------------------------------------------------------------

def test_ansatz_linear_time():
    rp = ReducedParams(0.0, 1.0, 0.0, ReducedContext.T1_POWER)
    assert build_ansatz(rp, Jet2.const(0.0), 0.7).astuple() == (0.7, 1.0, 0.0, 0.0)


def test_ansatz_constant():
    rp = ReducedParams(2.0, 3.0, 0.0, ReducedContext.T1_POWER)
    assert build_ansatz(rp, Jet2.const(0.0), 0.4).astuple() == (-1.5, 0.0, 0.0, 0.0)


def test_ansatz_exponential():
    rp = ReducedParams(2.0, 0.0, 0.0, ReducedContext.T1_POWER)
    v = build_ansatz(rp, J.seed_x(1.3), 0.0)
    assert v.u == 1.3 and v.ut == 2.6


def test_ansatz_kills_constraint(rng):
    for _ in range(100):
        rp = ReducedParams(rng.uniform(-2, 2), rng.uniform(-2, 2), 0.0, ReducedContext.T1_POWER)
        x = rng.uniform(-2, 2)
        phi = J.sin(J.seed_x(x)) + 2.0
        v = build_ansatz(rp, phi, rng.uniform(0, 2))
        assert abs(ansatz_constraint_residual(rp, v)) <= 1e-12 * (1 + abs(v.u))


def test_reduced_params_contexts():
    rp = ReducedParams.from_equation(EquationSpec(R.T1I, m=1, lam=1, l1=0.5, l2=2, l3=3))
    assert (rp.l1s, rp.l2s, rp.context) == (1.0, 4.0, ReducedContext.T1_POWER)
    rp = ReducedParams.from_equation(EquationSpec(R.T2II, lam=2, l1=1, l2=4, l3=6))
    assert (rp.l1s, rp.l2s, rp.l3s) == (0.75, 2.0, 3.0)
    with pytest.raises(UsageError):
        ReducedParams.from_equation(EquationSpec(R.T2I, m=1, lam=1))


# -- phi equation ------------------------------------------------------------------

def test_phi_constant():
    phi = phi_linear_solution(1.5, 2.0, 0.0, 1.0, 0.0, np.linspace(-1, 1, 5))
    assert np.all(phi.u == 1.0) and np.all(phi.ux == 0.0) and np.all(phi.uxx == 0.0)


def test_phi_ode_residual(rng):
    for _ in range(20):
        lam, l2s, l3, c1, c2 = rng.uniform(-2, 2, size=5)
        x = rng.uniform(-2, 2, size=100)
        phi = phi_linear_solution(lam, l2s, l3, c1, c2, x)
        assert np.max(np.abs(phi.uxx + lam * phi.ux - l2s * l3)) <= 1e-12 * (1 + np.max(np.abs(phi.uxx)))


def test_phi_needs_lambda():
    with pytest.raises(UsageError):
        phi_linear_solution(0.0, 1, 1, 1, 1, 0.0)


def test_composition_reproduces_linear_family(rng):
    for _ in range(5):
        s = random_instance(F.T1I_LIN, rng)
        eq = s.eq
        rp = ReducedParams.from_equation(eq)
        t, x, _ = sample_points(s, rng, 100)
        phi = phi_linear_solution(eq.lam, rp.l2s, eq.l3, s.c1, s.c2, x)
        u = v_to_u(build_ansatz(rp, phi, t), eq.m)
        ref = evaluate(s, t, x)
        for a, b in zip(u.astuple(), ref.astuple()):
            assert np.allclose(a, b, rtol=1e-12, atol=1e-12)


# -- V = W_y / W ------------------------------------------------------------------

def test_triple_root_rational():
    roots = solve_cubic(0, 0)
    y = np.linspace(0, 3, 31)
    v = w_to_v((1.0, 1.0, 0.0), roots, y)
    assert np.allclose(v.u, 1 / (1 + y), rtol=1e-15)
    assert np.max(np.abs(v.uxx + 3 * v.u * v.ux + v.u ** 3)) <= 1e-14


@pytest.mark.parametrize("p,q", [(-1 / 3, 0.0), (-1.0, 1.0), (0.5, 0.7), (-2.0, 0.5)])
def test_single_exponential_is_constant_root(p, q):
    roots = solve_cubic(p, q)
    y = np.linspace(-1, 1, 11)
    k = roots.roots[0]
    v = w_to_v((1.0, 0.0, 0.0), roots, y)
    assert np.allclose(v.u, k, rtol=1e-14, atol=1e-14)
    assert np.max(np.abs(linearized_ode_residual(v, p, q))) <= 1e-12 * (1 + abs(k) ** 3)


def test_positive_combination_is_bounded_by_roots(rng):
    roots = solve_cubic(-2.0, 0.5)
    y = rng.uniform(-5, 5, 100)
    v = w_to_v(tuple(rng.uniform(0.1, 2, 3)), roots, y)
    assert np.all(v.u >= min(roots.roots) - 1e-12) and np.all(v.u <= max(roots.roots) + 1e-12)


def test_kernel_basis_solves_linear_ode(rng):
    for p, q in [(0, 0), (-1, 1), (-2, 0.5), (0.5, 0.7)]:
        roots = solve_cubic(p, q)
        y = rng.uniform(-2, 2, 50)
        for w in kernel_basis(roots, y):
            scale = 1 + np.abs(w[3]) + np.abs(w[0])
            assert np.max(np.abs(w[3] + 3 * p * w[1] + 2 * q * w[0]) / scale) <= 1e-13


def test_near_zero_w_rejected():
    roots = solve_cubic(0, 0)
    with pytest.raises(DomainError):
        w_to_v((1.0, 1.0, 0.0), roots, np.array([-1.0, 0.0, 1.0]))
    with pytest.raises(DomainError):
        w_to_v((1.0, 1.0, 0.0), roots, np.array([-0.95, 2.0]), min_rel=0.1)


def test_scaling():
    assert scale_x_to_y(3.0, 2.0) == 2.0
    assert scale_x_to_y(1.5, 2.0) == 1.0
    x = np.linspace(-4, 4, 9)
    assert np.allclose(scale_y_to_x(0.7, scale_x_to_y(0.7, x)), x, rtol=1e-15, atol=0)
    with pytest.raises(UsageError):
        scale_x_to_y(0.0, 1.0)


# -- catalog families in V-form ------------------------------------------------------

@pytest.mark.parametrize("family", T2II_FAMILIES, ids=lambda f: f.value)
def test_t2ii_constraint_equation(rng, family):
    for s in [default_instance(family)] + [random_instance(family, rng) for _ in range(3)]:
        t, x, _ = sample_points(s, rng, 200)
        v = bracket(s, t, x)
        rel = np.abs(t2ii_constraint_residual(s.eq, v)) / t2ii_constraint_scale(s.eq, v)
        assert np.max(rel) <= 1e-8


@pytest.mark.parametrize("family", [F.T1I_LIN, F.T1I_EXP, F.T1I_DEG, F.T1I_TRIG, F.T1I_FAST,
                                    F.T1II_LIN, F.T1II_EXP, F.T1II_DEG, F.T1II_TRIG],
                         ids=lambda f: f.value)
def test_t1_ansatz_in_v_form(rng, family):
    for s in [default_instance(family)] + [random_instance(family, rng) for _ in range(3)]:
        t, x, _ = sample_points(s, rng, 200)
        with np.errstate(over="ignore"):
            v = u_to_v(evaluate(s, t, x), s.eq.m)
        assert np.allclose(v.u, bracket(s, t, x).u, rtol=1e-12, atol=1e-12)
        rp = ReducedParams.from_equation(s.eq)
        if rp.l1s == 0.0:
            assert np.allclose(v.ut, s.eq.l2 * (s.eq.m + 1 if s.eq.reaction is R.T1I else 1.0),
                               rtol=1e-10, atol=1e-10)
        assert np.max(np.abs(ansatz_constraint_residual(rp, bracket(s, t, x)))) <= 1e-10
