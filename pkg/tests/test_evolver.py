import csv

import numpy as np
import pytest

from rdcexact import _kernels
from rdcexact.catalog import Family, SolutionInstance, value
from rdcexact.equations import EquationSpec, Reaction
from rdcexact.errors import DomainError, PositivityError, StabilityError
from rdcexact.evolver import (Field, Grid, check_window, compare, error_norms, evolve,
                              evolve_series, exact_field, integrate, observed_order,
                              resolve_method, stable_dt, write_snapshots_csv)
from rdcexact.fixtures import DEFAULTS, EVOLVE_WINDOWS, FIGURES

F, R = Family, Reaction
BACKENDS = ["numpy"] + (["numba"] if _kernels.HAVE_NUMBA else [])


def test_grid():
    g = Grid(-1.0, 1.0, 5)
    assert g.h == 0.5 and list(g.nodes) == [-1.0, -0.5, 0.0, 0.5, 1.0]
    with pytest.raises(ValueError):
        Grid(0, 1, 2)
    with pytest.raises(ValueError):
        Grid(1, 0, 5)


def test_field_validation():
    g = Grid(0, 1, 3)
    assert Field(g, [1, 2, 3], 0.0).positive
    assert not Field(g, [1, 0, 3], 0.0).positive
    with pytest.raises(ValueError):
        Field(g, [1, np.nan, 3], 0.0)
    with pytest.raises(ValueError):
        Field(g, [1, 2], 0.0)


def test_zero_length_run_returns_initial_slice():
    s = FIGURES["fig3"].instance
    g = Grid(-10, 10, 401)
    f = evolve(s.eq, s, g, 0.0, 0.0)
    assert np.array_equal(f.values, value(s, 0.0, g.nodes))
    assert compare(f, s).linf == 0.0


@pytest.mark.parametrize("backend", BACKENDS)
def test_constant_steady_state(backend):
    # c1 = c2 = 0 turns the fast-diffusion Murray solution into U = 1
    s = SolutionInstance(F.T1I_FAST, FIGURES["fig3"].instance.eq, c1=0, c2=0)
    f = evolve(s.eq, s, Grid(-10, 10, 101), 0.0, 1.0, backend=backend)
    assert np.max(np.abs(f.values - 1.0)) <= 1e-12


def test_compare_norms():
    g = Grid(0, 1, 11)
    a = np.linspace(1, 2, 11)
    assert error_norms(a, a, g, 0.0).linf == 0.0 and error_norms(a, a, g, 0.0).l2 == 0.0
    b = a.copy()
    b[4] += 1e-3
    rep = error_norms(b, a, g, 0.0)
    assert rep.linf == pytest.approx(1e-3, rel=1e-12) and rep.x_at_max == pytest.approx(0.4)
    b = a.copy()
    b[0] += 1.0                               # boundary nodes are ignored
    assert error_norms(b, a, g, 0.0).linf == 0.0


def test_observed_order():
    assert observed_order(4e-4, 1e-4) == pytest.approx(2.0)


def test_backends_agree():
    if len(BACKENDS) < 2:
        pytest.skip("numba not installed")
    s = FIGURES["fig6"].instance
    g = Grid(-10, -2, 201)
    a = evolve(s.eq, s, g, 0, 0.05, backend="numpy", method="rk4")
    b = evolve(s.eq, s, g, 0, 0.05, backend="numba", method="rk4")
    assert np.max(np.abs(a.values - b.values)) <= 1e-13


@pytest.mark.parametrize("backend", BACKENDS)
def test_rhs_backends_agree(backend, rng):
    u = rng.uniform(0.5, 2.0, 50)
    for code, eq in enumerate([EquationSpec(R.T1I, m=0.7, lam=1.1, l1=0.3, l2=0.2, l3=0.5),
                               EquationSpec(R.T1II, lam=1, l1=0.5, l2=0.1, l3=1),
                               EquationSpec(R.T1III, lam=1, l2=0.3, l3=0.1),
                               EquationSpec(R.T2I, m=2, lam=0.4, l1=0.2, l2=0.3),
                               EquationSpec(R.T2II, lam=1.2, l1=0.6, l2=0.2, l3=0.1)]):
        cpow = eq.m if code < 3 else eq.m + 1
        args = (0.05, eq.m, eq.lam, cpow, code, eq.l1, eq.l2, eq.l3)
        ref = _kernels.rhs_numpy(u, *args)
        got = _kernels.get_rhs(backend)(u, *args)
        assert np.allclose(got, ref, rtol=1e-13, atol=1e-13)


def test_deterministic():
    s = FIGURES["fig6"].instance
    g = Grid(-10, -2, 101)
    a = evolve(s.eq, s, g, 0, 0.05)
    b = evolve(s.eq, s, g, 0, 0.05)
    assert np.array_equal(a.values, b.values)


def test_dt_above_bound_aborts():
    s = FIGURES["fig6"].instance
    g = Grid(-10, -2, 101)
    with pytest.raises(StabilityError):
        evolve(s.eq, s, g, 0, 0.1, dt=1.0)
    bound = stable_dt(s.eq, exact_field(s, g, 0).values, g.h)
    f = evolve(s.eq, s, g, 0, 0.01, dt=bound)
    assert compare(f, s).linf < 1e-6


@pytest.mark.parametrize("method", ["rk4", "bdf"])
def test_positivity_loss_aborts(method):
    # C(U) = -U^(-1/2) drives a low plateau to zero in finite time while the
    # exact solution supplies large boundary values
    eq = EquationSpec(R.T1I, m=0.5, lam=1, l2=-1, l3=0)
    s = SolutionInstance(F.T1I_LIN, eq, c1=10, c2=0)
    g = Grid(-5, 5, 101)
    u = value(s, 0.0, g.nodes) * (1 - (1 - 1e-4) * np.exp(-g.nodes ** 2))
    with pytest.raises(PositivityError) as err:
        integrate(eq, s, Field(g, u, 0.0), 0.5, method=method)
    assert 40 <= err.value.node <= 60 and 0 < err.value.time < 0.5


def test_invalid_window_rejected():
    s = FIGURES["fig6"].instance
    with pytest.raises(DomainError):
        check_window(s, Grid(-2, 6, 101), 0, 0.5)


def test_auto_method_choice():
    s = FIGURES["fig3"].instance
    start = exact_field(s, Grid(-10, 10, 801), 0.0)
    assert resolve_method(s.eq, start, 1.0) == "bdf"
    assert resolve_method(s.eq, start, 1.0, dt=1e-12) == "rk4"
    s6 = FIGURES["fig6"].instance
    assert resolve_method(s6.eq, exact_field(s6, Grid(-10, -2, 801), 0.0), 0.5) == "rk4"
    with pytest.raises(ValueError):
        resolve_method(s.eq, start, 1.0, method="euler")


def test_rk4_and_bdf_agree():
    s = FIGURES["fig6"].instance
    g = Grid(-10, -2, 201)
    a = evolve(s.eq, s, g, 0, 0.2, method="rk4")
    b = evolve(s.eq, s, g, 0, 0.2, method="bdf")
    assert np.max(np.abs(a.values - b.values)) <= 1e-8


@pytest.mark.slow
@pytest.mark.parametrize("family", list(Family), ids=lambda f: f.value)
def test_second_order_convergence(family):
    fx = DEFAULTS[family]
    s = fx.instance
    t0 = fx.t_window[0]
    errs = [compare(evolve(s.eq, s, Grid(*EVOLVE_WINDOWS[family], n), t0, t0 + 0.1), s).linf
            for n in (401, 801)]
    assert 1.7 <= observed_order(*errs) <= 2.3, errs


def test_series_and_csv(tmp_path):
    s = FIGURES["fig6"].instance
    g = Grid(-10, -2, 21)
    fields = evolve_series(s.eq, s, g, 0.0, [0.01, 0.02])
    assert [f.time for f in fields] == [0.01, 0.02]
    path = tmp_path / "snap.csv"
    write_snapshots_csv(path, fields, s)
    rows = list(csv.reader(open(path)))
    assert rows[0] == ["t", "x", "U_numeric", "U_exact", "abs_err"]
    assert len(rows) == 1 + 2 * g.n
    body = np.array(rows[1:], dtype=float)
    assert np.array_equal(body[: g.n, 2], fields[0].values)          # lossless round trip
    assert np.allclose(body[:, 4], np.abs(body[:, 2] - body[:, 3]), rtol=0, atol=0)
    with pytest.raises(ValueError):
        evolve_series(s.eq, s, g, 0.0, [0.02, 0.01])
