"""Method-of-lines integrator used as an independent check on the catalog.

The integrator only ever asks the exact solution for *values*: the initial
slice and the two Dirichlet boundary values at every stage time.  No
catalog derivative enters the numerics.

Spatial discretisation is second order: conservative diffusion flux with the
diffusivity averaged to half nodes, central differences for convection.
Time stepping is classical RK4 with ``dt <= 0.25 h^2 / max D(U)`` (and
``dt <= h / max|lam U^cpow|`` for the central convection term).  When
that bound would need more than ``MAX_EXPLICIT_STEPS`` steps (large
diffusivity, e.g. m < 0 with small U), ``method="auto"`` hands the same
semi-discrete system to scipy's variable-order BDF with a tridiagonal
Jacobian pattern.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np
import scipy.sparse as sp
from scipy.integrate import solve_ivp

from . import _kernels
from .catalog import SolutionInstance, validity, value
from .equations import Convection, EquationSpec, Reaction
from .errors import DomainError, PositivityError, SolverAbort, StabilityError

SAFETY = 0.25
MAX_HALVINGS = 30
MAX_EXPLICIT_STEPS = 200_000
CHUNK = 512
BDF_RTOL = 1e-10
BDF_ATOL = 1e-13
METHODS = ("auto", "rk4", "bdf")

_REACTION_CODE = {
    Reaction.T1I: _kernels.R_T1I,
    Reaction.T1II: _kernels.R_T1II,
    Reaction.T1III: _kernels.R_T1III,
    Reaction.T2I: _kernels.R_T2I,
    Reaction.T2II: _kernels.R_T2II,
}


@dataclass(frozen=True)
class Grid:
    x_min: float
    x_max: float
    n: int

    def __post_init__(self):
        if self.n < 3:
            raise ValueError("a grid needs at least 3 nodes")
        if not self.x_max > self.x_min:
            raise ValueError("x_max must exceed x_min")

    @property
    def h(self) -> float:
        return (self.x_max - self.x_min) / (self.n - 1)

    @property
    def nodes(self) -> np.ndarray:
        return np.linspace(self.x_min, self.x_max, self.n)


@dataclass
class Field:
    grid: Grid
    values: np.ndarray
    time: float
    positive: bool = False

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=float)
        if self.values.shape != (self.grid.n,):
            raise ValueError("field size does not match grid")
        if not np.all(np.isfinite(self.values)):
            raise ValueError("field values must be finite")
        self.positive = bool(np.all(self.values > 0))


@dataclass(frozen=True)
class ErrorReport:
    linf: float
    l2: float
    x_at_max: float
    time: float

    def as_dict(self) -> dict:
        return {"linf": self.linf, "l2": self.l2, "x_at_max": self.x_at_max, "time": self.time}


def stable_dt(eq: EquationSpec, u: np.ndarray, h: float) -> float:
    """``0.25 h^2 / max D(U)``, further capped by the convective limit ``h / max|lam U^cpow|``."""
    d = eq.diffusivity(u)
    diffusive = SAFETY * h * h / float(np.max(d))
    cpow_u = d if eq.convection is Convection.POWER_M else d * u
    speed = abs(eq.lam) * float(np.max(np.abs(cpow_u)))
    return min(diffusive, h / speed) if speed > 0 else diffusive


def exact_field(s: SolutionInstance, grid: Grid, t: float) -> Field:
    return Field(grid, value(s, t, grid.nodes), t)


def check_window(s: SolutionInstance, grid: Grid, t0: float, t1: float, samples: int = 11) -> None:
    """Raise :class:`DomainError` unless the exact solution is valid on the whole window."""
    times = np.linspace(t0, t1, samples) if t1 > t0 else np.array([t0])
    T, X = np.meshgrid(times, grid.nodes, indexing="ij")
    ok = validity(s, T, X).ok
    if not np.all(ok):
        i = np.argmin(ok.ravel())
        raise DomainError(f"{s.family.value}: exact solution invalid at (t, x) = "
                          f"({T.ravel()[i]:.6g}, {X.ravel()[i]:.6g}) inside the requested window",
                          where="window")


def _kernel_args(eq: EquationSpec, h: float) -> tuple:
    cpow = eq.m if eq.convection is Convection.POWER_M else eq.m + 1.0
    return (h, eq.m, eq.lam, cpow, _REACTION_CODE[eq.reaction], eq.l1, eq.l2, eq.l3)


def resolve_method(eq: EquationSpec, start: Field, t1: float, method: str = "auto",
                   dt: float | None = None) -> str:
    """Pick ``'rk4'`` or ``'bdf'`` for advancing ``start`` to ``t1``."""
    if method not in METHODS:
        raise ValueError(f"unknown method {method!r}; expected one of {METHODS}")
    if method != "auto":
        return method
    if dt is not None:
        return "rk4"
    span = t1 - start.time
    bound = stable_dt(eq, start.values, start.grid.h)
    return "rk4" if span <= bound * MAX_EXPLICIT_STEPS else "bdf"


def integrate(eq: EquationSpec, s: SolutionInstance, start: Field, t1: float,
              dt: float | None = None, backend: str | None = None,
              method: str = "auto") -> Field:
    """Advance ``start`` to ``t1``; boundary values come from ``s``.

    ``method`` is ``'rk4'`` (explicit, ``dt`` checked against the diffusive
    bound), ``'bdf'`` (implicit, adaptive) or ``'auto'``.
    """
    t = float(start.time)
    if t1 < t:
        raise ValueError("cannot integrate backwards in time")
    if t1 == t:
        return Field(start.grid, start.values.copy(), t)
    if resolve_method(eq, start, t1, method, dt) == "bdf":
        if dt is not None:
            raise ValueError("dt is chosen adaptively by the bdf method")
        return _integrate_bdf(eq, s, start, t1, backend)
    return _integrate_rk4(eq, s, start, t1, dt, backend)


def _integrate_rk4(eq, s, start, t1, dt, backend):
    grid = start.grid
    h = grid.h
    u = start.values.copy()
    t = float(start.time)
    bound = stable_dt(eq, u, h)
    if dt is None:
        dt = bound
    elif dt > bound * (1 + 1e-12):
        raise StabilityError(f"dt = {dt:.6g} exceeds the stability bound {bound:.6g}")

    step_fn = _kernels.get_step(backend)
    args = _kernel_args(eq, h)
    ends = np.array([grid.x_min, grid.x_max])
    positive = eq.needs_positive
    halvings = 0
    eps = 1e-13 * max(1.0, abs(t1))

    # boundary values are evaluated for CHUNK steps at a time
    plan = None
    j = 0
    while t < t1 - eps:
        bound = stable_dt(eq, u, h)
        if dt > bound * (1 + 1e-12):
            while dt > bound * (1 + 1e-12):
                dt *= 0.5
                halvings += 1
                if halvings > MAX_HALVINGS:
                    raise StabilityError(f"time step collapsed below {dt:.3g} at t = {t:.6g}")
            plan = None
        if plan is None or j == len(plan[0]):
            plan = _boundary_plan(s, ends, t, t1, dt, eps)
            j = 0
        starts, steps, bl, br = plan
        u = step_fn(u, steps[j], *args, bl[j], br[j])
        t = starts[j] + steps[j]
        j += 1
        lo = u.min()
        if positive and not lo > 0:
            # NaN here means a stage value went negative under a fractional power
            bad = ~(u > 0)
            i = int(np.argmin(np.where(bad, u, np.inf))) if np.isfinite(lo) else int(np.argmax(bad))
            raise PositivityError(f"U lost positivity at node {i} (x = {grid.nodes[i]:.6g}), "
                                  f"t = {t:.6g}", node=i, time=t)
        if not np.isfinite(lo):
            raise SolverAbort(f"non-finite values at t = {t:.6g}")
    return Field(grid, u, t1)


def _boundary_plan(s, ends, t, t1, dt, eps):
    """Step start times, step sizes and stage boundary values for the next chunk."""
    n = min(CHUNK, max(1, math.ceil((t1 - t - eps) / dt)))
    starts = t + dt * np.arange(n)
    steps = np.minimum(dt, t1 - starts)
    # a step that would leave less than eps before t1 absorbs the remainder
    steps = np.where(starts + steps >= t1 - eps, t1 - starts, steps)
    stages = starts[:, None] + steps[:, None] * np.array([0.0, 0.5, 1.0])
    b = value(s, stages[:, :, None], ends[None, None, :])
    return starts, steps, np.ascontiguousarray(b[:, :, 0]), np.ascontiguousarray(b[:, :, 1])


def _integrate_bdf(eq, s, start, t1, backend):
    grid = start.grid
    rhs = _kernels.get_rhs(backend)
    args = _kernel_args(eq, grid.h)
    ends = np.array([grid.x_min, grid.x_max])
    n_in = grid.n - 2
    positive = eq.needs_positive

    def full(t, ui):
        b = value(s, t, ends)
        return np.concatenate(([b[0]], ui, [b[1]]))

    left_cone = []

    def f(t, ui):
        u = full(t, ui)
        if positive and not np.all(u > 0):
            # NaN makes BDF reject the step; remember where U tried to leave the cone
            left_cone.append((t, int(np.argmin(u))))
            return np.full(n_in, np.nan)
        return rhs(u, *args)[1:-1]

    def sign_event(t, ui):
        return float(np.min(ui))
    sign_event.terminal = True
    sign_event.direction = -1

    pattern = sp.diags([np.ones(n_in - 1), np.ones(n_in), np.ones(n_in - 1)], [-1, 0, 1])
    scale = float(np.max(np.abs(start.values)))
    try:
        sol = solve_ivp(f, (float(start.time), float(t1)), start.values[1:-1], method="BDF",
                        jac_sparsity=pattern, rtol=BDF_RTOL, atol=BDF_ATOL * max(scale, 1.0),
                        events=sign_event if positive else None)
    except (RuntimeError, ValueError, ArithmeticError) as exc:
        _stiff_failure(str(exc), left_cone, grid)
        raise SolverAbort(f"stiff integrator failed: {exc}") from exc
    if sol.status == 1:
        te = float(sol.t_events[0][0])
        ui = sol.y_events[0][0]
        i = int(np.argmin(ui)) + 1
        raise PositivityError(f"U lost positivity at node {i} (x = {grid.nodes[i]:.6g}), "
                              f"t = {te:.6g}", node=i, time=te)
    if sol.status != 0:
        _stiff_failure(sol.message, left_cone, grid)
        raise SolverAbort(f"stiff integrator failed: {sol.message}")
    u = full(float(t1), sol.y[:, -1])
    if not np.all(np.isfinite(u)):
        raise SolverAbort(f"non-finite values at t = {t1:.6g}")
    return Field(grid, u, t1)


def _stiff_failure(message, left_cone, grid):
    """Blame a BDF failure on positivity when the solver kept probing U <= 0."""
    if left_cone:
        te, i = left_cone[-1]
        raise PositivityError(f"U cannot stay positive at node {i} (x = {grid.nodes[i]:.6g}) "
                              f"near t = {te:.6g}: {message}", node=i, time=te)


def evolve(eq: EquationSpec, s: SolutionInstance, grid: Grid, t0: float, t1: float,
           dt: float | None = None, backend: str | None = None,
           method: str = "auto") -> Field:
    """Integrate from the exact slice at ``t0`` to ``t1``."""
    return evolve_series(eq, s, grid, t0, [t1], dt=dt, backend=backend, method=method)[-1]


def evolve_series(eq: EquationSpec, s: SolutionInstance, grid: Grid, t0: float,
                  times: Sequence[float], dt: float | None = None,
                  backend: str | None = None, method: str = "auto") -> list[Field]:
    """Fields at each of the increasing ``times`` (all >= ``t0``)."""
    times = [float(t) for t in times]
    if any(b < a for a, b in zip([t0] + times, times)):
        raise ValueError("snapshot times must be increasing and not before t0")
    check_window(s, grid, t0, max(times, default=t0))
    field = exact_field(s, grid, t0)
    out = []
    for t in times:
        field = integrate(eq, s, field, t, dt=dt, backend=backend, method=method)
        out.append(field)
    return out


def error_norms(numeric: np.ndarray, exact: np.ndarray, grid: Grid, time: float) -> ErrorReport:
    err = np.abs(np.asarray(numeric) - np.asarray(exact))[1:-1]
    i = int(np.argmax(err))
    return ErrorReport(float(err[i]), float(math.sqrt(grid.h * np.sum(err * err))),
                       float(grid.nodes[i + 1]), time)


def compare(numeric: Field, s: SolutionInstance) -> ErrorReport:
    """Error norms over interior nodes (boundary values are exact by construction)."""
    exact = value(s, numeric.time, numeric.grid.nodes)
    return error_norms(numeric.values, exact, numeric.grid, numeric.time)


def observed_order(err_coarse: float, err_fine: float, refinement: float = 2.0) -> float:
    return math.log(err_coarse / err_fine) / math.log(refinement)


def write_snapshots_csv(path, fields: Sequence[Field], s: SolutionInstance) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["t", "x", "U_numeric", "U_exact", "abs_err"])
        for f in fields:
            exact = value(s, f.time, f.grid.nodes)
            for x, un, ue in zip(f.grid.nodes, f.values, exact):
                w.writerow([f"{f.time:.17g}", f"{x:.17g}", f"{un:.17g}", f"{ue:.17g}",
                            f"{abs(un - ue):.17g}"])
