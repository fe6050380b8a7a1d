"""Method-of-lines kernels.

Two interchangeable implementations of the semi-discrete right-hand side and
of one classical RK4 step for
``U_t = [D(U) U_x]_x + lam U^cpow U_x + C(U)`` on a uniform grid with
Dirichlet ends:

* ``rk4_step_numba``: loop kernels compiled with numba ``@njit``,
* ``rk4_step_numpy``: vectorised numpy.

``rk4_step`` is the numba one unless numba is missing or the environment
variable ``RDCEXACT_DISABLE_NUMBA`` is set to a true value.  Both produce the
same values up to rounding.
"""

from __future__ import annotations

import os

import numpy as np

try:
    from numba import njit
    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    HAVE_NUMBA = False

DISABLED = os.environ.get("RDCEXACT_DISABLE_NUMBA", "").strip().lower() in ("1", "true", "yes", "on")
USE_NUMBA = HAVE_NUMBA and not DISABLED

# reaction codes shared by both backends
R_T1I, R_T1II, R_T1III, R_T2I, R_T2II = range(5)


# ---------------------------------------------------------------------------
# numpy backend
# ---------------------------------------------------------------------------

def reaction_numpy(u, code, m, lam, l1, l2, l3):
    if code == R_T1I:
        return (l1 * u ** (m + 1.0) + l2) * (u ** (-m) - l3)
    if code == R_T1II:
        return (l1 * np.log(u) + l2) * (u - l3)
    if code == R_T1III:
        return l2 * np.sqrt(u) + l3
    if code == R_T2I:
        return l1 * u + l2 * u ** (-m)
    s = np.sqrt(u)
    return (l1 * u * s + l2 * s + l3) * (l1 / (2.0 * lam * lam) + s)


def rhs_numpy(u, h, m, lam, cpow, code, l1, l2, l3):
    out = np.zeros_like(u)
    d = u ** m
    dhalf = 0.5 * (d[1:] + d[:-1])
    flux = dhalf * (u[1:] - u[:-1])
    ui = u[1:-1]
    out[1:-1] = ((flux[1:] - flux[:-1]) / (h * h)
                 + lam * ui ** cpow * (u[2:] - u[:-2]) / (2.0 * h)
                 + reaction_numpy(ui, code, m, lam, l1, l2, l3))
    return out


def rk4_step_numpy(u, dt, h, m, lam, cpow, code, l1, l2, l3, bl, br):
    args = (h, m, lam, cpow, code, l1, l2, l3)
    k1 = rhs_numpy(u, *args)
    w = u + 0.5 * dt * k1
    w[0], w[-1] = bl[1], br[1]
    k2 = rhs_numpy(w, *args)
    w = u + 0.5 * dt * k2
    w[0], w[-1] = bl[1], br[1]
    k3 = rhs_numpy(w, *args)
    w = u + dt * k3
    w[0], w[-1] = bl[2], br[2]
    k4 = rhs_numpy(w, *args)
    new = u + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
    new[0], new[-1] = bl[2], br[2]
    return new


# ---------------------------------------------------------------------------
# numba backend
# ---------------------------------------------------------------------------

if HAVE_NUMBA:

    @njit(cache=True)
    def _pow(u, a):
        # the catalog's exponents are mostly small integers or halves
        if a == 0.0:
            return 1.0
        if a == 1.0:
            return u
        if a == 2.0:
            return u * u
        if a == -1.0:
            return 1.0 / u
        if a == -2.0:
            return 1.0 / (u * u)
        if a == 0.5:
            return np.sqrt(u)
        if a == -0.5:
            return 1.0 / np.sqrt(u)
        return u ** a

    @njit(cache=True)
    def _conv(u, d, m, cpow):
        # U^cpow given d = U^m
        if cpow == m:
            return d
        if cpow == m + 1.0:
            return d * u
        return _pow(u, cpow)

    @njit(cache=True)
    def _reaction_nb(u, code, m, lam, l1, l2, l3):
        if code == 0:
            return (l1 * _pow(u, m + 1.0) + l2) * (_pow(u, -m) - l3)
        if code == 1:
            return (l1 * np.log(u) + l2) * (u - l3)
        if code == 2:
            return l2 * np.sqrt(u) + l3
        if code == 3:
            return l1 * u + l2 * _pow(u, -m)
        s = np.sqrt(u)
        return (l1 * u * s + l2 * s + l3) * (l1 / (2.0 * lam * lam) + s)

    @njit(cache=True)
    def _rhs_nb(u, h, m, lam, cpow, code, l1, l2, l3, out):
        n = u.shape[0]
        ih2 = 1.0 / (h * h)
        i2h = 1.0 / (2.0 * h)
        out[0] = 0.0
        out[n - 1] = 0.0
        d_prev = _pow(u[0], m)
        d_cur = _pow(u[1], m)
        for i in range(1, n - 1):
            d_next = _pow(u[i + 1], m)
            flux = (0.5 * (d_cur + d_next) * (u[i + 1] - u[i])
                    - 0.5 * (d_prev + d_cur) * (u[i] - u[i - 1]))
            out[i] = (flux * ih2
                      + lam * _conv(u[i], d_cur, m, cpow) * (u[i + 1] - u[i - 1]) * i2h
                      + _reaction_nb(u[i], code, m, lam, l1, l2, l3))
            d_prev = d_cur
            d_cur = d_next

    @njit(cache=True)
    def rk4_step_numba(u, dt, h, m, lam, cpow, code, l1, l2, l3, bl, br):
        n = u.shape[0]
        k1 = np.empty(n)
        k2 = np.empty(n)
        k3 = np.empty(n)
        k4 = np.empty(n)
        w = np.empty(n)
        _rhs_nb(u, h, m, lam, cpow, code, l1, l2, l3, k1)
        for i in range(n):
            w[i] = u[i] + 0.5 * dt * k1[i]
        w[0] = bl[1]
        w[n - 1] = br[1]
        _rhs_nb(w, h, m, lam, cpow, code, l1, l2, l3, k2)
        for i in range(n):
            w[i] = u[i] + 0.5 * dt * k2[i]
        w[0] = bl[1]
        w[n - 1] = br[1]
        _rhs_nb(w, h, m, lam, cpow, code, l1, l2, l3, k3)
        for i in range(n):
            w[i] = u[i] + dt * k3[i]
        w[0] = bl[2]
        w[n - 1] = br[2]
        _rhs_nb(w, h, m, lam, cpow, code, l1, l2, l3, k4)
        new = np.empty(n)
        for i in range(n):
            new[i] = u[i] + (dt / 6.0) * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i])
        new[0] = bl[2]
        new[n - 1] = br[2]
        return new

    @njit(cache=True)
    def rhs_numba(u, h, m, lam, cpow, code, l1, l2, l3):
        out = np.empty(u.shape[0])
        _rhs_nb(u, h, m, lam, cpow, code, l1, l2, l3, out)
        return out

else:  # pragma: no cover
    rk4_step_numba = None
    rhs_numba = None


def _backend(backend):
    if backend is None:
        return "numba" if USE_NUMBA else "numpy"
    if backend not in ("numba", "numpy"):
        raise ValueError(f"unknown backend {backend!r}")
    if backend == "numba" and not HAVE_NUMBA:
        raise RuntimeError("numba backend requested but numba is not installed")
    return backend


def get_rhs(backend: str | None = None):
    """Semi-discrete right-hand side for ``backend`` ('numba', 'numpy' or default)."""
    return rhs_numba if _backend(backend) == "numba" else rhs_numpy


def get_step(backend: str | None = None):
    """Return the RK4 step function for ``backend`` ('numba', 'numpy' or default)."""
    return rk4_step_numba if _backend(backend) == "numba" else rk4_step_numpy


rk4_step = get_step()
