"""Time the numba and numpy RK4 kernels: bare steps and a full evolution.

    python3 benchmarks/bench_evolver.py [--n 801] [--t1 0.1] [--repeat 3]

The first numba call is excluded (compilation / cache load).
"""

import argparse
import time

import numpy as np

from rdcexact import _kernels, evolver
from rdcexact.fixtures import FIGURES


def run(backend, s, grid, t1):
    return evolver.evolve(s.eq, s, grid, 0.0, t1, backend=backend, method="rk4")


def bare_steps(backend, s, grid, nsteps):
    u = evolver.exact_field(s, grid, 0.0).values
    args = evolver._kernel_args(s.eq, grid.h)
    dt = evolver.stable_dt(s.eq, u, grid.h)
    step = _kernels.get_step(backend)
    bl = np.full(3, u[0])
    br = np.full(3, u[-1])
    step(u, dt, *args, bl, br)
    t = time.perf_counter()
    for _ in range(nsteps):
        u = step(u, dt, *args, bl, br)
    return (time.perf_counter() - t) / nsteps


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, default=801)
    ap.add_argument("--t1", type=float, default=0.1)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()

    s = FIGURES["fig6"].instance
    grid = evolver.Grid(-10.0, -2.0, args.n)
    run("numba", s, evolver.Grid(-10.0, -2.0, 11), 1e-3)     # warm-up

    results = {}
    for backend in ("numba", "numpy"):
        best = np.inf
        for _ in range(args.repeat):
            t = time.perf_counter()
            field = run(backend, s, grid, args.t1)
            best = min(best, time.perf_counter() - t)
        results[backend] = (best, field)

    diff = float(np.max(np.abs(results["numba"][1].values - results["numpy"][1].values)))
    print(f"T2II_FN (fig6), n={args.n}, evolution to t1={args.t1}")
    for backend, (sec, field) in results.items():
        err = evolver.compare(field, s).linf
        per = bare_steps(backend, s, grid, 2000)
        print(f"  {backend:<6} evolve {sec:8.3f} s   bare step {1e6 * per:8.1f} us   Linf={err:.3e}")
    print(f"  speed-up {results['numpy'][0] / results['numba'][0]:.2f}x, max |numba - numpy| = {diff:.2e}")


if __name__ == "__main__":
    main()
