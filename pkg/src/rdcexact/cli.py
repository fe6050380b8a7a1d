"""Command-line front end.

Subcommands: ``catalog``, ``verify``, ``cubic``, ``figure`` and ``evolve``.
Exit codes: 0 pass, 1 residual/error above threshold, 2 constraint or usage
violation, 3 empty validity sample, 4 I/O failure, 5 solver abort.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import replace
from pathlib import Path

import numpy as np

from . import __version__
from .catalog import Family, SolutionInstance, list_catalog, surface
from .checks import RESIDUAL_TOL, check_family, check_instance
from .cubic import solve_cubic
from .errors import ConstraintError, DomainError, SolverAbort, UsageError
from .evolver import METHODS, Grid, compare, evolve_series, write_snapshots_csv
from .fixtures import DEFAULTS, EVOLVE_WINDOWS, FIGURES, Fixture

EXIT_OK, EXIT_FAIL, EXIT_CONSTRAINT, EXIT_EMPTY, EXIT_IO, EXIT_SOLVER = range(6)
OUTPUT_ENV = "RDCEXACT_OUTPUT_DIR"

_EQ_FLAGS = {"m": "m", "lam": "lam", "l1": "l1", "l2": "l2", "l3": "l3"}
_C_FLAGS = ("c1", "c2", "c3")


def _err(msg: str) -> None:
    print(f"error: {msg}", file=sys.stderr)


def output_dir() -> Path:
    return Path(os.environ.get(OUTPUT_ENV, "."))


def _float(text: str) -> float:
    try:
        return float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None


def _window(text: str) -> tuple[float, float]:
    try:
        a, b = (float(v) for v in text.split(":"))
    except ValueError:
        raise argparse.ArgumentTypeError(f"window must look like A:B, got {text!r}") from None
    if not b > a:
        raise argparse.ArgumentTypeError("window needs A < B")
    return a, b


def _family(text: str) -> Family:
    try:
        return Family(text.upper())
    except ValueError:
        raise argparse.ArgumentTypeError(
            f"unknown family {text!r}; choose from {', '.join(f.value for f in Family)}") from None


# ---------------------------------------------------------------------------
# resolving parameters
# ---------------------------------------------------------------------------

def _fixture(family: Family | None, fig: int | None) -> Fixture:
    if fig is not None:
        fx = FIGURES.get(f"fig{fig}")
        if fx is None:
            raise UsageError(f"no figure fixture {fig}; choose 1..6")
        if family is not None and fx.instance.family is not family:
            raise UsageError(f"fig{fig} belongs to {fx.instance.family.value}, not {family.value}")
        return fx
    if family is None:
        raise UsageError("give --family or --fig")
    return DEFAULTS[family]


def resolve(args) -> Fixture:
    """Fixture for ``--family``/``--fig`` with coefficient and constant overrides applied."""
    fx = _fixture(getattr(args, "family", None), getattr(args, "fig", None))
    s = fx.instance
    eq_over = {k: getattr(args, k) for k in _EQ_FLAGS if getattr(args, k, None) is not None}
    c_over = {k: getattr(args, k) for k in _C_FLAGS if getattr(args, k, None) is not None}
    if eq_over or c_over:
        eq = replace(s.eq, **eq_over) if eq_over else s.eq
        s = SolutionInstance(s.family, eq, **{**{k: getattr(s, k) for k in _C_FLAGS}, **c_over})
        fx = replace(fx, name=f"{fx.name}+overrides", instance=s)
    return fx


def _params_line(s: SolutionInstance) -> str:
    return " ".join(f"{k}={v}" for k, v in s.as_dict().items())


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------

def cmd_catalog(args) -> int:
    entries = list_catalog()
    if args.family is not None:
        entries = [e for e in entries if e["id"] == args.family.value]
    if args.json:
        doc = entries[0] if args.family is not None else entries
        print(json.dumps(doc, indent=2, ensure_ascii=False))
        return EXIT_OK
    for e in entries:
        print(f"{e['id']}")
        print(f"  equation:    {e['equation']}")
        print(f"  constraints: {'; '.join(e['constraints'])}")
        print(f"  constants:   {', '.join(e['constants'])}")
        print(f"  anchor:      {e['anchor']}")
    if args.family is None:
        print(f"{len(entries)} families")
    return EXIT_OK


def _verify_one(family: Family, seed: int, samples: int):
    return [r.as_dict() for r in check_family(family, seed, samples)]


def cmd_verify(args) -> int:
    if args.all:
        families = list(Family)
        if args.workers > 1:
            with ProcessPoolExecutor(args.workers) as pool:
                futures = [pool.submit(_verify_one, f, args.seed, args.samples) for f in families]
                results = [fut.result() for fut in futures]
        else:
            results = [_verify_one(f, args.seed, args.samples) for f in families]
        rows = [r for block in results for r in block]
        ok = all(r["passed"] for r in rows)
        if args.json:
            print(json.dumps({"seed": args.seed, "results": rows}, indent=2, ensure_ascii=False))
            return EXIT_OK if ok else EXIT_FAIL
        print(f"seed={args.seed} samples={args.samples} tol={RESIDUAL_TOL:g}")
        print(f"{'family':<10} {'instance':<24} {'max_residual':>12} {'rejected':>8}  result")
        for r in rows:
            print(f"{r['params']['family']:<10} {r['label']:<24} {r['max_residual']:12.3e} "
                  f"{r['rejected']:8d}  {'PASS' if r['passed'] else 'FAIL'}")
        return EXIT_OK if ok else EXIT_FAIL

    fx = resolve(args)
    s = fx.instance
    rng = np.random.default_rng(args.seed)
    report = check_instance(s, rng, args.samples, fx.t_window, fx.x_window, label=fx.name)
    code = EXIT_OK if report.passed else EXIT_FAIL
    if args.json:
        print(json.dumps({"seed": args.seed, **report.as_dict()}, indent=2, ensure_ascii=False))
        return code
    print(f"family:       {s.family.value} ({fx.name})")
    print(f"anchor:       {s.info.anchor}")
    print(f"params:       {_params_line(s)}")
    print(f"seed:         {args.seed}")
    print(f"window:       t in [{fx.t_window[0]:g}, {fx.t_window[1]:g}], "
          f"x in [{fx.x_window[0]:g}, {fx.x_window[1]:g}]")
    print(f"samples:      {report.samples} (rejected by validity: {report.rejected})")
    print(f"max residual: {report.max_residual:.3e} (tol {RESIDUAL_TOL:g})")
    print("PASS" if report.passed else "FAIL")
    return code


def cmd_cubic(args) -> int:
    sol = solve_cubic(args.p, args.q)
    print(sol.describe())
    print(f"p^3 + q^2 = {sol.discriminant:.17g}")
    for k in sol.all_roots():
        r = k ** 3 + 3 * args.p * k + 2 * args.q
        ks = f"{k:.17g}" if isinstance(k, float) else f"{k.real:.17g}{k.imag:+.17g}i"
        print(f"  k = {ks:<44} residual = {abs(r):.3e}")
    return EXIT_OK


def _default_out(name: str) -> Path:
    return output_dir() / name


def cmd_figure(args) -> int:
    fx = FIGURES.get(f"fig{args.n}")
    if fx is None:
        _err(f"no figure fixture {args.n}; choose 1..6")
        return EXIT_CONSTRAINT
    s = fx.instance
    nt, nx = fx.grid
    t = np.linspace(*fx.t_window, nt)
    x = np.linspace(*fx.x_window, nx)
    U = surface(s, t[:, None], x[None, :])
    path = Path(args.output) if args.output else _default_out(f"{fx.name}.csv")
    try:
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["t", "x", "U"])
            for i, ti in enumerate(t):
                for j, xj in enumerate(x):
                    w.writerow([f"{ti:.17g}", f"{xj:.17g}", f"{U[i, j]:.17g}"])
    except OSError as exc:
        _err(f"cannot write {path}: {exc}")
        return EXIT_IO
    print(f"{fx.name}: {s.family.value} [{fx.caption}]")
    print(f"anchor: {s.info.anchor}")
    print(f"params: {_params_line(s)}")
    print(f"grid:   {nt} x {nx} over t in [{fx.t_window[0]:g}, {fx.t_window[1]:g}], "
          f"x in [{fx.x_window[0]:.6g}, {fx.x_window[1]:.6g}]; {int(np.isnan(U).sum())} invalid points")
    print(f"wrote {path}")
    return EXIT_OK


def cmd_evolve(args) -> int:
    fx = resolve(args)
    s = fx.instance
    window = args.window or EVOLVE_WINDOWS.get(s.family, fx.x_window)
    grid = Grid(window[0], window[1], args.n)
    times = list(np.linspace(args.t0, args.t1, args.snapshots + 1)[1:]) if args.t1 > args.t0 else [args.t0]
    fields = evolve_series(s.eq, s, grid, args.t0, times, dt=args.dt, backend=args.backend,
                           method=args.method)
    reports = [compare(f, s) for f in fields]
    path = Path(args.out) if args.out else _default_out(f"evolve_{s.family.value}.csv")
    try:
        write_snapshots_csv(path, fields, s)
    except OSError as exc:
        _err(f"cannot write {path}: {exc}")
        return EXIT_IO
    final = reports[-1]
    print(f"family: {s.family.value} ({fx.name})")
    print(f"anchor: {s.info.anchor}")
    print(f"params: {_params_line(s)}")
    print(f"grid:   n={grid.n} h={grid.h:.6g} x in [{grid.x_min:g}, {grid.x_max:g}], "
          f"t in [{args.t0:g}, {args.t1:g}], method={args.method}")
    for r in reports:
        print(f"  t={r.time:<10.6g} Linf={r.linf:.3e} L2={r.l2:.3e} at x={r.x_at_max:.6g}")
    print(f"Linf at t1: {final.linf:.3e} (threshold {args.threshold:g})")
    print(f"wrote {path}")
    ok = final.linf <= args.threshold
    print("PASS" if ok else "FAIL")
    return EXIT_OK if ok else EXIT_FAIL


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------

def _add_params(p: argparse.ArgumentParser) -> None:
    p.add_argument("--family", type=_family, help="catalog family id, e.g. T1I_FAST")
    p.add_argument("--fig", type=int, choices=range(1, 7), metavar="N",
                   help="start from the figure fixture figN")
    g = p.add_argument_group("overrides")
    g.add_argument("--m", type=_float)
    g.add_argument("--lambda", dest="lam", type=_float)
    for name in ("l1", "l2", "l3", "c1", "c2", "c3"):
        g.add_argument(f"--{name}", type=_float)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="rdcexact",
        description="Exact solutions of reaction-diffusion-convection equations: "
                    "catalog, residual verification and numerical cross-checks.")
    ap.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("catalog", help="list solution families")
    p.add_argument("--family", type=_family)
    p.add_argument("--json", action="store_true", help="machine-readable output")
    p.set_defaults(func=cmd_catalog)

    p = sub.add_parser("verify", help="check PDE residuals at random valid points")
    _add_params(p)
    p.add_argument("--all", action="store_true", help="every family: default plus 3 random draws")
    p.add_argument("--samples", type=int, default=200)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("cubic", help="solve k^3 + 3pk + 2q = 0")
    p.add_argument("-p", type=_float, required=True)
    p.add_argument("-q", type=_float, required=True)
    p.set_defaults(func=cmd_cubic)

    p = sub.add_parser("figure", help="write the (t, x, U) surface of a figure fixture")
    p.add_argument("n", type=int)
    p.add_argument("-o", "--output", help=f"CSV path (default: ${OUTPUT_ENV}/figN.csv)")
    p.set_defaults(func=cmd_figure)

    p = sub.add_parser("evolve", help="method-of-lines cross-check against the exact solution")
    _add_params(p)
    p.add_argument("--n", type=int, default=401, help="grid nodes")
    p.add_argument("--window", type=_window, help="x-range A:B (default: the family's evolution window)")
    p.add_argument("--t0", type=_float, default=0.0)
    p.add_argument("--t1", type=_float, default=1.0)
    p.add_argument("--dt", type=_float, help="fixed RK4 step (checked against the stability bound)")
    p.add_argument("--method", choices=METHODS, default="auto")
    p.add_argument("--backend", choices=("numba", "numpy"))
    p.add_argument("--snapshots", type=int, default=4, help="number of output times")
    p.add_argument("--threshold", type=_float, default=1e-3)
    p.add_argument("--out", help=f"CSV path (default: ${OUTPUT_ENV}/evolve_FAMILY.csv)")
    p.set_defaults(func=cmd_evolve)
    return ap


def _join_negative_values(argv: list[str]) -> list[str]:
    # argparse reads "-2:6" as an option; glue it to its flag
    out = []
    it = iter(argv)
    for a in it:
        if a == "--window":
            nxt = next(it, None)
            out.append(a if nxt is None else f"{a}={nxt}")
        else:
            out.append(a)
    return out


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    args = build_parser().parse_args(_join_negative_values(argv))
    try:
        return args.func(args)
    except (ConstraintError, UsageError) as exc:
        _err(str(exc))
        return EXIT_CONSTRAINT
    except DomainError as exc:
        _err(str(exc))
        return EXIT_EMPTY
    except SolverAbort as exc:
        _err(str(exc))
        return EXIT_SOLVER
    except OSError as exc:
        _err(str(exc))
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
