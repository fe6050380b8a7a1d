import csv
import json
import math
import os
import subprocess
import sys

import numpy as np
import pytest

from rdcexact.catalog import Family


def run(*args, tmp_path):
    env = dict(os.environ, RDCEXACT_OUTPUT_DIR=str(tmp_path))
    return subprocess.run([sys.executable, "-m", "rdcexact", *map(str, args)], cwd=tmp_path, env=env,
                          capture_output=True, text=True, timeout=300)


def read_csv(path):
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    return rows[0], np.array(rows[1:], dtype=float)


# -- catalog ------------------------------------------------------------------------

def test_catalog_lists_every_family(tmp_path):
    out = run("catalog", tmp_path=tmp_path)
    assert out.returncode == 0
    for f in Family:
        assert f.value in out.stdout


def test_catalog_json_schema(tmp_path):
    doc = json.loads(run("catalog", "--json", tmp_path=tmp_path).stdout)
    assert [d["id"] for d in doc] == [f.value for f in Family]
    for d in doc:
        assert {"id", "equation", "constraints", "constants", "anchor"} <= set(d)


def test_catalog_single_family(tmp_path):
    d = json.loads(run("catalog", "--family", "T2II_FN", "--json", tmp_path=tmp_path).stdout)
    assert d["id"] == "T2II_FN" and "m = -1/2" in d["constraints"]


# -- verify ------------------------------------------------------------------------

def test_verify_passes(tmp_path):
    out = run("verify", "--family", "T1I_EXP", "--m", 1, "--lambda", 3, "--l1", -1, "--l3", 1,
              tmp_path=tmp_path)
    assert out.returncode == 0, out.stdout + out.stderr
    assert out.stdout.strip().endswith("PASS")


def test_verify_json(tmp_path):
    out = run("verify", "--fig", 6, "--seed", 3, "--json", tmp_path=tmp_path)
    d = json.loads(out.stdout)
    assert out.returncode == 0 and d["passed"] and d["seed"] == 3
    assert d["params"]["family"] == "T2II_FN" and d["max_residual"] <= 1e-8


def test_verify_constraint_violation(tmp_path):
    # delta = lambda^2 + 4 l1 (m+1) l3 = 4 - 8 < 0 contradicts the exponential branch
    out = run("verify", "--family", "T1I_EXP", "--m", 1, "--lambda", 2, "--l1", -1, "--l3", 1,
              tmp_path=tmp_path)
    assert out.returncode == 2
    assert "T1I_EXP" in out.stderr


def test_verify_all_ordered_by_family(tmp_path):
    out = run("verify", "--all", "--seed", 42, "--workers", 2, "--json", tmp_path=tmp_path)
    assert out.returncode == 0
    fams = [r["params"]["family"] for r in json.loads(out.stdout)["results"]]
    assert fams == [f.value for f in Family for _ in range(4)]


def test_unknown_family_is_usage_error(tmp_path):
    assert run("verify", "--family", "NOPE", tmp_path=tmp_path).returncode == 2


# -- cubic ---------------------------------------------------------------------------

@pytest.mark.parametrize("p,q,kind,roots", [
    (-1, 0, "ThreeDistinct", [0.0, math.sqrt(3), -math.sqrt(3)]),
    (-1, 1, "RealPlusDouble", [-2.0, 1.0]),
    (0, 0, "TripleRoot", [0.0]),
])
def test_cubic_examples(tmp_path, p, q, kind, roots):
    out = run("cubic", "-p", p, "-q", q, tmp_path=tmp_path)
    assert out.returncode == 0
    first = out.stdout.splitlines()[0]
    assert first.startswith(kind)
    vals = [float(tok.split("=")[1]) for tok in first.split()[1:] if "=" in tok]
    assert np.allclose(vals, roots, rtol=0, atol=1e-15)


def test_cubic_complex_pair(tmp_path):
    out = run("cubic", "-p", 1, "-q", 1, tmp_path=tmp_path)
    assert out.stdout.startswith("OneRealPair") and "p^3 + q^2 = 2" in out.stdout


# -- figure --------------------------------------------------------------------------

def test_figure1_zero_column(tmp_path):
    assert run("figure", 1, tmp_path=tmp_path).returncode == 0
    header, data = read_csv(tmp_path / "fig1.csv")
    assert header == ["t", "x", "U"]
    assert np.all(data[data[:, 1] == 0.0, 2] == 0.0)
    assert np.all(data[:, 2] >= 0)


def test_figure2_edges(tmp_path):
    run("figure", 2, "-o", tmp_path / "two.csv", tmp_path=tmp_path)
    _, data = read_csv(tmp_path / "two.csv")
    x = data[:, 1]
    edge = np.isclose(np.abs(x), math.pi / 2, rtol=0, atol=1e-15)
    assert edge.any() and np.nanmax(data[edge, 2]) <= 1e-7
    assert np.nanmax(data[~edge, 2]) > 0.1


def test_figure3_bounded(tmp_path):
    run("figure", 3, tmp_path=tmp_path)
    _, data = read_csv(tmp_path / "fig3.csv")
    assert np.all((data[:, 2] > 0) & (data[:, 2] < 1))


def test_figure_round_trips_full_precision(tmp_path):
    from rdcexact.catalog import value
    from rdcexact.fixtures import FIGURES

    run("figure", 4, tmp_path=tmp_path)
    _, data = read_csv(tmp_path / "fig4.csv")
    ref = value(FIGURES["fig4"].instance, data[:, 0], data[:, 1])
    assert np.array_equal(data[:, 2], ref)


# -- evolve --------------------------------------------------------------------------

@pytest.mark.slow
def test_evolve_fast_diffusion(tmp_path):
    out = run("evolve", "--family", "T1I_FAST", "--lambda", 1, "--l1", 1, "--c1", 1, "--c2", 1,
              "--n", 801, "--window=-10:10", "--t0", 0, "--t1", 1, tmp_path=tmp_path)
    assert out.returncode == 0, out.stdout + out.stderr
    header, data = read_csv(tmp_path / "evolve_T1I_FAST.csv")
    assert header == ["t", "x", "U_numeric", "U_exact", "abs_err"]
    final = data[data[:, 0] == data[:, 0].max()]
    assert np.max(final[:, 4]) <= 5e-4


def test_evolve_zero_length(tmp_path):
    out = run("evolve", "--fig", 3, "--n", 101, "--t1", 0, "--snapshots", 1, tmp_path=tmp_path)
    assert out.returncode == 0
    _, data = read_csv(tmp_path / "evolve_T1I_FAST.csv")
    assert np.all(data[:, 4] == 0.0)


def test_evolve_fn_default_window(tmp_path):
    out = run("evolve", "--fig", 6, "--n", 201, "--t1", 0.5, tmp_path=tmp_path)
    assert out.returncode == 0, out.stdout + out.stderr


def test_evolve_window_outside_validity(tmp_path):
    # the two-shock FN solution only exists for x < -3t/2
    out = run("evolve", "--fig", 6, "--window", "-2:6", "--t1", 0.5, tmp_path=tmp_path)
    assert out.returncode == 3
    assert not (tmp_path / "evolve_T2II_FN.csv").exists()


def test_evolve_unstable_dt(tmp_path):
    out = run("evolve", "--fig", 3, "--n", 101, "--t1", 0.1, "--dt", 1, tmp_path=tmp_path)
    assert out.returncode == 5
    assert "stability bound" in out.stderr


def test_evolve_unwritable_output(tmp_path):
    out = run("evolve", "--fig", 3, "--n", 101, "--t1", 0.01, "--out", tmp_path / "missing" / "x.csv",
              tmp_path=tmp_path)
    assert out.returncode == 4
