"""End-to-end acceptance checks, one group per criterion.

Run with ``pytest tests/test_acceptance.py -v``; the terminal summary prints
one PASS/FAIL line per criterion. Criterion 7 runs the full regression
suite (several minutes) and carries the ``slow`` marker.
"""

import json
import math
import subprocess
import sys
import time

import numpy as np
import pytest

from johnsections.core import projection_body, section, surface_measure, volume, zonotope_volume
from johnsections.functionals.montecarlo import mean_width_mc, wills_mc
from johnsections.harness.checkers import CHECKERS, t1c_bound
from johnsections.harness.experiment import run_experiment
from johnsections.harness.generators import cross, cube, diagonal_subspace, simplex, simplex_face_subspace
from johnsections.harness.records import ExperimentConfig
from johnsections.positions import (
    contact_points, fit_john_decomposition, isotropy_residual, max_inscribed_ellipsoid, min_surface_area_position,
)

CLI = [sys.executable, "-m", "johnsections.harness.cli"]


def _john_cases():
    yield "cube", cube(3), np.eye(3)
    for n in range(2, 7):
        yield f"simplex-{n}", simplex(n), np.eye(n)
    for n in (2, 3, 4):
        yield f"cross-{n}", cross(n), np.eye(n) / n


@pytest.mark.criterion(1, "John certification of cube, simplices and cross-polytopes")
def test_john_certification():
    start = time.perf_counter()
    for name, K, target in _john_cases():
        E = max_inscribed_ellipsoid(K)
        assert np.linalg.norm(E.shape - target) <= 1e-5, name
        # rescale so the inscribed ball is the unit ball before reading contacts
        r = math.sqrt(target[0, 0])
        dec = fit_john_decomposition(contact_points(K.scaled(1 / r)), symmetric=K.is_symmetric)
        dec.check(1e-7)
        assert dec.identity_residual() <= 1e-7 and dec.centering_residual() <= 1e-7
        assert dec.weight_sum_residual() <= 1e-7 and dec.weights.min() > 0 and dec.weights.max() <= 1 + 1e-7
    assert time.perf_counter() - start < 10.0


@pytest.mark.criterion(2, "cube diagonal sections are sharp")
@pytest.mark.parametrize("n,k", [(2, 1), (2, 2), (4, 1), (4, 2), (4, 4), (6, 1), (6, 2), (6, 3), (6, 6)])
def test_cube_sharpness(n, k):
    v = volume(section(cube(n), diagonal_subspace(n, k)))
    assert abs(v ** (1 / k) - 2 * math.sqrt(n / k)) <= 1e-9


@pytest.mark.criterion(3, "simplex face sections attain the affine bound")
@pytest.mark.parametrize("n,k", [(3, 1), (3, 2), (4, 2)])
def test_simplex_sharpness(n, k):
    d = math.sqrt(n * (n - k) / (k + 1))
    F = simplex_face_subspace(n, range(k + 1))
    assert abs(F.distance - d) <= 1e-12
    lhs = volume(section(simplex(n), F)) ** (1 / k)
    rhs = t1c_bound(n, k, d)
    assert abs(lhs - rhs) <= 1e-8 * rhs


@pytest.mark.criterion(4, "Monte Carlo functionals of the square")
def test_square_wills():
    start = time.perf_counter()
    est = wills_mc(cube(2), 10**6, 0, exact_shortcuts=False)
    assert time.perf_counter() - start < 5.0
    assert abs(est.value - 9.0) <= 3 * est.std_error
    assert est.std_error > 0


@pytest.mark.criterion(4, "Monte Carlo functionals of the square")
def test_square_mean_width():
    start = time.perf_counter()
    est = mean_width_mc(cube(2), 10**6, 0)
    assert time.perf_counter() - start < 5.0
    assert abs(est.value - 4 / math.pi) <= 3 * est.std_error


@pytest.mark.criterion(5, "projection body of the cube")
@pytest.mark.parametrize("n", [2, 3])
def test_projection_body_cube(n):
    K = cube(n)
    # facet areas come from a triangulation, so agreement is to roundoff
    exact = 2 ** (n * n)
    assert abs((surface_measure(K).total / n) ** n - exact) <= 1e-12 * exact
    assert abs(zonotope_volume(projection_body(K)) - exact) <= 1e-12 * exact


@pytest.mark.criterion(6, "minimal surface area position of a distorted square")
def test_minsurf_distorted_square():
    P = cube(2).linear_image(np.diag([2.0, 0.5]))
    start = time.perf_counter()
    K, _ = min_surface_area_position(P)
    assert time.perf_counter() - start < 1.0
    assert isotropy_residual(K) <= 1e-6
    assert abs(surface_measure(K).total - 8.0) <= 1e-6


@pytest.mark.slow
@pytest.mark.criterion(7, "full regression suite reports zero failures")
def test_full_suite(tmp_path):
    start = time.perf_counter()
    proc = subprocess.run(CLI + ["check", "--all", "--trials", "200", "--samples", "100000",
                                 "--max-n", "6", "--out", str(tmp_path)], capture_output=True, text=True)
    elapsed = time.perf_counter() - start
    print(proc.stdout)
    assert proc.returncode == 0, proc.stderr
    assert elapsed <= 15 * 60
    for tid in CHECKERS:
        c = json.loads((tmp_path / f"{tid}.json").read_text())["counts"]
        assert c["failed"] == 0, tid
        assert c["passed"] + c["skipped"] == c["trials"] == 200, tid


@pytest.mark.criterion(8, "lifted restriction bounds and Gaussian comparison on every trial")
@pytest.mark.parametrize("tid", ["L32", "G1"])
def test_proof_level_properties(tid):
    rep = run_experiment(ExperimentConfig(tid, trials=200, mc_samples=100_000))
    c = rep.counts()
    assert c == {"trials": 200, "passed": 200, "failed": 0, "skipped": 0}
    if tid == "L32":
        assert all(r.lhs_err == 0 and r.rhs_err == 0 for r in rep.records)


@pytest.mark.criterion(9, "identical configs give byte-identical reports")
def test_determinism(tmp_path):
    a, b = tmp_path / "a", tmp_path / "b"
    args = ["check", "--all", "--trials", "3", "--samples", "5000", "--seed", "42"]
    for out in (a, b):
        proc = subprocess.run(CLI + args + ["--out", str(out)], capture_output=True, text=True)
        assert proc.returncode == 0, proc.stderr
    for tid in CHECKERS:
        assert (a / f"{tid}.json").read_bytes() == (b / f"{tid}.json").read_bytes(), tid
        assert (a / f"{tid}.csv").read_bytes() == (b / f"{tid}.csv").read_bytes(), tid
