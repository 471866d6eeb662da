import math

import numpy as np
import pytest
import scipy.optimize
from hypothesis import given, strategies as st

from johnsections.core import HPolytope, volume
from johnsections.functionals import distances, project_onto_polytope
from johnsections.harness.generators import cube, gen_body
from johnsections.nnls import nnls

seeds = st.integers(0, 2**31 - 1)


@given(seeds, st.integers(1, 30), st.integers(1, 20))
def test_nnls_matches_scipy(seed, m, n):
    rng = np.random.default_rng(seed)
    A = rng.standard_normal((m, n))
    b = rng.standard_normal(m)
    res = nnls(A, b)
    x_ref, r_ref = scipy.optimize.nnls(A, b)
    assert res.residual == pytest.approx(r_ref, rel=1e-9, abs=1e-12)
    assert np.all(res.x >= 0)


@given(seeds, st.integers(2, 25), st.integers(1, 15))
def test_nnls_kkt(seed, m, n):
    rng = np.random.default_rng(seed)
    A = rng.standard_normal((m, n))
    b = rng.standard_normal(m)
    x = nnls(A, b).x
    w = A.T @ (b - A @ x)
    scale = np.linalg.norm(A) * np.linalg.norm(b)
    assert np.all(w <= 1e-9 * scale)
    assert np.all(np.abs(w[x > 0]) <= 1e-9 * scale)


def test_nnls_exact_nonnegative_solution():
    A = np.array([[1.0, 0.0], [0.0, 1.0], [1.0, 1.0]])
    x = nnls(A, A @ np.array([2.0, 3.0])).x
    assert np.allclose(x, [2.0, 3.0], atol=1e-12)


@pytest.mark.parametrize("x, d", [([2.0, 0.0], 1.0), ([2.0, 2.0], math.sqrt(2)), ([0.3, -0.2], 0.0)])
def test_square_distances(square, x, d):
    p = project_onto_polytope(square, np.array(x))
    assert p.distance == pytest.approx(d, abs=1e-14)
    assert square.contains(p.point, tol=1e-12)


def cvx_projection(P, x):
    cp = pytest.importorskip("cvxpy")
    y = cp.Variable(len(x))
    prob = cp.Problem(cp.Minimize(cp.sum_squares(y - x)), [P.normals @ y <= P.offsets])
    prob.solve(solver=cp.CLARABEL, tol_gap_abs=1e-12, tol_gap_rel=1e-12, tol_feas=1e-12)
    return y.value


@given(seeds, st.integers(2, 6))
def test_projection_matches_cvxpy(seed, n):
    rng = np.random.default_rng(seed)
    P = gen_body("general", n, 3 * n, seed)
    x = 3 * rng.standard_normal(n)
    p = project_onto_polytope(P, x)
    ref = cvx_projection(P, x)
    assert np.allclose(p.point, ref, atol=1e-6)
    assert p.kkt_residual <= 1e-9 * max(1.0, np.abs(x).max())


@given(seeds, st.integers(2, 5))
def test_distance_zero_iff_inside(seed, n):
    rng = np.random.default_rng(seed)
    P = gen_body("symmetric", n, 2 * n + 2, seed)
    X = 1.5 * rng.standard_normal((200, n))
    d = distances(P, X)
    inside = P.contains(X, tol=0.0)
    assert np.all(d[inside] == 0.0)
    assert np.all(d[~inside] > 0.0)


@given(seeds)
def test_batched_distances_match_single_projections(seed):
    rng = np.random.default_rng(seed)
    P = gen_body("general", 4, 12, seed)
    X = 2 * rng.standard_normal((40, 4))
    d = distances(P, X)
    single = np.array([project_onto_polytope(P, x).distance for x in X])
    assert np.allclose(d, single, atol=1e-12)


def test_distance_cutoff(square):
    X = np.array([[5.0, 0.0], [2.0, 0.0], [3.9, 3.9]])
    d = distances(square, X, cutoff=3.0)
    assert d[0] == np.inf and d[1] == pytest.approx(1.0)
    # (3.9, 3.9) is at distance 2.9 sqrt 2 > 3 but each violation is below 3
    assert d[2] == pytest.approx(2.9 * math.sqrt(2))


def test_distances_lipschitz():
    P = gen_body("general", 3, 10, 4)
    rng = np.random.default_rng(0)
    X = 2 * rng.standard_normal((500, 3))
    Y = X + 0.1 * rng.standard_normal((500, 3))
    gap = np.abs(distances(P, X) - distances(P, Y))
    assert np.all(gap <= np.linalg.norm(X - Y, axis=1) + 1e-12)
