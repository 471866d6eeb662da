"""Vertex and facet enumeration.

Vertices of an H-polytope are found by brute force over all n-subsets of
constraints: every nonsingular subset gives a candidate point, and the
feasible candidates (merged within ``MERGE_TOL``) are the vertices. The work is
batched with numpy. When the subset count exceeds ``SUBSET_BUDGET`` we fall
back to Qhull's halfspace intersection, which gives the same vertex set.
"""

from __future__ import annotations

import math
import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components
from scipy.spatial import ConvexHull, HalfspaceIntersection, QhullError, cKDTree

from ..errors import DegenerateDim, GeometryError, TooLarge, Unbounded
from .bodies import HPolytope, VPolytope, detect_tags
from ._kernels import brute_force_vertices
from .lp import chebyshev_ball, positively_spanning

MAX_FACETS = 64
MAX_DIM = 9
MERGE_TOL = 1e-9
INCIDENCE_TOL = 1e-9
FEAS_TOL = 1e-9
DET_TOL = 1e-12
SUBSET_BUDGET = 2_000_000


def lex_order(X: np.ndarray) -> np.ndarray:
    return np.lexsort(X.T[::-1])


def merge_points(X: np.ndarray, tol: float = MERGE_TOL) -> np.ndarray:
    """Collapse clusters of points closer than ``tol`` to their means."""
    if len(X) <= 1:
        return X
    # degenerate vertices repeat once per tight n-subset; bin them on a grid first
    _, cell, counts = np.unique(np.round(X / tol), axis=0, return_inverse=True, return_counts=True)
    cell = cell.reshape(-1)
    C = np.zeros((len(counts), X.shape[1]))
    np.add.at(C, cell, X)
    C /= counts[:, None]
    pairs = cKDTree(C).query_pairs(tol, output_type="ndarray")
    if len(pairs) == 0:
        ncomp, label = len(C), np.arange(len(C))
    else:
        g = coo_matrix((np.ones(len(pairs)), (pairs[:, 0], pairs[:, 1])), shape=(len(C), len(C)))
        ncomp, label = connected_components(g, directed=False)
    point_label = label[cell]
    out = np.zeros((ncomp, X.shape[1]))
    np.add.at(out, point_label, X)
    return out / np.bincount(point_label, minlength=ncomp)[:, None]


def _brute_force(A: np.ndarray, b: np.ndarray) -> np.ndarray:
    scale = max(1.0, float(np.abs(b).max()))
    return brute_force_vertices(np.ascontiguousarray(A), np.ascontiguousarray(b), DET_TOL, FEAS_TOL * scale)


def _qhull_vertices(A: np.ndarray, b: np.ndarray) -> np.ndarray:
    center, r = chebyshev_ball(A, b)
    if r <= 0:
        raise GeometryError("polytope has empty interior")
    hs = HalfspaceIntersection(np.hstack([A, -b[:, None]]), center)
    return hs.intersections


def vertices_and_incidence(P: HPolytope) -> tuple[np.ndarray, np.ndarray]:
    """Vertices (lexicographic order) and the vertex-by-constraint incidence matrix."""
    n, m = P.dim, P.n_facets
    if m > MAX_FACETS or n > MAX_DIM:
        raise TooLarge(f"m={m}, n={n} exceeds the enumeration guard ({MAX_FACETS}, {MAX_DIM})")
    if not positively_spanning(P.normals):
        raise Unbounded("normals do not positively span the ambient space")
    A, b = P.normals, P.offsets
    if math.comb(m, n) <= SUBSET_BUDGET:
        X = _brute_force(A, b)
    else:
        X = _qhull_vertices(A, b)
    X = merge_points(X)
    if len(X) == 0:
        raise GeometryError("polytope is empty")
    X = X[lex_order(X)]
    scale = max(1.0, float(np.abs(b).max()))
    inc = np.abs(X @ A.T - b) <= INCIDENCE_TOL * scale
    return X, inc


def vertex_enumerate(P: HPolytope) -> VPolytope:
    """Vertex set of a bounded H-polytope.

    Raises
    ------
    Unbounded
        If the normals do not positively span R^n.
    TooLarge
        If more than 64 facets or dimension above 9.
    """
    X, _ = vertices_and_incidence(P)
    return VPolytope(X)


def affine_rank(X: np.ndarray, tol: float = 1e-9) -> int:
    if len(X) <= 1:
        return 0
    D = X[1:] - X[0]
    s = np.linalg.svd(D, compute_uv=False)
    return int((s > tol * max(1.0, s[0])).sum())


def hull_vertices(P: np.ndarray) -> np.ndarray:
    n = P.shape[1]
    if affine_rank(P) < n:
        raise DegenerateDim("points do not span the ambient space")
    try:
        hull = ConvexHull(P)
    except QhullError as exc:
        raise DegenerateDim(str(exc)) from exc
    X = P[np.sort(hull.vertices)]
    X = merge_points(X)
    return X[lex_order(X)]


def facet_enumerate(V: VPolytope) -> HPolytope:
    """Irredundant facet description of the hull of ``V``.

    Qhull returns a triangulated boundary; coplanar pieces share one
    hyperplane and are merged here.
    """
    X = V.vertices
    n = X.shape[1]
    if n == 1:
        lo, hi = float(X.min()), float(X.max())
        if hi - lo <= 1e-12 * max(1.0, abs(hi)):
            raise DegenerateDim("points span a single point")
        A = np.array([[1.0], [-1.0]])
        b = np.array([hi, -lo])
        return HPolytope(A, b, detect_tags(A, b))
    if affine_rank(X) < n:
        raise DegenerateDim("points do not span the ambient space")
    try:
        hull = ConvexHull(X)
    except QhullError as exc:
        raise DegenerateDim(str(exc)) from exc
    eq = hull.equations
    A = eq[:, :n]
    b = -eq[:, n]
    s = np.linalg.norm(A, axis=1)
    A, b = A / s[:, None], b / s
    key = merge_points(np.hstack([A, b[:, None]]), tol=1e-8)
    A, b = key[:, :n], key[:, n]
    # refit each merged hyperplane exactly through its incident vertices
    A, b = _refit_planes(A, b, X)
    order = lex_order(np.hstack([A, b[:, None]]))
    A, b = A[order], b[order]
    return HPolytope(A, b, detect_tags(A, b))


def _refit_planes(A, b, X):
    n = X.shape[1]
    scale = max(1.0, float(np.abs(X).max()))
    A2, b2 = A.copy(), b.copy()
    for j in range(len(b)):
        on = np.abs(X @ A[j] - b[j]) <= 1e-8 * scale
        pts = X[on]
        if len(pts) < n:
            continue
        c = pts.mean(axis=0)
        _, _, vt = np.linalg.svd(pts - c)
        a = vt[-1]
        if a @ A[j] < 0:
            a = -a
        A2[j] = a / np.linalg.norm(a)
        b2[j] = A2[j] @ c
    return A2, b2
