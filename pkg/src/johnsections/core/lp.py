"""Small linear programs used across the geometry layer (HiGHS via scipy)."""

from __future__ import annotations

import numpy as np
from scipy.optimize import linprog


def positively_spanning(A: np.ndarray) -> bool:
    """True if the rows of ``A`` positively span R^n.

    For a nonempty polyhedron {x : Ax <= b} this is equivalent to boundedness.
    We ask for full rank and a strictly positive combination sum(l_j a_j) = 0,
    normalised to l_j >= 1.
    """
    A = np.atleast_2d(np.asarray(A, dtype=float))
    m, n = A.shape
    if m <= n or np.linalg.matrix_rank(A) < n:
        return False
    res = linprog(
        np.ones(m),
        A_eq=A.T,
        b_eq=np.zeros(n),
        bounds=[(1.0, None)] * m,
        method="highs",
    )
    return res.status == 0


def chebyshev_ball(A: np.ndarray, b: np.ndarray, cap: float = 1e12) -> tuple[np.ndarray, float]:
    """Largest ball inside {x : Ax <= b} for unit rows ``A``.

    Returns ``(center, radius)``; radius is negative when the polyhedron is
    empty and ``cap`` when the LP is unbounded.
    """
    A = np.atleast_2d(np.asarray(A, dtype=float))
    b = np.asarray(b, dtype=float)
    m, n = A.shape
    c = np.zeros(n + 1)
    c[-1] = -1.0
    A_ub = np.hstack([A, np.ones((m, 1))])
    bounds = [(None, None)] * n + [(None, cap)]
    res = linprog(c, A_ub=A_ub, b_ub=b, bounds=bounds, method="highs")
    if res.status == 2:
        return np.full(n, np.nan), -np.inf
    if res.status != 0:
        raise RuntimeError(f"Chebyshev LP failed: {res.message}")
    return res.x[:n], float(res.x[-1])


def lp_support(A: np.ndarray, b: np.ndarray, x: np.ndarray) -> float:
    """max <x, y> subject to Ay <= b."""
    n = A.shape[1]
    res = linprog(-np.asarray(x, dtype=float), A_ub=A, b_ub=b,
                  bounds=[(None, None)] * n, method="highs")
    if res.status != 0:
        raise RuntimeError(f"support LP failed: {res.message}")
    return float(-res.fun)
