"""Minimal surface area position by fixed-point rescaling.

For a linear map T with det T = 1 the facets of TK have normals
T^{-T} u_j / |T^{-T} u_j| and areas |T^{-T} u_j| |F_j|, so the surface
measure is updated in closed form from the initial one. Each step replaces
T by M^p T / det(M)^{p/n}, where M = (n/S) sum |F_j| u_j (x) u_j is
the normalised isotropy matrix of the current body (S its surface area)
and p in (0, 2] minimises the resulting surface area. M = I exactly at the
minimum; p = 1 is the exact step for boxes.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize_scalar

from ..core.bodies import HPolytope
from ..core.faces import surface_measure
from ..errors import NotConverged
from .john import AffineMap

ISOTROPY_TOL = 1e-6
MAX_POWER = 2.0
MAX_ITER = 200


def isotropy_matrix(normals: np.ndarray, areas: np.ndarray) -> np.ndarray:
    n = normals.shape[1]
    return (n / areas.sum()) * (normals.T * areas) @ normals


def isotropy_residual(P: HPolytope) -> float:
    """|| I - (n / S) sum |F_j| u_j (x) u_j ||_F."""
    sm = surface_measure(P)
    return float(np.linalg.norm(np.eye(P.dim) - isotropy_matrix(sm.normals, sm.areas)))


def _measure_under(T, normals, areas):
    W = np.linalg.solve(T.T, normals.T).T  # rows T^{-T} u_j
    s = np.linalg.norm(W, axis=1)
    return W / s[:, None], areas * s


def _unimodular_power(M, power):
    w, V = np.linalg.eigh(M)
    w = w ** power
    w /= np.prod(w) ** (1.0 / len(w))
    return (V * w) @ V.T


@dataclass(frozen=True)
class TraceRecord:
    iteration: int
    objective: float
    residual: float


def min_surface_area_position(P: HPolytope, tol: float = ISOTROPY_TOL, max_iter: int = MAX_ITER,
                              trace=None) -> tuple[HPolytope, AffineMap]:
    """Volume-preserving linear image of P with isotropic surface measure.

    ``trace``, if given, is called with a TraceRecord per iteration.

    Raises
    ------
    NotConverged
        If the isotropy residual is still above ``tol`` after ``max_iter`` steps.
    """
    sm = surface_measure(P)
    u0, a0 = sm.normals, sm.areas
    n = P.dim
    I = np.eye(n)
    T = I.copy()
    u, a = u0, a0
    M = isotropy_matrix(u, a)
    res = float(np.linalg.norm(I - M))
    for it in range(max_iter):
        if trace is not None:
            trace(TraceRecord(it, float(a.sum()), res))
        if res <= tol:
            break
        # exact line search over the power; the area is closed form in T
        def area(p, M=M, T=T):
            return _measure_under(_unimodular_power(M, p) @ T, u0, a0)[1].sum()

        power = minimize_scalar(area, bounds=(0.0, MAX_POWER), method="bounded",
                                options={"xatol": 1e-4}).x
        T_new = _unimodular_power(M, power) @ T
        u_new, a_new = _measure_under(T_new, u0, a0)
        T, u, a = T_new, u_new, a_new
        M = isotropy_matrix(u, a)
        res = float(np.linalg.norm(I - M))
    else:
        if trace is not None:
            trace(TraceRecord(max_iter, float(a.sum()), res))
    if res > tol:
        raise NotConverged(f"isotropy residual {res:.2e} after {max_iter} iterations")
    T /= abs(np.linalg.det(T)) ** (1.0 / n)
    out = P.linear_image(T)
    return out, AffineMap(T, np.zeros(n))
