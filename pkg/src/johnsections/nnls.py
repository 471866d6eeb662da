"""Lawson-Hanson active-set nonnegative least squares, compiled with numba.

The same kernel backs the decomposition-of-identity fit and, through the
least-distance-programming reduction, projection onto polytopes.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numba import njit

from .errors import NotConverged

KKT_TOL = 1e-10


@njit(cache=True)
def _lstsq_cols(A, b, cols, ncols):
    # Householder QR on the selected columns; lstsq only if rank deficient
    m = A.shape[0]
    R = np.empty((m, ncols))
    for q in range(ncols):
        R[:, q] = A[:, cols[q]]
    y = b.copy()
    if ncols > m:
        return np.linalg.lstsq(R, b)[0]
    scale = 0.0
    for q in range(ncols):
        for r in range(m):
            scale = max(scale, abs(R[r, q]))
    for q in range(ncols):
        nrm = 0.0
        for r in range(q, m):
            nrm += R[r, q] * R[r, q]
        nrm = np.sqrt(nrm)
        if nrm <= 1e-13 * scale:
            return np.linalg.lstsq(A[:, cols[:ncols]], b)[0]
        alpha = -nrm if R[q, q] >= 0 else nrm
        v0 = R[q, q] - alpha
        vnorm2 = v0 * v0
        for r in range(q + 1, m):
            vnorm2 += R[r, q] * R[r, q]
        if vnorm2 > 0.0:
            for c in range(q + 1, ncols):
                s = v0 * R[q, c]
                for r in range(q + 1, m):
                    s += R[r, q] * R[r, c]
                s = 2.0 * s / vnorm2
                R[q, c] -= s * v0
                for r in range(q + 1, m):
                    R[r, c] -= s * R[r, q]
            s = v0 * y[q]
            for r in range(q + 1, m):
                s += R[r, q] * y[r]
            s = 2.0 * s / vnorm2
            y[q] -= s * v0
            for r in range(q + 1, m):
                y[r] -= s * R[r, q]
        R[q, q] = alpha
    z = np.empty(ncols)
    for q in range(ncols - 1, -1, -1):
        s = y[q]
        for c in range(q + 1, ncols):
            s -= R[q, c] * z[c]
        z[q] = s / R[q, q]
    return z


@njit(cache=True)
def nnls_kernel(A, b, tol, max_iter):
    """Solve min ||Ax - b|| subject to x >= 0.

    Returns ``(x, iterations)``; iterations is -1 when ``max_iter`` is hit.
    ``tol`` is the dual feasibility threshold on the gradient w = A^T(b - Ax).
    """
    m, n = A.shape
    x = np.zeros(n)
    passive = np.zeros(n, dtype=np.bool_)
    blocked = np.zeros(n, dtype=np.bool_)
    cols = np.empty(n, dtype=np.int64)
    w = A.T @ b
    it = 0
    while True:
        t = -1
        best = tol
        for j in range(n):
            if not passive[j] and not blocked[j] and w[j] > best:
                best = w[j]
                t = j
        if t < 0:
            break
        passive[t] = True
        while True:
            it += 1
            if it > max_iter:
                return x, -1
            nc = 0
            for j in range(n):
                if passive[j]:
                    cols[nc] = j
                    nc += 1
            z = _lstsq_cols(A, b, cols, nc)
            zmin = np.inf
            for q in range(nc):
                if z[q] < zmin:
                    zmin = z[q]
            if zmin > 0.0:
                x[:] = 0.0
                for q in range(nc):
                    x[cols[q]] = z[q]
                break
            alpha = np.inf
            for q in range(nc):
                if z[q] <= 0.0:
                    j = cols[q]
                    a = x[j] / (x[j] - z[q])
                    if a < alpha:
                        alpha = a
            for q in range(nc):
                j = cols[q]
                x[j] += alpha * (z[q] - x[j])
            for q in range(nc):
                j = cols[q]
                if x[j] <= 1e-300:
                    x[j] = 0.0
                    passive[j] = False
        if passive[t]:
            blocked[:] = False
        else:
            # the entering column was rejected at once: roundoff, skip it
            blocked[t] = True
        w = A.T @ (b - A @ x)
    return x, it


@dataclass(frozen=True)
class NnlsResult:
    x: np.ndarray
    residual: float
    iterations: int


def nnls(A, b, tol: float = KKT_TOL, max_iter: int | None = None) -> NnlsResult:
    """Nonnegative least squares min ||Ax - b||, x >= 0.

    Parameters
    ----------
    A : (m, n) array
    b : (m,) array
    tol : float
        Stop when every inactive gradient component is at most ``tol``.
    max_iter : int, optional
        Inner iteration cap, default ``3 n``.

    Raises
    ------
    NotConverged
        If the iteration cap is reached.
    """
    A = np.ascontiguousarray(A, dtype=float)
    b = np.ascontiguousarray(b, dtype=float)
    if max_iter is None:
        max_iter = max(30, 3 * A.shape[1])
    x, it = nnls_kernel(A, b, tol, max_iter)
    if it < 0:
        raise NotConverged(f"NNLS did not converge in {max_iter} iterations")
    return NnlsResult(x, float(np.linalg.norm(A @ x - b)), int(it))
