"""Euclidean projection onto polytopes.

The QP min ||y - x|| s.t. Ay <= b is solved as a least-distance program
min ||z|| s.t. Gz >= h with z = y - x, G = -A, h = Ax - b, which in turn
reduces to the nonnegative least squares problem min ||E u - f|| with
E = [G^T; h^T] and f = e_{k+1}. The solution is z = -r[:k] / r[k] for the
residual r = Eu - f, and the QP multipliers are u / (1 - h.u).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numba import njit

from ..core.bodies import HPolytope
from ..errors import EmptyInterior, NotConverged
from ..nnls import KKT_TOL, nnls_kernel

QP_KKT_TOL = 1e-9


@njit(cache=True)
def _ldp_project(A, b, x, max_iter):
    m, k = A.shape
    E = np.empty((k + 1, m))
    for j in range(m):
        s = -b[j]
        for c in range(k):
            E[c, j] = -A[j, c]
            s += A[j, c] * x[c]
        E[k, j] = s
    f = np.zeros(k + 1)
    f[k] = 1.0
    u, it = nnls_kernel(E, f, KKT_TOL, max_iter)
    r = E @ u - f
    y = x.copy()
    if it < 0 or -r[k] <= 1e-14:
        return y, u, False
    for c in range(k):
        y[c] = x[c] - r[c] / r[k]
    lam = u / (-r[k])
    return y, lam, True


@njit(cache=True)
def _refine(A, b, x, y, lam):
    # re-solve the equality-constrained projection on the detected active set
    m, k = A.shape
    act = np.zeros(m, dtype=np.bool_)
    na = 0
    for j in range(m):
        if lam[j] > 1e-14:
            act[j] = True
            na += 1
    if na == 0:
        return x.copy(), np.zeros(m)
    S = np.empty((na, k))
    r = np.empty(na)
    q = 0
    for j in range(m):
        if act[j]:
            S[q] = A[j]
            r[q] = A[j] @ x - b[j]
            q += 1
    mu = np.linalg.lstsq(S @ S.T, r)[0]
    y2 = x - S.T @ mu
    lam2 = np.zeros(m)
    q = 0
    for j in range(m):
        if act[j]:
            lam2[j] = mu[q]
            q += 1
    return y2, lam2


@njit(cache=True)
def _kkt(A, b, x, y, lam):
    stat = np.abs(y - x + A.T @ lam).max()
    slack = A @ y - b
    feas = max(0.0, slack.max())
    comp = 0.0
    dual = 0.0
    for j in range(A.shape[0]):
        comp = max(comp, abs(lam[j] * slack[j]))
        dual = max(dual, -lam[j])
    return max(stat, feas, comp, dual)


@njit(cache=True)
def _ldp_gram(G0, A, b, x, u, h, w, passive, cols, C, z, max_iter):
    """LDP-NNLS in normal-equation form; E^T E = A A^T + h h^T with G0 = A A^T.

    Fills ``u`` and returns False on breakdown (caller falls back).
    """
    m = A.shape[0]
    for j in range(m):
        s = -b[j]
        for c in range(A.shape[1]):
            s += A[j, c] * x[c]
        h[j] = s
        u[j] = 0.0
        passive[j] = False
        w[j] = s
    it = 0
    last = -1
    while True:
        t = -1
        best = KKT_TOL
        for j in range(m):
            if not passive[j] and j != last and w[j] > best:
                best = w[j]
                t = j
        if t < 0:
            return True
        passive[t] = True
        while True:
            it += 1
            if it > max_iter:
                return False
            nc = 0
            for j in range(m):
                if passive[j]:
                    cols[nc] = j
                    nc += 1
            # Cholesky of the passive Gram block, solve for h_P
            for r in range(nc):
                for q in range(r + 1):
                    C[r, q] = G0[cols[r], cols[q]] + h[cols[r]] * h[cols[q]]
            for r in range(nc):
                for q in range(r + 1):
                    s = C[r, q]
                    for l in range(q):
                        s -= C[r, l] * C[q, l]
                    if r == q:
                        if s <= 1e-13 * (1.0 + C[r, r]):
                            return False
                        C[r, r] = np.sqrt(s)
                    else:
                        C[r, q] = s / C[q, q]
            for r in range(nc):
                s = h[cols[r]]
                for l in range(r):
                    s -= C[r, l] * z[l]
                z[r] = s / C[r, r]
            for r in range(nc - 1, -1, -1):
                s = z[r]
                for l in range(r + 1, nc):
                    s -= C[l, r] * z[l]
                z[r] = s / C[r, r]
            zmin = np.inf
            for q in range(nc):
                zmin = min(zmin, z[q])
            if zmin > 0.0:
                for q in range(nc):
                    u[cols[q]] = z[q]
                break
            alpha = np.inf
            for q in range(nc):
                if z[q] <= 0.0:
                    j = cols[q]
                    alpha = min(alpha, u[j] / (u[j] - z[q]))
            for q in range(nc):
                j = cols[q]
                u[j] += alpha * (z[q] - u[j])
                if u[j] <= 1e-300:
                    u[j] = 0.0
                    passive[j] = False
        last = -1 if passive[t] else t
        hu = 0.0
        for j in range(m):
            hu += h[j] * u[j]
        for j in range(m):
            s = h[j] * (1.0 - hu)
            for q in range(nc):
                s -= G0[j, cols[q]] * u[cols[q]]
            w[j] = s


@njit(cache=True)
def project_points(A, b, X, max_iter):
    """Projections of every row of X; returns (Y, kkt residual per row)."""
    N = X.shape[0]
    m, k = A.shape
    G0 = A @ A.T
    Y = np.empty_like(X)
    res = np.empty(N)
    u = np.empty(m)
    h = np.empty(m)
    w = np.empty(m)
    passive = np.empty(m, dtype=np.bool_)
    cols = np.empty(m, dtype=np.int64)
    C = np.empty((m, m))
    z = np.empty(m)
    for i in range(N):
        x = X[i]
        ok = _ldp_gram(G0, A, b, x, u, h, w, passive, cols, C, z, max_iter)
        hu = 0.0
        for j in range(m):
            hu += h[j] * u[j]
        if ok and 1.0 - hu > 1e-12:
            lam = u / (1.0 - hu)
            y = x - A.T @ lam
            kkt = _kkt(A, b, x, y, lam)
        else:
            kkt = np.inf
        tol = 1e-9 * max(1.0, np.abs(x).max())
        if kkt > tol:
            y, lam, ok2 = _ldp_project(A, b, x, max_iter)
            kkt = _kkt(A, b, x, y, lam) if ok2 else np.inf
        if kkt > tol and np.isfinite(kkt):
            y2, lam2 = _refine(A, b, x, y, lam)
            kkt2 = _kkt(A, b, x, y2, lam2)
            if kkt2 < kkt:
                y, kkt = y2, kkt2
        Y[i] = y
        res[i] = kkt
    return Y, res


@dataclass(frozen=True)
class Projection:
    point: np.ndarray
    distance: float
    kkt_residual: float


def project_onto_polytope(P: HPolytope, x) -> Projection:
    """Closest point of P to ``x`` with its distance.

    Raises
    ------
    NotConverged
        If the KKT residual exceeds 1e-9 (relative to the size of ``x``).
    """
    x = np.asarray(x, dtype=float)
    A = np.ascontiguousarray(P.normals)
    b = np.ascontiguousarray(P.offsets)
    Y, res = project_points(A, b, x[None, :].copy(), 10 * A.shape[0] + 50)
    if not res[0] <= QP_KKT_TOL * max(1.0, np.abs(x).max()):
        if not np.isfinite(res[0]):
            raise EmptyInterior("polytope appears empty")
        raise NotConverged(f"projection KKT residual {res[0]:.2e}")
    y = Y[0]
    return Projection(y, float(np.linalg.norm(y - x)), float(res[0]))


def distances(P: HPolytope, X: np.ndarray, cutoff: float = np.inf) -> np.ndarray:
    """dist(x, P) for each row of X.

    Points whose largest constraint violation reaches ``cutoff`` are certainly
    at distance >= cutoff; they get +inf without solving the QP.
    """
    A, b = P.normals, P.offsets
    X = np.asarray(X, dtype=float)
    viol = X @ A.T - b
    j = viol.argmax(axis=1)
    worst = viol[np.arange(len(X)), j]
    d = np.zeros(len(X))
    out = worst > 0
    far = worst >= cutoff
    d[far] = np.inf
    todo = np.nonzero(out & ~far)[0]
    if todo.size == 0:
        return d
    # a single violated facet: the foot point on that facet may already be feasible
    Y = X[todo] - worst[todo, None] * A[j[todo]]
    single = (Y @ A.T - b).max(axis=1) <= 1e-12
    d[todo[single]] = worst[todo[single]]
    hard = todo[~single]
    if hard.size:
        Yh, res = project_points(
            np.ascontiguousarray(A), np.ascontiguousarray(b),
            np.ascontiguousarray(X[hard]), 10 * len(b) + 50,
        )
        if not np.all(np.isfinite(res)):
            raise NotConverged("projection failed for some sample points")
        d[hard] = np.linalg.norm(Yh - X[hard], axis=1)
    return d
