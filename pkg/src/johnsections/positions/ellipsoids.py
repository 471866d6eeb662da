"""Maximum-volume inscribed and minimum-volume enclosing ellipsoids.

Inscribed: the ellipsoid c + L(B) with L lower triangular lies in
{x : <a_j, x> <= b_j} iff ||L^T a_j|| + <a_j, c> <= b_j. We maximise
sum log L_ii by a log-barrier method with Newton centring on the variables
(tril(L), c); the duality gap after centring at parameter t is m / t.

Enclosing: Khachiyan's coordinate ascent on the dual weights of the lifted
points (x, 1), with Wolfe-Atwood away steps (Todd-Yildirim variant).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..core.bodies import Ellipsoid, HPolytope, VPolytope
from ..core.enumeration import affine_rank
from ..core.lp import chebyshev_ball
from ..errors import DegenerateDim, EmptyInterior, NotConverged
from ..nnls import nnls

GAP_TOL = 1e-12
STAT_TOL = 1e-12
MAX_CENTRING = 60
KKT_TOL = 1e-7


@dataclass(frozen=True)
class InscribedResult:
    ellipsoid: Ellipsoid
    factor: np.ndarray          # lower-triangular L with M = L L^T
    duality_gap: float
    kkt_residual: float
    multipliers: np.ndarray     # one per facet, sum_j mult_j = dual certificate
    newton_steps: int


def _tril_maps(n: int):
    rows, cols = np.tril_indices(n)
    p = rows.size
    Ecol = np.zeros((n, p))
    Ecol[cols, np.arange(p)] = 1.0
    diag = np.nonzero(rows == cols)[0]
    return rows, cols, Ecol, diag


def _centre(A, b, l, c, t, Phi, diag, centered, counter):
    """Newton centring of -sum log L_ii - (1/t) sum log s_j."""
    m, n = A.shape
    p = l.size

    def objective(l, c):
        Ld = l[diag]
        if np.any(Ld <= 0):
            return np.inf
        z = np.einsum("jnp,p->jn", Phi, l)
        s = b - np.linalg.norm(z, axis=1) - (0.0 if centered else A @ c)
        if np.any(s <= 0):
            return np.inf
        return -np.log(Ld).sum() - np.log(s).sum() / t

    f = objective(l, c)
    best_g, stalls = np.inf, 0
    for _ in range(MAX_CENTRING):
        counter[0] += 1
        z = np.einsum("jnp,p->jn", Phi, l)
        rho = np.linalg.norm(z, axis=1)
        zh = z / rho[:, None]
        s = b - rho - (0.0 if centered else A @ c)
        w1 = 1.0 / (t * s)
        w2 = 1.0 / (t * s * s)
        gl = np.einsum("jnp,jn->jp", Phi, zh)  # d rho_j / d l
        grad_l = gl.T @ w1
        grad_l[diag] -= 1.0 / l[diag]
        H_ll = np.einsum("jnp,jnq,j->pq", Phi, Phi, w1 / rho)
        H_ll -= np.einsum("jp,jq,j->pq", gl, gl, w1 / rho)
        H_ll += np.einsum("jp,jq,j->pq", gl, gl, w2)
        H_ll[diag, diag] += 1.0 / l[diag] ** 2
        if centered:
            H, g = H_ll, grad_l
        else:
            H_lc = np.einsum("jp,jn,j->pn", gl, A, w2)
            H_cc = np.einsum("jn,jq,j->nq", A, A, w2)
            H = np.block([[H_ll, H_lc], [H_lc.T, H_cc]])
            g = np.concatenate([grad_l, A.T @ w1])
        gmax = np.abs(g).max()
        if gmax <= STAT_TOL:
            break
        try:
            step = -np.linalg.solve(H, g)
        except np.linalg.LinAlgError:
            step = -np.linalg.lstsq(H, g, rcond=None)[0]
        dec2 = float(-g @ step)
        if dec2 <= 0:
            break
        # once centred, roundoff sets a floor on the attainable gradient
        if dec2 > 1e-14 or gmax < 0.5 * best_g:
            best_g, stalls = min(best_g, gmax), 0
        else:
            stalls += 1
            if stalls >= 3:
                break
        dl = step[:p]
        dc = np.zeros(n) if centered else step[p:]
        slack = 1e-14 * max(1.0, abs(f))
        alpha = 1.0
        while alpha >= 1e-12:
            fn = objective(l + alpha * dl, c + alpha * dc)
            if fn <= f - 0.25 * alpha * dec2 + slack:
                break
            alpha *= 0.5
        else:
            break
        l = l + alpha * dl
        c = c + alpha * dc
        f = fn
        if alpha == 1.0 and dec2 <= 1e-24:
            break
    return l, c


def _kkt_residual(A, gl, l, s, diag, centered, lam):
    stat_l = gl.T @ lam
    stat_l[diag] -= 1.0 / l[diag]
    stat = stat_l if centered else np.concatenate([stat_l, A.T @ lam])
    return max(float(np.abs(stat).max()), float(np.abs(lam * s).max()))


def _polish_multipliers(A, gl, l, s, diag, centered, lam_barrier):
    """Barrier multipliers, or NNLS multipliers on near-active facets if better."""
    best = (lam_barrier, _kkt_residual(A, gl, l, s, diag, centered, lam_barrier))
    active = np.nonzero(s <= 1e-6 * max(1.0, s.max()))[0]
    if active.size:
        target = np.zeros(l.size)
        target[diag] = 1.0 / l[diag]
        J = gl[active].T
        if not centered:
            J = np.vstack([J, A[active].T])
            target = np.concatenate([target, np.zeros(A.shape[1])])
        sol = nnls(J, target)
        lam = np.zeros(len(s))
        lam[active] = sol.x
        kkt = _kkt_residual(A, gl, l, s, diag, centered, lam)
        if kkt < best[1]:
            best = (lam, kkt)
    return best


def solve_inscribed(P: HPolytope, centered: bool = False, gap_tol: float = GAP_TOL,
                    mu: float = 20.0, max_newton: int = 2000) -> InscribedResult:
    """Maximum-volume inscribed ellipsoid with optimality certificate.

    ``centered`` fixes the centre at the origin, which is exact for bodies
    symmetric about the origin.
    """
    A, b = P.normals, P.offsets
    m, n = A.shape
    c0, r = chebyshev_ball(A, b)
    if not r > 1e-12:
        raise EmptyInterior("polytope has no interior")
    if centered:
        c0 = np.zeros(n)
        r = float(b.min())
        if r <= 0:
            raise EmptyInterior("origin is not interior")
    if r >= 1e11:
        raise EmptyInterior("polytope is unbounded")
    # normalise so the Chebyshev ball is the unit ball at the origin
    bs = (b - A @ c0) / r
    rows, cols, Ecol, diag = _tril_maps(n)
    Phi = Ecol[None, :, :] * A[:, rows][:, None, :]
    l = np.zeros(rows.size)
    l[diag] = 0.5
    c = np.zeros(n)
    t = 1.0
    counter = [0]
    while True:
        l, c = _centre(A, bs, l, c, t, Phi, diag, centered, counter)
        if counter[0] >= max_newton:
            raise NotConverged("barrier method exceeded its Newton step budget")
        if m / t <= gap_tol:
            break
        t *= mu
    z = np.einsum("jnp,p->jn", Phi, l)
    rho = np.linalg.norm(z, axis=1)
    s = bs - rho - (0.0 if centered else A @ c)
    zh = z / rho[:, None]
    gl = np.einsum("jnp,jn->jp", Phi, zh)
    lam, kkt = _polish_multipliers(A, gl, l, s, diag, centered, 1.0 / (t * s))
    L = np.zeros((n, n))
    L[rows, cols] = l
    L *= r
    center = c0 + r * c
    E = Ellipsoid(center, L @ L.T)
    return InscribedResult(E, L, m / t, kkt, lam, counter[0])


def max_inscribed_ellipsoid(P: HPolytope, centered: bool | None = None) -> Ellipsoid:
    """Maximum-volume ellipsoid contained in P.

    Raises
    ------
    EmptyInterior
        If P has no interior.
    NotConverged
        If the barrier method exhausts its step budget or the final KKT
        residual exceeds 1e-7.
    """
    if centered is None:
        centered = P.is_symmetric
    res = solve_inscribed(P, centered=centered)
    if res.kkt_residual > KKT_TOL:
        raise NotConverged(f"KKT residual {res.kkt_residual:.2e}")
    return res.ellipsoid


@dataclass(frozen=True)
class EnclosingResult:
    ellipsoid: Ellipsoid
    weights: np.ndarray
    iterations: int
    epsilon: float


def solve_enclosing(points, tol: float = 1e-10, max_iter: int = 200_000) -> EnclosingResult:
    X = np.atleast_2d(np.asarray(points, dtype=float))
    N, n = X.shape
    if N < n + 1 or affine_rank(X) < n:
        raise DegenerateDim("points do not span the ambient space")
    Q = np.hstack([X, np.ones((N, 1))])
    d = n + 1
    u = np.full(N, 1.0 / N)
    it = 0
    eps = np.inf
    while it < max_iter:
        it += 1
        Mu = (Q.T * u) @ Q
        g = np.einsum("ij,ij->i", Q @ np.linalg.inv(Mu), Q)
        j = int(np.argmax(g))
        kappa = g[j]
        support = u > 0
        i = int(np.nonzero(support)[0][np.argmin(g[support])])
        nu = g[i]
        eps_plus = kappa / d - 1.0
        eps_minus = 1.0 - nu / d
        eps = max(eps_plus, eps_minus)
        if eps <= tol:
            break
        if eps_plus >= eps_minus:
            beta = (kappa - d) / (d * (kappa - 1.0))
            u *= 1.0 - beta
            u[j] += beta
        else:
            beta = min((d - nu) / (d * (nu - 1.0)), u[i] / (1.0 - u[i]))
            u *= 1.0 + beta
            u[i] -= beta
            u[u < 0] = 0.0
    else:
        raise NotConverged(f"enclosing ellipsoid not converged (eps {eps:.2e})")
    c = u @ X
    S = (X.T * u) @ X - np.outer(c, c)
    M = n * S
    # rescale so every point is enclosed despite the finite tolerance
    D = X - c
    q = np.einsum("ij,ij->i", D @ np.linalg.inv(M), D).max()
    M *= max(q, 1.0)
    return EnclosingResult(Ellipsoid(c, M), u, it, float(eps))


def min_enclosing_ellipsoid(P: VPolytope) -> Ellipsoid:
    """Minimum-volume ellipsoid containing the vertex set of P.

    Raises
    ------
    DegenerateDim
        If the vertices lie in a hyperplane.
    NotConverged
        If the iteration cap is reached.
    """
    return solve_enclosing(P.vertices).ellipsoid
