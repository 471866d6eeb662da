"""Decompositions of the identity and their lifted and restricted forms.

A John decomposition is sum c_j u_j (x) u_j = I_n with sum c_j u_j = 0. Lifting
to R^{n+1} gives unit vectors v_j with weights d_j decomposing I_{n+1}.
Restricting to a subspace H keeps the projected directions w_j with weights
k_j = d_j |P_H v_j|^2 (a decomposition of the identity of H).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..core.bodies import Subspace
from ..errors import GeometryError, InfeasibleDecomposition
from ..nnls import nnls

DECOMP_TOL = 1e-7
WEIGHT_FLOOR = 1e-10


def _sym_rows(U: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Columns u_j (x) u_j in upper-triangular coordinates (off-diagonal scaled by sqrt 2)."""
    n = U.shape[1]
    iu, ju = np.triu_indices(n)
    w = np.where(iu == ju, 1.0, math.sqrt(2.0))
    return (U[:, iu] * U[:, ju] * w).T, np.where(iu == ju, 1.0, 0.0)


@dataclass(frozen=True)
class JohnDecomposition:
    contacts: np.ndarray
    weights: np.ndarray

    @property
    def dim(self) -> int:
        return self.contacts.shape[1]

    def identity_residual(self) -> float:
        U, c = self.contacts, self.weights
        return float(np.linalg.norm(np.eye(self.dim) - (U.T * c) @ U))

    def centering_residual(self) -> float:
        return float(np.linalg.norm(self.weights @ self.contacts))

    def weight_sum_residual(self) -> float:
        return abs(float(self.weights.sum()) - self.dim)

    def check(self, tol: float = DECOMP_TOL) -> None:
        """Raise InfeasibleDecomposition unless every invariant holds at ``tol``."""
        c = self.weights
        bad = []
        if self.identity_residual() > tol:
            bad.append(f"identity residual {self.identity_residual():.2e}")
        if self.centering_residual() > tol:
            bad.append(f"centering residual {self.centering_residual():.2e}")
        if self.weight_sum_residual() > tol * max(1, self.dim):
            bad.append(f"weight sum off by {self.weight_sum_residual():.2e}")
        if c.size and (c.min() <= 0 or c.max() > 1 + tol):
            bad.append("weights outside (0, 1]")
        if bad:
            raise InfeasibleDecomposition("; ".join(bad))

    def to_dict(self) -> dict:
        return {"contacts": self.contacts.tolist(), "weights": self.weights.tolist()}

    @classmethod
    def from_dict(cls, d: dict) -> "JohnDecomposition":
        return cls(np.asarray(d["contacts"], dtype=float), np.asarray(d["weights"], dtype=float))


def _pair_up(U: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Indices (first, partner) of antipodal pairs among the rows of U."""
    used = np.zeros(len(U), dtype=bool)
    first, second = [], []
    for j in range(len(U)):
        if used[j]:
            continue
        d = np.abs(U + U[j]).max(axis=1)
        d[used] = np.inf
        d[j] = np.inf
        i = int(np.argmin(d))
        if d[i] > 1e-9:
            raise InfeasibleDecomposition("contact set is not symmetric")
        used[[i, j]] = True
        first.append(j)
        second.append(i)
    return np.array(first), np.array(second)


def fit_john_decomposition(contacts, symmetric: bool = False) -> JohnDecomposition:
    """Nonnegative weights c_j with sum c_j u_j (x) u_j = I and sum c_j u_j = 0.

    The weights solve a nonnegative least squares problem; tiny weights
    are dropped together with their contact points. For ``symmetric`` input
    each antipodal pair gets one weight split equally between its members,
    which makes the centring condition exact.

    Raises
    ------
    InfeasibleDecomposition
        If the best fit leaves a residual above 1e-7.
    """
    U = np.atleast_2d(np.asarray(contacts, dtype=float))
    m, n = U.shape
    if symmetric:
        first, second = _pair_up(U)
        S, target = _sym_rows(U[first])
        sol = nnls(S, target)
        c = np.zeros(m)
        c[first] = 0.5 * sol.x
        c[second] = 0.5 * sol.x
    else:
        S, target = _sym_rows(U)
        M = np.vstack([S, U.T])
        sol = nnls(M, np.concatenate([target, np.zeros(n)]))
        c = sol.x
    if sol.residual > DECOMP_TOL:
        raise InfeasibleDecomposition(f"no decomposition of the identity (residual {sol.residual:.2e})")
    keep = c > WEIGHT_FLOOR
    dec = JohnDecomposition(U[keep].copy(), c[keep].copy())
    dec.check()
    return dec


@dataclass(frozen=True)
class LiftedDecomposition:
    vectors: np.ndarray   # v_j in R^{n+1}
    weights: np.ndarray   # d_j

    def identity_residual(self) -> float:
        V, d = self.vectors, self.weights
        return float(np.linalg.norm(np.eye(V.shape[1]) - (V.T * d) @ V))


def lift_decomposition(dec: JohnDecomposition) -> LiftedDecomposition:
    """v_j = sqrt(n/(n+1)) (-u_j, 1/sqrt n), d_j = (n+1) c_j / n."""
    n = dec.dim
    U = dec.contacts
    v = math.sqrt(n / (n + 1)) * np.hstack([-U, np.full((len(U), 1), 1.0 / math.sqrt(n))])
    return LiftedDecomposition(v, (n + 1) * dec.weights / n)


def lifted_subspace(F: Subspace) -> np.ndarray:
    """Orthonormal basis (n+1, k+1) of the span of {(x, sqrt n) : x in F}."""
    n, k = F.ambient, F.dim
    Q, p = F.basis, F.offset
    top = np.hstack([Q, p[:, None]])
    bottom = np.concatenate([np.zeros(k), [math.sqrt(n)]])
    B = np.vstack([top, bottom[None, :]])
    B[:, k] /= math.sqrt(p @ p + n)
    return B


@dataclass(frozen=True)
class RestrictedDecomposition:
    """Restriction to F (face data) and to the lifted space H (lifted data)."""

    subspace_dim: int
    # linear part, on F itself
    face_index: np.ndarray      # J0: indices with P_F u_j != 0
    face_vectors: np.ndarray    # v0_j = P_F u_j / |P_F u_j|, intrinsic coordinates
    face_weights: np.ndarray    # delta0_j = c_j |P_F u_j|^2
    face_scales: np.ndarray     # t_j = 1 / |P_F u_j|
    # lifted part, on H
    lifted_vectors: np.ndarray  # w_j = P_H v_j / |P_H v_j|, coordinates in H
    lifted_weights: np.ndarray  # kappa_j = d_j |P_H v_j|^2
    lifted_scales: np.ndarray   # s_j = 1 / |P_H v_j|
    lifted_norms_sq: np.ndarray # |P_H v_j|^2
    d1: float                   # sum d_j |P_H v_j| / sqrt(k+1)

    def face_identity_residual(self) -> float:
        k = self.subspace_dim
        V, d = self.face_vectors, self.face_weights
        return float(np.linalg.norm(np.eye(k) - (V.T * d) @ V))

    def lifted_identity_residual(self) -> float:
        k = self.subspace_dim
        W, d = self.lifted_vectors, self.lifted_weights
        return float(np.linalg.norm(np.eye(k + 1) - (W.T * d) @ W))


def restrict_decomposition(dec: JohnDecomposition, F: Subspace) -> RestrictedDecomposition:
    """Project a John decomposition onto F, and its lift onto the lifted space of F."""
    if F.ambient != dec.dim:
        raise GeometryError("subspace and decomposition dimensions differ")
    k = F.dim
    U, c = dec.contacts, dec.weights
    Pu = U @ F.basis
    nu = np.linalg.norm(Pu, axis=1)
    J0 = np.nonzero(nu > 1e-12)[0]
    lifted = lift_decomposition(dec)
    H = lifted_subspace(F)
    Pv = lifted.vectors @ H
    nv = np.linalg.norm(Pv, axis=1)
    return RestrictedDecomposition(
        subspace_dim=k,
        face_index=J0,
        face_vectors=Pu[J0] / nu[J0, None],
        face_weights=c[J0] * nu[J0] ** 2,
        face_scales=1.0 / nu[J0],
        lifted_vectors=Pv / nv[:, None],
        lifted_weights=lifted.weights * nv**2,
        lifted_scales=1.0 / nv,
        lifted_norms_sq=nv**2,
        d1=float(lifted.weights @ nv) / math.sqrt(k + 1),
    )
