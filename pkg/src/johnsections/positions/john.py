"""Affine normalisation to John and Löwner position, and contact points."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..core.bodies import ORIGIN_INTERIOR, SYMMETRIC, HPolytope, VPolytope
from ..core.ops import polar
from ..errors import NotInJohnPosition
from .ellipsoids import solve_enclosing, solve_inscribed


@dataclass(frozen=True)
class AffineMap:
    """x -> matrix @ x + shift."""

    matrix: np.ndarray
    shift: np.ndarray

    def __call__(self, x):
        return np.asarray(x, dtype=float) @ self.matrix.T + self.shift

    @property
    def det(self) -> float:
        return float(np.linalg.det(self.matrix))

    def inverse(self) -> "AffineMap":
        Mi = np.linalg.inv(self.matrix)
        return AffineMap(Mi, -Mi @ self.shift)


def apply_affine(P: HPolytope, T: AffineMap) -> HPolytope:
    """Image of P under x -> Mx + s."""
    W = np.linalg.solve(T.matrix.T, P.normals.T).T  # rows M^{-T} a_j
    scale = np.linalg.norm(W, axis=1)
    b = (P.offsets + W @ T.shift) / scale
    A = W / scale[:, None]
    tags = set()
    if b.min() > 0:
        tags.add(ORIGIN_INTERIOR)
    if SYMMETRIC in P.tags and not np.any(T.shift):
        tags.add(SYMMETRIC)
    return HPolytope(A, b, frozenset(tags))


def to_john_position(P: HPolytope) -> tuple[HPolytope, AffineMap]:
    """Affine image of P whose maximal inscribed ellipsoid is the unit ball.

    Symmetric bodies keep their centre at the origin, so the facet pairs
    stay exactly antipodal.
    """
    res = solve_inscribed(P, centered=P.is_symmetric)
    L = res.factor
    c = res.ellipsoid.center
    Li = np.linalg.inv(L)
    shift = np.zeros(P.dim) if P.is_symmetric else -Li @ c
    T = AffineMap(Li, shift)
    return apply_affine(P, T), T


def to_lowner_position(P: VPolytope) -> tuple[VPolytope, AffineMap]:
    """Affine image of P whose minimal enclosing ellipsoid is the unit ball."""
    E = solve_enclosing(P.vertices).ellipsoid
    w, V = np.linalg.eigh(E.shape)
    Mi = (V / np.sqrt(w)) @ V.T  # M^{-1/2}
    T = AffineMap(Mi, -Mi @ E.center)
    return VPolytope(T(P.vertices)), T


def lowner_from_john(K: HPolytope) -> VPolytope:
    """Polar of a body in John position is in Löwner position."""
    return polar(K)


def contact_points(P: HPolytope, tol: float | None = None) -> np.ndarray:
    """Unit normals of facets touching the unit ball (offset within tol of 1).

    Raises
    ------
    NotInJohnPosition
        If some facet cuts into the ball or no facet touches it.
    """
    b = P.offsets
    if tol is None:
        tol = 1e-5 * float(b.max())
    if b.min() < 1.0 - tol:
        raise NotInJohnPosition(f"a facet cuts the unit ball (offset {b.min():.6g})")
    touch = np.abs(b - 1.0) <= tol
    if not touch.any():
        raise NotInJohnPosition("no facet touches the unit ball")
    return P.normals[touch].copy()
