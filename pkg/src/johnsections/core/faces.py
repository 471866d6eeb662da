"""Combinatorial face lattice, pulling triangulation, volume and surface measure.

Faces are vertex sets stored as Python int bitmasks. The facets of a face G
are the inclusion-maximal proper nonempty sets G & F_i over the polytope
facets F_i. A face is triangulated by coning from its lowest-index vertex
over the triangulations of the subfaces that miss that vertex.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from ..errors import GeometryError
from .enumeration import affine_rank, facet_enumerate, vertices_and_incidence

CLOSURE_TOL = 1e-8


def _mask(bits: np.ndarray) -> int:
    out = 0
    for i in np.nonzero(bits)[0]:
        out |= 1 << int(i)
    return out


def _lowest(mask: int) -> int:
    return (mask & -mask).bit_length() - 1


def _members(mask: int) -> list[int]:
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return out


@dataclass
class FaceLattice:
    """Vertices, irredundant facets and their incidences."""

    vertices: np.ndarray
    normals: np.ndarray
    offsets: np.ndarray
    facet_masks: list
    _tri: dict = field(default_factory=dict, repr=False)
    _sub: dict = field(default_factory=dict, repr=False)

    @classmethod
    def from_hpolytope(cls, P) -> "FaceLattice":
        X, inc = vertices_and_incidence(P)
        n = P.dim
        if affine_rank(X) < n:
            raise GeometryError("polytope is not full-dimensional")
        keep, masks, seen = [], [], set()
        for j in range(P.n_facets):
            idx = np.nonzero(inc[:, j])[0]
            if len(idx) < n:
                continue
            mk = _mask(inc[:, j])
            if mk in seen or affine_rank(X[idx]) != n - 1:
                continue
            seen.add(mk)
            keep.append(j)
            masks.append(mk)
        return cls(X, P.normals[keep], P.offsets[keep], masks)

    @classmethod
    def from_vpolytope(cls, V) -> "FaceLattice":
        H = facet_enumerate(V)
        X = V.vertices
        scale = max(1.0, float(np.abs(X).max()))
        inc = np.abs(X @ H.normals.T - H.offsets) <= 1e-8 * scale
        masks = [_mask(inc[:, j]) for j in range(H.n_facets)]
        return cls(X, H.normals, H.offsets, masks)

    @property
    def dim(self) -> int:
        return self.vertices.shape[1]

    @property
    def full_mask(self) -> int:
        return (1 << len(self.vertices)) - 1

    def subfaces(self, mask: int) -> list[int]:
        """Facets of the face ``mask`` (maximal proper intersections with facets)."""
        hit = self._sub.get(mask)
        if hit is not None:
            return hit
        if mask == self.full_mask:
            out = list(self.facet_masks)
        else:
            cand = {mask & f for f in self.facet_masks}
            cand.discard(0)
            cand.discard(mask)
            cand = sorted(cand, key=lambda c: -c.bit_count())
            out = []
            for c in cand:
                if not any((c | o) == o for o in out):
                    out.append(c)
        self._sub[mask] = out
        return out

    def triangulate_face(self, mask: int, d: int) -> list[tuple]:
        """Pulling triangulation of a d-face as tuples of d+1 vertex indices."""
        hit = self._tri.get(mask)
        if hit is not None:
            return hit
        anchor = _lowest(mask)
        if d == 0:
            out = [(anchor,)]
        elif d == 1:
            ends = _members(mask)
            out = [(anchor, ends[-1])] if len(ends) == 2 else [(anchor, max(ends))]
        else:
            out = []
            for s in self.subfaces(mask):
                if (s >> anchor) & 1:
                    continue
                for simp in self.triangulate_face(s, d - 1):
                    out.append((anchor,) + simp)
        self._tri[mask] = out
        return out

    def simplices(self) -> np.ndarray:
        """Triangulation of the whole polytope, shape (S, n+1)."""
        return np.array(self.triangulate_face(self.full_mask, self.dim), dtype=np.int64)

    def facet_simplices(self, j: int) -> np.ndarray:
        n = self.dim
        return np.array(self.triangulate_face(self.facet_masks[j], n - 1), dtype=np.int64).reshape(-1, n)


def simplex_volumes(X: np.ndarray, S: np.ndarray) -> np.ndarray:
    """d-volumes of simplices given by rows of vertex indices ``S`` into ``X``."""
    if S.size == 0:
        return np.zeros(0)
    d = S.shape[1] - 1
    if d == 0:
        return np.ones(len(S))
    E = X[S[:, 1:]] - X[S[:, :1]]
    if d == X.shape[1]:
        return np.abs(np.linalg.det(E)) / math.factorial(d)
    G = E @ E.transpose(0, 2, 1)
    return np.sqrt(np.maximum(np.linalg.det(G), 0.0)) / math.factorial(d)


def volume(P) -> float:
    """Exact n-volume (up to floating point) by triangulation.

    Accepts an HPolytope or VPolytope. In dimension one the volume is the
    length of the segment.
    """
    L = P.lattice
    X = L.vertices
    if L.dim == 1:
        return float(X.max() - X.min())
    return float(simplex_volumes(X, L.simplices()).sum())


@dataclass(frozen=True)
class SurfaceMeasure:
    normals: np.ndarray
    areas: np.ndarray

    @property
    def total(self) -> float:
        return float(self.areas.sum())


def surface_measure(P) -> SurfaceMeasure:
    """Facet normals with their (n-1)-volumes; sum of area*normal must vanish."""
    L = P.lattice
    X = L.vertices
    if L.dim == 1:
        areas = np.ones(len(L.offsets))
    else:
        areas = np.array([simplex_volumes(X, L.facet_simplices(j)).sum() for j in range(len(L.offsets))])
    closure = np.abs(areas @ L.normals).max()
    if closure > CLOSURE_TOL * max(1.0, areas.sum()):
        raise GeometryError(f"surface measure fails to close ({closure:.2e})")
    return SurfaceMeasure(L.normals.copy(), areas)


def uniform_points(P, count: int, rng: np.random.Generator) -> np.ndarray:
    """Uniform samples from P via volume-weighted simplices and Dirichlet weights."""
    L = P.lattice
    X = L.vertices
    n = L.dim
    if n == 1:
        lo, hi = X.min(), X.max()
        return lo + (hi - lo) * rng.random((count, 1))
    S = L.simplices()
    w = simplex_volumes(X, S)
    cdf = np.cumsum(w)
    pick = np.searchsorted(cdf, rng.random(count) * cdf[-1], side="right")
    pick = np.minimum(pick, len(S) - 1)
    e = -np.log1p(-rng.random((count, n + 1)))
    lam = e / e.sum(axis=1, keepdims=True)
    return np.einsum("ij,ijk->ik", lam, X[S[pick]])
