"""Convex body representations.

All bodies are immutable. Arrays are copied on construction and marked
read-only so that derived data (vertices, face lattices) can be cached on the
instance safely.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from ..errors import DegenerateDim, GeometryError, OriginNotInterior, Unbounded

UNIT_TOL = 1e-12
PAIR_TOL = 1e-12

SYMMETRIC = "symmetric"
ORIGIN_INTERIOR = "origin_interior"
KNOWN_TAGS = frozenset({SYMMETRIC, ORIGIN_INTERIOR})


def _readonly(a, ndim: int) -> np.ndarray:
    arr = np.array(a, dtype=float)
    if ndim == 2:
        arr = np.atleast_2d(arr)
    else:
        arr = arr.reshape(-1)
    arr.setflags(write=False)
    return arr


def antipodal_partner(A: np.ndarray, b: np.ndarray, tol: float = PAIR_TOL) -> np.ndarray | None:
    """Index of the antipodal twin of every row, or None if some row has none."""
    m = len(b)
    partner = np.full(m, -1)
    for j in range(m):
        d = np.abs(A + A[j]).max(axis=1)
        ok = np.nonzero((d <= tol) & (np.abs(b - b[j]) <= tol * max(1.0, abs(b[j]))))[0]
        if ok.size == 0:
            return None
        partner[j] = ok[0]
    return partner


@dataclass(frozen=True, eq=False)
class HPolytope:
    """Bounded polytope {x : <a_j, x> <= b_j} with unit normals a_j."""

    normals: np.ndarray
    offsets: np.ndarray
    tags: frozenset = field(default_factory=frozenset)

    def __post_init__(self):
        A = _readonly(self.normals, 2)
        b = _readonly(self.offsets, 1)
        if A.shape[0] != b.shape[0]:
            raise GeometryError("normals and offsets disagree in length")
        if not (np.all(np.isfinite(A)) and np.all(np.isfinite(b))):
            raise GeometryError("non-finite polytope data")
        err = np.abs(np.linalg.norm(A, axis=1) - 1.0)
        if err.size and err.max() > UNIT_TOL:
            raise GeometryError(f"normals must be unit within {UNIT_TOL}")
        tags = frozenset(self.tags)
        unknown = tags - KNOWN_TAGS
        if unknown:
            raise GeometryError(f"unknown tags {sorted(unknown)}")
        if ORIGIN_INTERIOR in tags and b.size and b.min() <= 0:
            raise OriginNotInterior("tagged origin_interior but some offset is <= 0")
        if SYMMETRIC in tags and antipodal_partner(A, b) is None:
            raise GeometryError("tagged symmetric but facets are not in antipodal pairs")
        object.__setattr__(self, "normals", A)
        object.__setattr__(self, "offsets", b)
        object.__setattr__(self, "tags", tags)

    @classmethod
    def from_inequalities(cls, A, b, tags=None) -> "HPolytope":
        """Normalise rows of Ax <= b; ``tags=None`` detects tags automatically."""
        A = np.atleast_2d(np.asarray(A, dtype=float))
        b = np.asarray(b, dtype=float).reshape(-1)
        norms = np.linalg.norm(A, axis=1)
        if np.any(norms == 0):
            raise GeometryError("zero normal vector")
        A = A / norms[:, None]
        b = b / norms
        if tags is None:
            tags = detect_tags(A, b)
        return cls(A, b, frozenset(tags))

    @property
    def dim(self) -> int:
        return self.normals.shape[1]

    @property
    def n_facets(self) -> int:
        return self.normals.shape[0]

    @property
    def is_symmetric(self) -> bool:
        return SYMMETRIC in self.tags

    def check_bounded(self) -> None:
        from .lp import positively_spanning

        if not positively_spanning(self.normals):
            raise Unbounded("normals do not positively span the ambient space")

    def contains(self, x, tol: float = 1e-9) -> np.ndarray | bool:
        x = np.asarray(x, dtype=float)
        viol = x @ self.normals.T - self.offsets
        inside = viol.max(axis=-1) <= tol
        return bool(inside) if x.ndim == 1 else inside

    def scaled(self, lam: float) -> "HPolytope":
        if lam <= 0:
            raise GeometryError("scale factor must be positive")
        return HPolytope(self.normals, self.offsets * lam, self.tags)

    def translated(self, t) -> "HPolytope":
        b = self.offsets + self.normals @ np.asarray(t, dtype=float)
        tags = set()
        if b.min() > 0:
            tags.add(ORIGIN_INTERIOR)
        if SYMMETRIC in self.tags and np.allclose(t, 0):
            tags.add(SYMMETRIC)
        return HPolytope(self.normals, b, frozenset(tags))

    def linear_image(self, T) -> "HPolytope":
        """Image under an invertible linear map x -> Tx."""
        T = np.asarray(T, dtype=float)
        W = np.linalg.solve(T.T, self.normals.T).T  # rows T^{-T} a_j
        s = np.linalg.norm(W, axis=1)
        return HPolytope(W / s[:, None], self.offsets / s, self.tags)

    @cached_property
    def lattice(self):
        from .faces import FaceLattice

        return FaceLattice.from_hpolytope(self)


@dataclass(frozen=True, eq=False)
class VPolytope:
    """Convex hull of a finite point set (stored as its vertices)."""

    vertices: np.ndarray

    def __post_init__(self):
        V = _readonly(self.vertices, 2)
        if V.shape[0] == 0:
            raise GeometryError("empty vertex set")
        object.__setattr__(self, "vertices", V)

    @classmethod
    def hull(cls, points) -> "VPolytope":
        """Hull of ``points`` reduced to its extreme points (lexicographic order)."""
        P = np.atleast_2d(np.asarray(points, dtype=float))
        if P.shape[1] == 1:
            lo, hi = P.min(), P.max()
            if hi - lo <= 1e-12 * max(1.0, abs(hi)):
                raise DegenerateDim("points span a single point")
            return cls(np.array([[lo], [hi]]))
        from .enumeration import hull_vertices

        return cls(hull_vertices(P))

    @property
    def dim(self) -> int:
        return self.vertices.shape[1]

    @property
    def n_vertices(self) -> int:
        return self.vertices.shape[0]

    def scaled(self, lam: float) -> "VPolytope":
        return VPolytope(self.vertices * lam)

    def linear_image(self, T) -> "VPolytope":
        return VPolytope(self.vertices @ np.asarray(T, dtype=float).T)

    @cached_property
    def lattice(self):
        from .faces import FaceLattice

        return FaceLattice.from_vpolytope(self)


@dataclass(frozen=True, eq=False)
class Subspace:
    """Affine subspace {p + Qy : y in R^k} with orthonormal Q and p orthogonal to Q."""

    basis: np.ndarray
    offset: np.ndarray

    def __post_init__(self):
        Q = _readonly(self.basis, 2)
        p = _readonly(self.offset, 1)
        n, k = Q.shape
        if p.shape[0] != n:
            raise GeometryError("offset has wrong ambient dimension")
        if not 0 <= k <= n:
            raise GeometryError("subspace dimension out of range")
        if k and np.abs(Q.T @ Q - np.eye(k)).max() > 1e-10:
            raise GeometryError("basis is not orthonormal")
        if k and np.abs(Q.T @ p).max() > 1e-10 * max(1.0, np.linalg.norm(p)):
            raise GeometryError("offset is not orthogonal to the basis")
        object.__setattr__(self, "basis", Q)
        object.__setattr__(self, "offset", p)

    @classmethod
    def from_span(cls, vectors, offset=None) -> "Subspace":
        """Orthonormalise the columns of ``vectors``; project ``offset`` off them."""
        M = np.atleast_2d(np.asarray(vectors, dtype=float))
        Q, R = np.linalg.qr(M)
        if np.abs(np.diag(R)).min() <= 1e-12:
            raise DegenerateDim("spanning vectors are dependent")
        n = M.shape[0]
        p = np.zeros(n) if offset is None else np.asarray(offset, dtype=float)
        p = p - Q @ (Q.T @ p)
        return cls(Q, p)

    @classmethod
    def full(cls, n: int) -> "Subspace":
        return cls(np.eye(n), np.zeros(n))

    @property
    def ambient(self) -> int:
        return self.basis.shape[0]

    @property
    def dim(self) -> int:
        return self.basis.shape[1]

    @property
    def distance(self) -> float:
        return float(np.linalg.norm(self.offset))

    @property
    def is_linear(self) -> bool:
        return bool(np.all(self.offset == 0))

    @property
    def is_full(self) -> bool:
        return self.dim == self.ambient and self.is_linear

    def to_ambient(self, y) -> np.ndarray:
        return self.offset + np.asarray(y, dtype=float) @ self.basis.T

    def to_intrinsic(self, x) -> np.ndarray:
        return (np.asarray(x, dtype=float) - self.offset) @ self.basis

    def projector(self) -> np.ndarray:
        return self.basis @ self.basis.T


@dataclass(frozen=True, eq=False)
class Zonotope:
    """Minkowski sum of segments [-g_i, g_i]; support h(x) = sum |<x, g_i>|."""

    generators: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "generators", _readonly(self.generators, 2))

    @property
    def dim(self) -> int:
        return self.generators.shape[1]

    def support(self, x) -> np.ndarray | float:
        x = np.asarray(x, dtype=float)
        h = np.abs(x @ self.generators.T).sum(axis=-1)
        return float(h) if x.ndim == 1 else h

    def project(self, F: Subspace) -> "Zonotope":
        """Orthogonal projection onto a linear subspace, in intrinsic coordinates."""
        return Zonotope(self.generators @ F.basis)


@dataclass(frozen=True, eq=False)
class Ellipsoid:
    """{x : (x - c)^T M^{-1} (x - c) <= 1} for symmetric positive definite M."""

    center: np.ndarray
    shape: np.ndarray

    def __post_init__(self):
        c = _readonly(self.center, 1)
        M = _readonly(self.shape, 2)
        if M.shape != (c.size, c.size):
            raise GeometryError("shape matrix has the wrong size")
        object.__setattr__(self, "center", c)
        object.__setattr__(self, "shape", M)

    @classmethod
    def from_factor(cls, center, L) -> "Ellipsoid":
        """Ellipsoid c + L(B), so M = L L^T."""
        L = np.asarray(L, dtype=float)
        return cls(center, L @ L.T)

    @property
    def dim(self) -> int:
        return self.center.size

    @property
    def volume(self) -> float:
        from ..functionals.constants import unit_ball_volume

        sign, logdet = np.linalg.slogdet(self.shape)
        if sign <= 0:
            raise GeometryError("shape matrix is not positive definite")
        return unit_ball_volume(self.dim) * math.exp(0.5 * logdet)

    def support(self, x) -> np.ndarray | float:
        x = np.asarray(x, dtype=float)
        q = np.einsum("...i,ij,...j->...", x, self.shape, x)
        h = x @ self.center + np.sqrt(np.maximum(q, 0.0))
        return float(h) if x.ndim == 1 else h

    def polar(self) -> "Ellipsoid":
        """Polar body of an origin-centred ellipsoid."""
        if np.linalg.norm(self.center) > 1e-12:
            raise GeometryError("polar of an off-centre ellipsoid is not an ellipsoid")
        return Ellipsoid(np.zeros(self.dim), np.linalg.inv(self.shape))


def detect_tags(A: np.ndarray, b: np.ndarray) -> frozenset:
    tags = set()
    if b.size and b.min() > 0:
        tags.add(ORIGIN_INTERIOR)
    if antipodal_partner(A, b) is not None:
        tags.add(SYMMETRIC)
    return frozenset(tags)
