"""Sections, projections, polarity, support and gauge functions, zonotopes."""

from __future__ import annotations

import math
from itertools import combinations

import numpy as np

from ..errors import EmptySection, GeometryError, OriginNotInterior, TooManyGenerators
from .bodies import (
    ORIGIN_INTERIOR,
    SYMMETRIC,
    Ellipsoid,
    HPolytope,
    Subspace,
    VPolytope,
    Zonotope,
    antipodal_partner,
)
from .enumeration import facet_enumerate
from .faces import surface_measure
from .lp import chebyshev_ball, lp_support

MAX_GENERATORS = 24
PARALLEL_TOL = 1e-12
INTERIOR_TOL = 1e-9


def section(P: HPolytope, F: Subspace) -> HPolytope:
    """K ∩ F in the intrinsic coordinates y of F, where x = p + Qy.

    Constraints whose normal is orthogonal to F are dropped after checking
    that they are satisfied by the whole of F.
    """
    if F.ambient != P.dim:
        raise GeometryError("subspace and polytope live in different dimensions")
    if F.is_full and np.all(F.basis == np.eye(P.dim)):
        return P
    Qa = P.normals @ F.basis
    rhs = P.offsets - P.normals @ F.offset
    s = np.linalg.norm(Qa, axis=1)
    keep = s > PARALLEL_TOL
    if np.any(rhs[~keep] < -INTERIOR_TOL):
        raise EmptySection("subspace lies outside a facet it is parallel to")
    A = Qa[keep] / s[keep, None]
    b = rhs[keep] / s[keep]
    _, r = chebyshev_ball(A, b)
    if not r > INTERIOR_TOL:
        raise EmptySection(f"section has empty relative interior (inradius {r:.3g})")
    tags = set()
    if b.min() > 0:
        tags.add(ORIGIN_INTERIOR)
    if SYMMETRIC in P.tags and F.is_linear and antipodal_partner(A, b) is not None:
        tags.add(SYMMETRIC)
    return HPolytope(A, b, frozenset(tags))


def project(V: VPolytope, F: Subspace) -> VPolytope:
    """Orthogonal projection onto a linear subspace, in intrinsic coordinates."""
    if not F.is_linear:
        raise GeometryError("projection needs a linear subspace")
    return VPolytope.hull(V.vertices @ F.basis)


def polar(P):
    """Polar body: H-polytopes map to V-polytopes and back.

    Raises
    ------
    OriginNotInterior
        If the origin is not strictly inside the input.
    """
    if isinstance(P, HPolytope):
        if P.offsets.min() <= INTERIOR_TOL:
            raise OriginNotInterior("origin is not interior to the H-polytope")
        return VPolytope.hull(P.normals / P.offsets[:, None])
    if isinstance(P, VPolytope):
        H = facet_enumerate(P)
        if H.offsets.min() <= INTERIOR_TOL:
            raise OriginNotInterior("origin is not interior to the V-polytope")
        X = P.vertices
        r = np.linalg.norm(X, axis=1)
        A = X / r[:, None]
        b = 1.0 / r
        tags = {ORIGIN_INTERIOR}
        if antipodal_partner(A, b) is not None:
            tags.add(SYMMETRIC)
        return HPolytope(A, b, frozenset(tags))
    raise TypeError(f"polar is not defined for {type(P).__name__}")


def support(P, x):
    """Support function h_P(x); ``x`` may be a single vector or a batch of rows."""
    x = np.asarray(x, dtype=float)
    if isinstance(P, (Zonotope, Ellipsoid)):
        return P.support(x)
    if isinstance(P, VPolytope):
        h = (x @ P.vertices.T).max(axis=-1)
        return float(h) if x.ndim == 1 else h
    if isinstance(P, HPolytope):
        if x.ndim == 1:
            return lp_support(P.normals, P.offsets, x)
        return (x @ P.lattice.vertices.T).max(axis=-1)
    raise TypeError(f"support is not defined for {type(P).__name__}")


def gauge(P: HPolytope, x):
    """Minkowski functional ||x||_P = max_j <a_j, x> / b_j (zero allowed)."""
    if P.offsets.min() <= INTERIOR_TOL:
        raise OriginNotInterior("gauge needs the origin in the interior")
    x = np.asarray(x, dtype=float)
    g = np.maximum((x @ P.normals.T / P.offsets).max(axis=-1), 0.0)
    return float(g) if x.ndim == 1 else g


def projection_body(P: HPolytope) -> Zonotope:
    """Zonotope with support h(x) = 1/2 sum_j |F_j| |<x, u_j>|.

    For symmetric input each antipodal pair is merged into one generator
    |F_j| u_j, otherwise every facet contributes 1/2 |F_j| u_j.
    """
    sm = surface_measure(P)
    u, a = sm.normals, sm.areas
    if SYMMETRIC in P.tags:
        partner = antipodal_partner(u, np.zeros(len(a)), tol=1e-9)
        if partner is not None:
            first = np.array([j for j in range(len(a)) if j < partner[j]])
            return Zonotope(a[first, None] * u[first])
    return Zonotope(0.5 * a[:, None] * u)


def zonotope_volume(Z: Zonotope) -> float:
    """Exact volume 2^n sum_S |det g_S| over n-subsets of generators."""
    G = Z.generators
    g, n = G.shape
    if g > MAX_GENERATORS:
        raise TooManyGenerators(f"{g} generators exceeds {MAX_GENERATORS}")
    if g < n:
        return 0.0
    S = np.array(list(combinations(range(g), n)), dtype=np.int64)
    total = 0.0
    for start in range(0, len(S), 200_000):
        total += float(np.abs(np.linalg.det(G[S[start:start + 200_000]])).sum())
    return 2.0 ** n * total
