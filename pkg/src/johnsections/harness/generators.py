"""Random and named test bodies, random subspaces, and sharp-case subspaces."""

from __future__ import annotations

import math

import numpy as np

from ..core.bodies import ORIGIN_INTERIOR, SYMMETRIC, HPolytope, Subspace
from ..core.lp import positively_spanning
from ..errors import GenerationFailed
from ..functionals.montecarlo import box_muller, generator

BODY_CLASSES = ("symmetric", "general", "cube", "simplex", "cross")
NAMED = ("cube", "simplex", "cross")
MAX_ATTEMPTS = 100

STREAM_BODY = 11
STREAM_SUBSPACE = 12


def _unit_rows(G: np.ndarray) -> np.ndarray:
    return G / np.linalg.norm(G, axis=1, keepdims=True)


def cube(n: int) -> HPolytope:
    A = np.vstack([np.eye(n), -np.eye(n)])
    return HPolytope(A, np.ones(2 * n), frozenset({SYMMETRIC, ORIGIN_INTERIOR}))


def simplex_vertices(n: int) -> np.ndarray:
    """Vertices of the regular simplex with inradius 1 centred at the origin."""
    # orthonormal basis of the hyperplane sum x = 0 in R^{n+1} (Helmert rows)
    H = np.zeros((n, n + 1))
    for i in range(1, n + 1):
        H[i - 1, :i] = 1.0
        H[i - 1, i] = -float(i)
        H[i - 1] /= math.sqrt(i * (i + 1))
    E = np.eye(n + 1) - 1.0 / (n + 1)
    return math.sqrt(n * (n + 1)) * E @ H.T


def simplex(n: int) -> HPolytope:
    """Regular simplex S_n with inradius 1; facet j is opposite vertex j."""
    V = simplex_vertices(n)
    A = -V / np.linalg.norm(V, axis=1, keepdims=True)
    return HPolytope(A, np.ones(n + 1), frozenset({ORIGIN_INTERIOR}))


def cross(n: int) -> HPolytope:
    """The unit l1 ball B_1^n."""
    signs = np.array(np.meshgrid(*[[1.0, -1.0]] * n, indexing="ij")).reshape(n, -1).T
    A = signs / math.sqrt(n)
    return HPolytope(A, np.full(len(A), 1.0 / math.sqrt(n)), frozenset({SYMMETRIC, ORIGIN_INTERIOR}))


def named_body(name: str, n: int) -> HPolytope:
    return {"cube": cube, "simplex": simplex, "cross": cross}[name](n)


def named_john(name: str, n: int) -> HPolytope:
    """Named bodies in their exact John position (B_1^n needs the factor sqrt n)."""
    K = named_body(name, n)
    return K.scaled(math.sqrt(n)) if name == "cross" else K


def gen_body(body_class: str, n: int, m: int | None = None, seed: int = 0) -> HPolytope:
    """Random or named polytope.

    ``symmetric``: m/2 random unit normals and their negatives, offsets 1.
    ``general``: m random unit normals, offsets 1, then translated by a
    random vector of length below 1/2 so the origin stays interior.
    Named classes ignore ``m`` and ``seed``.

    Raises
    ------
    GenerationFailed
        If 100 draws in a row fail to give a bounded body.
    """
    if body_class in NAMED:
        return named_body(body_class, n)
    if body_class not in ("symmetric", "general"):
        raise ValueError(f"unknown body class {body_class!r}")
    if m is None or not 2 * n <= m <= 4 * n:
        raise ValueError(f"need 2n <= m <= 4n, got m={m} for n={n}")
    if body_class == "symmetric" and m % 2:
        raise ValueError("symmetric bodies need an even number of facets")
    rng = generator(seed, STREAM_BODY)
    for _ in range(MAX_ATTEMPTS):
        if body_class == "symmetric":
            half = _unit_rows(box_muller(rng, (m // 2, n)))
            if np.linalg.matrix_rank(half) < n:
                continue
            A = np.vstack([half, -half])
            return HPolytope(A, np.ones(m), frozenset({SYMMETRIC, ORIGIN_INTERIOR}))
        A = _unit_rows(box_muller(rng, (m, n)))
        if not positively_spanning(A):
            continue
        direction = box_muller(rng, (n,))
        shift = 0.5 * rng.random() * direction / np.linalg.norm(direction)
        return HPolytope(A, 1.0 - A @ shift, frozenset({ORIGIN_INTERIOR}))
    raise GenerationFailed(f"no bounded {body_class} body after {MAX_ATTEMPTS} attempts")


def sample_subspace(n: int, k: int, d: float = 0.0, seed: int = 0) -> Subspace:
    """Haar-random k-dimensional subspace, shifted to distance ``d`` from the origin."""
    if not 1 <= k <= n:
        raise ValueError(f"need 1 <= k <= n, got k={k}, n={n}")
    if d < 0:
        raise ValueError("distance must be nonnegative")
    if k == n:
        return Subspace.full(n)
    rng = generator(seed, STREAM_SUBSPACE)
    Q, R = np.linalg.qr(box_muller(rng, (n, k)))
    Q = Q * np.sign(np.diag(R))
    p = np.zeros(n)
    if d > 0:
        g = box_muller(rng, (n,))
        g -= Q @ (Q.T @ g)
        p = d * g / np.linalg.norm(g)
    return Subspace(Q, p)


def diagonal_subspace(n: int, k: int) -> Subspace:
    """Span of the normalised indicator vectors of k consecutive blocks of size n/k."""
    if n % k:
        raise ValueError("k must divide n")
    b = n // k
    Q = np.zeros((n, k))
    for i in range(k):
        Q[i * b:(i + 1) * b, i] = 1.0 / math.sqrt(b)
    return Subspace(Q, np.zeros(n))


def simplex_face_subspace(n: int, face) -> Subspace:
    """Affine hull of the face of S_n spanned by the listed vertices."""
    V = simplex_vertices(n)[list(face)]
    if len(V) == 1:
        raise ValueError("a face needs at least two vertices")
    Q, R = np.linalg.qr((V[1:] - V[0]).T)
    centroid = V.mean(axis=0)
    p = centroid - Q @ (Q.T @ centroid)
    return Subspace(Q, p)
