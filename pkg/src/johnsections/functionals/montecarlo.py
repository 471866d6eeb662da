"""Monte Carlo estimators for mean width, Wills functional, Gaussian measure and
the polar Wills integral.

Random numbers come from a counter-based Philox generator keyed by
(seed, stream). Samples are drawn in fixed-size chunks, chunk i using stream
``base + i``, so results are bit-identical for a given seed regardless of how
chunks are scheduled. Gaussian variates use the Box-Muller transform.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..core.bodies import HPolytope, VPolytope
from ..core.enumeration import MAX_DIM, MAX_FACETS
from ..core.lp import lp_support
from ..core.faces import uniform_points, volume
from ..core.ops import gauge, support
from .constants import unit_ball_volume, wills_box
from .distance import distances

CHUNK = 1 << 15
WILLS_MARGIN = 3.0

STREAM_SPHERE = 1 << 20
STREAM_WILLS = 2 << 20
STREAM_GAUSS = 3 << 20
STREAM_POLAR = 4 << 20
STREAM_POLAR_GAUGE = 5 << 20


@dataclass(frozen=True)
class McEstimate:
    value: float
    std_error: float
    samples: int
    seed: int
    bias_bound: float = 0.0

    def as_dict(self) -> dict:
        return {
            "value": self.value,
            "std_error": self.std_error,
            "samples": self.samples,
            "seed": self.seed,
            "bias_bound": self.bias_bound,
        }


def generator(seed: int, stream: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(np.random.SeedSequence([int(seed) & (2**64 - 1), stream])))


def box_muller(rng: np.random.Generator, shape) -> np.ndarray:
    count = int(np.prod(shape))
    half = (count + 1) // 2
    u1 = 1.0 - rng.random(half)  # (0, 1]
    u2 = rng.random(half)
    r = np.sqrt(-2.0 * np.log(u1))
    z = np.concatenate([r * np.cos(2 * np.pi * u2), r * np.sin(2 * np.pi * u2)])
    return z[:count].reshape(shape)


def _chunks(N: int):
    start, i = 0, 0
    while start < N:
        size = min(CHUNK, N - start)
        yield i, size
        start += size
        i += 1


class _Moments:
    """Running sum and sum of squares, accumulated in chunk order."""

    def __init__(self):
        self.n = 0
        self.s = 0.0
        self.ss = 0.0

    def add(self, v: np.ndarray):
        self.n += v.size
        self.s += float(v.sum())
        self.ss += float((v * v).sum())

    def mean_se(self) -> tuple[float, float]:
        mean = self.s / self.n
        var = max(self.ss / self.n - mean * mean, 0.0) * self.n / max(self.n - 1, 1)
        return mean, math.sqrt(var / self.n)


def _check_samples(N: int):
    if N < 2:
        raise ValueError("need at least two samples")


def sphere_points(rng: np.random.Generator, size: int, k: int) -> np.ndarray:
    G = box_muller(rng, (size, k))
    return G / np.linalg.norm(G, axis=1, keepdims=True)


def mean_width_mc(P, N: int, seed: int) -> McEstimate:
    """Average support value over uniformly random unit directions."""
    _check_samples(N)
    k = P.dim
    acc = _Moments()
    for i, size in _chunks(N):
        theta = sphere_points(generator(seed, STREAM_SPHERE + i), size, k)
        acc.add(support(P, theta))
    mean, se = acc.mean_se()
    return McEstimate(mean, se, N, seed)


def _axis_box_sides(P: HPolytope) -> np.ndarray | None:
    k = P.dim
    A = P.normals
    hits = np.abs(np.abs(A) - 1.0) <= 1e-12
    if not np.all(hits.sum(axis=1) == 1):
        return None
    hi = np.full(k, np.inf)
    lo = np.full(k, -np.inf)
    for a, b in zip(A, P.offsets):
        i = int(np.argmax(np.abs(a)))
        if a[i] > 0:
            hi[i] = min(hi[i], b)
        else:
            lo[i] = max(lo[i], -b)
    if not np.all(np.isfinite(hi) & np.isfinite(lo)):
        return None
    return hi - lo


def wills_mc(P: HPolytope, N: int, seed: int, exact_shortcuts: bool = True) -> McEstimate:
    """Wills functional, the integral of exp(-pi d(x, P)^2) over R^k.

    The estimate is |P| (exact) plus |B| times the sample mean of
    exp(-pi d^2) over points uniform in the bounding box B of P inflated by 3.
    Points of P contribute 0 to that mean; ``bias_bound`` = exp(-9 pi)|B|
    bounds the mass dropped outside B and at points with d >= 3.

    With ``exact_shortcuts`` segments and axis-parallel boxes are evaluated by
    the product formula instead. Bodies beyond the enumeration guard get their
    box from LPs and their volume from the same samples (interior points
    count 1).
    """
    _check_samples(N)
    k = P.dim
    if exact_shortcuts:
        sides = _axis_box_sides(P)
        if sides is not None:
            return McEstimate(wills_box(sides), 0.0, 0, seed)
    if exact_volume_allowed(P):
        vol = volume(P)
        X = P.lattice.vertices
        lo, hi = X.min(axis=0), X.max(axis=0)
    else:
        vol = None
        E = np.eye(k)
        hi = np.array([lp_support(P.normals, P.offsets, e) for e in E])
        lo = -np.array([lp_support(P.normals, P.offsets, -e) for e in E])
    lo = lo - WILLS_MARGIN
    hi = hi + WILLS_MARGIN
    box = float(np.prod(hi - lo))
    acc = _Moments()
    for i, size in _chunks(N):
        rng = generator(seed, STREAM_WILLS + i)
        pts = lo + (hi - lo) * rng.random((size, k))
        d = distances(P, pts, cutoff=WILLS_MARGIN)
        g = np.exp(-math.pi * d * d)
        if vol is not None:
            g[d == 0.0] = 0.0  # interior points are accounted for by |P|
        acc.add(g)
    mean, se = acc.mean_se()
    bias = math.exp(-9 * math.pi) * box
    return McEstimate((vol or 0.0) + box * mean, box * se, N, seed, bias)


def exact_volume_allowed(P: HPolytope) -> bool:
    return P.n_facets <= MAX_FACETS and P.dim <= MAX_DIM


def gaussian_measure_mc(P: HPolytope, t: float, N: int, seed: int) -> McEstimate:
    """gamma_k(tP) for P containing the origin in its interior.

    The standard error uses the smoothed proportion (h + 1/2)/(N + 1) so
    that it stays positive when no (or every) sample hits.
    """
    _check_samples(N)
    if t < 0:
        raise ValueError("dilation must be nonnegative")
    k = P.dim
    hits = 0
    for i, size in _chunks(N):
        G = box_muller(generator(seed, STREAM_GAUSS + i), (size, k))
        hits += int(np.count_nonzero(gauge(P, G) <= t))
    p = hits / N
    ps = (hits + 0.5) / (N + 1)
    return McEstimate(p, math.sqrt(ps * (1 - ps) / N), N, seed)


def polar_wills_integral_mc(P: HPolytope, lam: float, N: int, seed: int) -> McEstimate:
    """Integral of exp(-|x|^2 / (4 pi) - ||x||_{lam P}) over R^k.

    Half of the samples come from N(0, 2 pi I), the other half from the
    density exp(-||x||_{lam P}) / (k! lam^k |P|) (a Gamma(k+1) radius times a
    uniform point of P). Each sample is weighted by the integrand over the
    equal mixture of both densities. The Gaussian half alone degrades badly
    once lam P is small; the gauge half keeps the variance bounded there.
    """
    _check_samples(N)
    if lam <= 0:
        raise ValueError("dilation must be positive")
    k = P.dim
    vol = volume(P)
    log_q2_norm = math.lgamma(k + 1) + k * math.log(lam) + math.log(vol)
    log_q1_norm = k * math.log(2 * math.pi)
    n1 = N // 2
    n2 = N - n1
    strata = []
    for half, count, base in ((0, n1, STREAM_POLAR), (1, n2, STREAM_POLAR_GAUGE)):
        acc = _Moments()
        for i, size in _chunks(count):
            rng = generator(seed, base + i)
            if half == 0:
                X = math.sqrt(2 * math.pi) * box_muller(rng, (size, k))
            else:
                R = rng.gamma(k + 1.0, 1.0, size)
                X = lam * R[:, None] * uniform_points(P, size, rng)
            g = gauge(P, X) / lam
            r2 = (X * X).sum(axis=1) / (4 * math.pi)
            # integrand / mixture density, in logs for stability
            log_f = -r2 - g
            log_q1 = -r2 - log_q1_norm
            log_q2 = -g - log_q2_norm
            log_q = np.logaddexp(log_q1, log_q2) - math.log(2.0)
            acc.add(np.exp(log_f - log_q))
        strata.append((count, acc))
    total = sum(c * a.mean_se()[0] for c, a in strata) / N
    var = sum((c * a.mean_se()[1]) ** 2 for c, a in strata) / N**2
    return McEstimate(total, math.sqrt(var), N, seed)


def gauge_body_volume_mc(gauge_fn, k: int, N: int, seed: int) -> McEstimate:
    """|{x : g(x) <= 1}| = |B_2^k| E[g(theta)^{-k}] over uniform unit theta.

    ``gauge_fn`` maps a batch of directions to positive gauge values.
    """
    _check_samples(N)
    acc = _Moments()
    for i, size in _chunks(N):
        theta = sphere_points(generator(seed, STREAM_SPHERE + i), size, k)
        acc.add(np.asarray(gauge_fn(theta), dtype=float) ** (-k))
    mean, se = acc.mean_se()
    c = unit_ball_volume(k)
    return McEstimate(c * mean, c * se, N, seed)
