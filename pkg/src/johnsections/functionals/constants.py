"""Closed-form constants: ball volumes, simplex data, reference mean widths."""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy import integrate, special

from ..errors import IndexOutOfRange


def unit_ball_volume(n: int) -> float:
    """|B_2^n| = pi^{n/2} / Gamma(n/2 + 1); equals 1 for n = 0."""
    if n < 0:
        raise IndexOutOfRange("dimension must be nonnegative")
    return math.exp(0.5 * n * math.log(math.pi) - math.lgamma(0.5 * n + 1.0))


def gaussian_width_constant(n: int) -> float:
    """c_n = E|G| for a standard Gaussian in R^n, so E h_K(G) = c_n w(K)."""
    if n < 1:
        raise IndexOutOfRange("dimension must be positive")
    return math.sqrt(2.0) * math.exp(math.lgamma(0.5 * (n + 1)) - math.lgamma(0.5 * n))


@dataclass(frozen=True)
class SimplexConstants:
    k: int
    volume: float          # |Delta_k|, the standard simplex in R^{k+1}
    inradius: float
    circumradius: float
    john_root: float       # |S_k|^{1/k}, inradius-one regular simplex
    lowner_root: float     # |S~_k|^{1/k}, circumradius-one regular simplex
    john_scale: float      # S_k = john_scale * Delta_k
    lowner_scale: float    # S~_k = lowner_scale * Delta_k


def simplex_constants(k: int) -> SimplexConstants:
    if k < 1:
        raise IndexOutOfRange("simplex dimension must be positive")
    fk = math.factorial(k)
    vol = math.sqrt(k + 1) / fk
    return SimplexConstants(
        k=k,
        volume=vol,
        inradius=1.0 / math.sqrt(k * (k + 1)),
        circumradius=math.sqrt(k / (k + 1)),
        john_root=math.sqrt(k * (k + 1) ** (1.0 + 1.0 / k)) / fk ** (1.0 / k),
        lowner_root=fk ** (-1.0 / k) * math.sqrt((k + 1) ** (1.0 + 1.0 / k) / k),
        john_scale=math.sqrt(k * (k + 1)),
        lowner_scale=math.sqrt((k + 1) / k),
    )


def quermass_conversion(n: int, k: int, i: int) -> float:
    """Factor turning the quermassintegral W_{k-i} of a k-dimensional body, taken
    in R^k, into W_{n-i} of the same body placed in R^n."""
    if not (0 <= i <= k <= n):
        raise IndexOutOfRange(f"need 0 <= i <= k <= n, got n={n}, k={k}, i={i}")
    return (
        math.comb(n, n - k + i) / math.comb(k, i)
        * unit_ball_volume(i) / unit_ball_volume(n - k + i)
    )


def intrinsic_from_quermass(n: int, i: int) -> float:
    """Coefficient a with V_i = a * W_{n-i} in R^n."""
    if not 0 <= i <= n:
        raise IndexOutOfRange(f"need 0 <= i <= n, got n={n}, i={i}")
    return math.comb(n, i) / unit_ball_volume(n - i)


def _quad(f, a, b):
    val, _ = integrate.quad(f, a, b, epsabs=1e-14, epsrel=1e-13, limit=400)
    return val


@lru_cache(maxsize=None)
def expected_max_gaussian(m: int) -> float:
    """E max(g_1, ..., g_m) for iid standard normals."""
    if m < 1:
        raise IndexOutOfRange("need at least one variable")
    if m == 1:
        return 0.0
    phi = lambda x: math.exp(-0.5 * x * x) / math.sqrt(2 * math.pi)
    Phi = lambda x: 0.5 * special.erfc(-x / math.sqrt(2))
    return _quad(lambda x: x * m * phi(x) * Phi(x) ** (m - 1), -40, 40)


@lru_cache(maxsize=None)
def expected_max_abs_gaussian(k: int) -> float:
    """E max |g_i| over k iid standard normals."""
    return _quad(lambda t: 1.0 - special.erf(t / math.sqrt(2)) ** k, 0, 60)


def mean_width_cube(k: int) -> float:
    """w([-1, 1]^k)."""
    return k * math.sqrt(2 / math.pi) / gaussian_width_constant(k)


def mean_width_cross(k: int) -> float:
    """w(B_1^k)."""
    return expected_max_abs_gaussian(k) / gaussian_width_constant(k)


def mean_width_standard_simplex(k: int) -> float:
    """w(Delta_k) for the simplex spanned by the unit vectors of R^{k+1}."""
    return expected_max_gaussian(k + 1) / gaussian_width_constant(k)


def mean_width_john_simplex(k: int) -> float:
    """w(S_k), regular simplex with inradius one."""
    return simplex_constants(k).john_scale * mean_width_standard_simplex(k)


def mean_width_lowner_simplex(k: int) -> float:
    """w(S~_k), regular simplex with circumradius one."""
    return simplex_constants(k).lowner_scale * mean_width_standard_simplex(k)


def cross_root(k: int) -> float:
    """|B_1^k|^{1/k} = 2 / (k!)^{1/k}."""
    return 2.0 / math.factorial(k) ** (1.0 / k)


def wills_box(sides) -> float:
    """Wills functional of an axis-parallel box: product of (1 + side)."""
    return float(np.prod(1.0 + np.asarray(sides, dtype=float)))


def gaussian_measure_cube(s: float, k: int) -> float:
    """gamma_k(s [-1, 1]^k) = erf(s / sqrt 2)^k."""
    return float(special.erf(s / math.sqrt(2)) ** k)


def polar_integral_cube(lam: float, k: int) -> float:
    """int exp(-|x|^2/(4 pi) - ||x||_{lam C}) dx for C = [-1, 1]^k.

    Uses the layer-cake identity (2 pi)^k int_0^inf e^{-t} gamma_k(t lam C / sqrt(2 pi)) dt.
    """
    c = lam / math.sqrt(2 * math.pi)
    f = lambda t: math.exp(-t) * gaussian_measure_cube(t * c, k)
    # the integrand switches on over a window of width ~1/c near zero
    cuts = sorted({0.0, 80.0} | {min(80.0, s / c) for s in (0.5, 2.0, 8.0, 32.0)})
    return (2 * math.pi) ** k * sum(_quad(f, a, b) for a, b in zip(cuts, cuts[1:]))
