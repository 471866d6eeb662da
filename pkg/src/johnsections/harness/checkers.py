"""Inequality checkers, one per theorem id.

Every checker receives a Trial (dimensions, seeds, subspace distance) and
returns Records oriented as lhs <= rhs. For lower bounds the bound itself is
the lhs. Bodies are generated from the trial's body seed alone, so checkers
that share a body class and position reuse the same positioned body.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable

import numpy as np
from scipy import special

from ..core.bodies import HPolytope
from ..core.enumeration import facet_enumerate
from ..core.faces import surface_measure, volume
from ..core.ops import polar, project, projection_body, section, zonotope_volume
from ..functionals.constants import (
    cross_root,
    mean_width_cross,
    mean_width_cube,
    mean_width_john_simplex,
    mean_width_lowner_simplex,
    polar_integral_cube,
    simplex_constants,
)
from ..functionals.montecarlo import (
    exact_volume_allowed,
    gauge_body_volume_mc,
    gaussian_measure_mc,
    generator,
    mean_width_mc,
    polar_wills_integral_mc,
    wills_mc,
)
from ..positions.decomposition import fit_john_decomposition, restrict_decomposition
from ..positions.john import contact_points, lowner_from_john, to_john_position
from ..positions.minsurf import min_surface_area_position
from .generators import NAMED, diagonal_subspace, gen_body, named_john, sample_subspace, simplex, simplex_face_subspace
from .records import EXACT_TOL, ExperimentConfig, Record, verdict_for

DEFAULT_LAMBDAS = (0.5, 1.0, 2.0)
DEFAULT_T_GRID = (0.25, 0.5, 1.0, 1.5)
SHARP_TOL = 1e-8


@dataclass
class Trial:
    config: ExperimentConfig
    theorem: str
    index: int
    n: int
    k: int
    m: int
    d: float
    body_class: str
    body_seed: int
    sub_seed: int
    mc_seed: int
    pick_seed: int
    records: list = field(default_factory=list)

    @property
    def samples(self) -> int:
        return self.config.mc_samples

    def add(self, lhs, lhs_err, rhs, rhs_err, lam=None, d=None, note="", sharp=False, seed=None):
        lhs, rhs = float(lhs), float(rhs)
        if sharp:
            ok = abs(lhs - rhs) <= SHARP_TOL * max(1.0, abs(rhs))
            verdict = "pass" if ok else "fail"
            equality = ok
        else:
            verdict = verdict_for(lhs, lhs_err, rhs, rhs_err)
            equality = lhs_err == 0 and rhs_err == 0 and abs(rhs - lhs) <= EXACT_TOL * max(1.0, abs(rhs))
        self.records.append(Record(
            theorem=self.theorem, n=self.n, k=self.k, trial=self.index,
            seed=self.mc_seed if seed is None else seed, verdict=verdict,
            lhs=lhs, lhs_err=float(lhs_err), rhs=rhs, rhs_err=float(rhs_err),
            d=d, lam=lam, equality=equality, note=note,
        ))

    def info(self, value, err, note):
        self.records.append(Record(
            theorem=self.theorem, n=self.n, k=self.k, trial=self.index, seed=self.mc_seed,
            verdict="pass", lhs=float(value), lhs_err=float(err), note=note,
        ))

    def skip(self, reason: str, d=None):
        self.records.append(Record(
            theorem=self.theorem, n=self.n, k=self.k, trial=self.index, seed=self.mc_seed,
            verdict="skipped", d=d, note=reason,
        ))


# positioned bodies, shared between checkers through the body seed


@lru_cache(maxsize=512)
def john_body(body_class: str, n: int, m: int, seed: int) -> HPolytope:
    if body_class in NAMED:
        return named_john(body_class, n)
    return to_john_position(gen_body(body_class, n, m, seed))[0]


@lru_cache(maxsize=512)
def lowner_body(body_class: str, n: int, m: int, seed: int):
    return lowner_from_john(john_body(body_class, n, m, seed))


@lru_cache(maxsize=512)
def minsurf_body(body_class: str, n: int, m: int, seed: int) -> HPolytope:
    return min_surface_area_position(gen_body(body_class, n, m, seed))[0]


@lru_cache(maxsize=512)
def surface_data(body_class: str, n: int, m: int, seed: int) -> tuple[float, float]:
    K = minsurf_body(body_class, n, m, seed)
    return volume(K), surface_measure(K).total


@lru_cache(maxsize=256)
def simplex_polar_integral(k: int, lam: float, samples: int, seed: int):
    return polar_wills_integral_mc(simplex(k), lam, samples, seed)


def _linear_subspace(tr: Trial):
    return sample_subspace(tr.n, tr.k, 0.0, tr.sub_seed)


def _lambdas(tr: Trial):
    return tr.config.lambda_grid or DEFAULT_LAMBDAS


def _root(v: float, k: int) -> float:
    return v ** (1.0 / k)


# volume of sections in John position


def t1a_bound(n: int, k: int) -> float:
    s = simplex_constants(k)
    return (k + 1) ** (-(n - k) / (2 * k * (n + 1))) * math.sqrt(n * (n + 1) / (k * (k + 1))) * s.john_root


def t1c_bound(n: int, k: int, d: float) -> float:
    s = simplex_constants(k)
    e = 1.0 + 1.0 / k
    return math.sqrt(n * (n + 1) ** e / (k * (k + 1) ** e)) * (n / (n + d * d)) ** (1 / (2 * k)) * s.john_root


def check_t1a(tr: Trial):
    K = john_body(tr.body_class, tr.n, tr.m, tr.body_seed)
    L = section(K, _linear_subspace(tr))
    tr.add(_root(volume(L), tr.k), 0.0, t1a_bound(tr.n, tr.k), 0.0)


def check_t1b(tr: Trial):
    K = john_body(tr.body_class, tr.n, tr.m, tr.body_seed)
    L = section(K, _linear_subspace(tr))
    tr.add(_root(volume(L), tr.k), 0.0, 2 * math.sqrt(tr.n / tr.k), 0.0)


def check_t1c(tr: Trial):
    K = john_body(tr.body_class, tr.n, tr.m, tr.body_seed)
    F = sample_subspace(tr.n, tr.k, tr.d, tr.sub_seed)
    L = section(K, F)
    tr.add(_root(volume(L), tr.k), 0.0, t1c_bound(tr.n, tr.k, tr.d), 0.0, d=tr.d)


# projections in Löwner position


def _lowner_projection(tr: Trial):
    KL = lowner_body(tr.body_class, tr.n, tr.m, tr.body_seed)
    return project(KL, _linear_subspace(tr))


def check_t2a(tr: Trial):
    P = _lowner_projection(tr)
    bound = math.sqrt(tr.k / tr.n) * simplex_constants(tr.k).lowner_root
    tr.add(bound, 0.0, _root(volume(P), tr.k), 0.0)


def check_t2b(tr: Trial):
    P = _lowner_projection(tr)
    tr.add(math.sqrt(tr.k / tr.n) * cross_root(tr.k), 0.0, _root(volume(P), tr.k), 0.0)


# mean width


def check_t3a(tr: Trial):
    if tr.k < 2:
        tr.skip("k = 1: log k vanishes, ratio undefined")
        return
    K = john_body(tr.body_class, tr.n, tr.m, tr.body_seed)
    L = section(K, _linear_subspace(tr))
    est = mean_width_mc(L, tr.samples, tr.mc_seed)
    scale = math.sqrt(tr.n * math.log(tr.n) / (tr.k * math.log(tr.k))) * mean_width_john_simplex(tr.k)
    tr.info(est.value / scale, est.std_error / scale, "ratio only: absolute constant unspecified")


def check_t3b(tr: Trial):
    K = john_body(tr.body_class, tr.n, tr.m, tr.body_seed)
    L = section(K, _linear_subspace(tr))
    est = mean_width_mc(L, tr.samples, tr.mc_seed)
    tr.add(est.value, est.std_error, math.sqrt(tr.n / tr.k) * mean_width_cube(tr.k), 0.0)


def check_t4a(tr: Trial):
    P = _lowner_projection(tr)
    est = mean_width_mc(P, tr.samples, tr.mc_seed)
    tr.add(math.sqrt(tr.k / tr.n) * mean_width_lowner_simplex(tr.k), 0.0, est.value, est.std_error)


def check_t4b(tr: Trial):
    P = _lowner_projection(tr)
    est = mean_width_mc(P, tr.samples, tr.mc_seed)
    tr.add(math.sqrt(tr.k / tr.n) * mean_width_cross(tr.k), 0.0, est.value, est.std_error)


# Wills functional


def check_t5(tr: Trial):
    K = john_body(tr.body_class, tr.n, tr.m, tr.body_seed)
    L = section(K, _linear_subspace(tr))
    a = math.sqrt(tr.n / tr.k)
    for j, lam in enumerate(_lambdas(tr)):
        est = wills_mc(L.scaled(lam), tr.samples, tr.mc_seed + j)
        tr.add(est.value, est.std_error, (1 + 2 * lam * a) ** tr.k, 0.0, lam=lam, seed=tr.mc_seed + j)


def check_t6(tr: Trial):
    H = facet_enumerate(_lowner_projection(tr))
    est = wills_mc(H, tr.samples, tr.mc_seed)
    note = "" if exact_volume_allowed(H) else f"volume by MC ({H.n_facets} facets)"
    # dropped tail mass only lowers the estimate; add it back for a lower-bound check
    tr.add(tr.k ** (-tr.k / 2), 0.0, est.value + est.bias_bound, est.std_error, note=note)


def check_t7a(tr: Trial):
    K = john_body(tr.body_class, tr.n, tr.m, tr.body_seed)
    F = sample_subspace(tr.n, tr.k, tr.d, tr.sub_seed)
    L = section(K, F)
    if L.offsets.min() <= 1e-9:
        tr.skip("closest point of F to the origin is outside the relative interior", d=tr.d)
        return
    n, k, d = tr.n, tr.k, tr.d
    factor = (n + 1) / (k + 1) * math.sqrt(n / (n + d * d))
    scale = math.sqrt(n * (n + 1) / (k * (k + 1)))
    for j, lam in enumerate(_lambdas(tr)):
        est = polar_wills_integral_mc(L, lam, tr.samples, tr.mc_seed + j)
        ref_seed = int(generator(tr.config.seed, 97).integers(2**62)) + 7919 * k + j
        ref = simplex_polar_integral(k, lam * scale, tr.samples, ref_seed)
        tr.add(est.value, est.std_error, factor * ref.value, factor * ref.std_error,
               lam=lam, d=d, seed=tr.mc_seed + j)


def check_t7b(tr: Trial):
    K = john_body(tr.body_class, tr.n, tr.m, tr.body_seed)
    L = section(K, _linear_subspace(tr))
    a = math.sqrt(tr.n / tr.k)
    for j, lam in enumerate(_lambdas(tr)):
        est = polar_wills_integral_mc(L, lam, tr.samples, tr.mc_seed + j)
        tr.add(est.value, est.std_error, polar_integral_cube(lam * a, tr.k), 0.0, lam=lam, seed=tr.mc_seed + j)


# minimal surface area position


def _projected_zonotope(tr: Trial):
    K = minsurf_body(tr.body_class, tr.n, tr.m, tr.body_seed)
    return projection_body(K).project(_linear_subspace(tr))


def check_t8a(tr: Trial):
    Z = _projected_zonotope(tr)
    _, area = surface_data(tr.body_class, tr.n, tr.m, tr.body_seed)
    est = gauge_body_volume_mc(Z.support, tr.k, tr.samples, tr.mc_seed)
    bound = 4.0**tr.k * tr.n**tr.k / (math.factorial(tr.k) * area**tr.k)
    tr.add(est.value, est.std_error, bound, 0.0)


def check_t8b(tr: Trial):
    Z = _projected_zonotope(tr)
    _, area = surface_data(tr.body_class, tr.n, tr.m, tr.body_seed)
    tr.add((area / tr.n) ** tr.k, 0.0, zonotope_volume(Z), 0.0)


def _minsurf_section(tr: Trial):
    K = minsurf_body(tr.body_class, tr.n, tr.m, tr.body_seed)
    vol, area = surface_data(tr.body_class, tr.n, tr.m, tr.body_seed)
    ratio = tr.n**2 / tr.k * vol / area
    return section(K, _linear_subspace(tr)), ratio


def check_t8i(tr: Trial):
    L, r = _minsurf_section(tr)
    est = wills_mc(L, tr.samples, tr.mc_seed)
    tr.add(est.value, est.std_error, (1 + 2 * r) ** tr.k, 0.0)


def check_t8ii(tr: Trial):
    L, r = _minsurf_section(tr)
    tr.add(_root(volume(L), tr.k), 0.0, 2 * r, 0.0)


def check_t8iii(tr: Trial):
    L, r = _minsurf_section(tr)
    est = mean_width_mc(L, tr.samples, tr.mc_seed)
    tr.add(est.value, est.std_error, r * mean_width_cube(tr.k), 0.0)


def check_t8iv(tr: Trial):
    L, r = _minsurf_section(tr)
    tr.add(cross_root(tr.k) / r, 0.0, _root(volume(polar(L)), tr.k), 0.0)


def check_t8v(tr: Trial):
    L, r = _minsurf_section(tr)
    est = mean_width_mc(polar(L), tr.samples, tr.mc_seed)
    tr.add(mean_width_cross(tr.k) / r, 0.0, est.value, est.std_error)


# proof-level properties


def check_g1(tr: Trial):
    K = john_body(tr.body_class, tr.n, tr.m, tr.body_seed)
    L = section(K, _linear_subspace(tr))
    a = math.sqrt(tr.n / tr.k)
    grid = tr.config.lambda_grid or DEFAULT_T_GRID
    for j, t in enumerate(grid):
        est = gaussian_measure_mc(L, t, tr.samples, tr.mc_seed + j)
        rhs = float(special.erf(t * a / math.sqrt(2)) ** tr.k)
        tr.add(est.value, est.std_error, rhs, 0.0, lam=t, seed=tr.mc_seed + j)


def check_l32(tr: Trial):
    K = john_body(tr.body_class, tr.n, tr.m, tr.body_seed)
    dec = fit_john_decomposition(contact_points(K), symmetric=K.is_symmetric)
    R = restrict_decomposition(dec, _linear_subspace(tr))
    q = R.lifted_norms_sq
    n, k = tr.n, tr.k
    tr.add(1.0 / (n + 1), 0.0, float(q.min()), 0.0, note="lower bound on |P_H v|^2")
    tr.add(float(q.max()), 0.0, 1.0, 0.0, note="upper bound on |P_H v|^2")
    tr.add(float(k + 1), 0.0, R.d1 * math.sqrt(k + 1), 0.0, note="d1 sqrt(k+1) >= k+1")
    tr.add(R.lifted_identity_residual(), 0.0, 1e-7, 0.0, note="restricted identity residual")


# sharp cases


def check_sharp_cube(tr: Trial):
    n, k = tr.n, tr.k
    F = diagonal_subspace(n, k)
    perm = generator(tr.pick_seed, 5).permutation(n)
    F = type(F)(F.basis[perm], F.offset)
    L = section(john_body("cube", n, 2 * n, 0), F)
    a = math.sqrt(n / k)
    tr.add(_root(volume(L), k), 0.0, 2 * a, 0.0, sharp=True, note="volume bound")
    for lam in _lambdas(tr):
        est = wills_mc(L.scaled(lam), tr.samples, tr.mc_seed)
        tr.add(est.value, est.std_error, (1 + 2 * lam * a) ** k, 0.0, lam=lam, sharp=True, note="Wills bound")


def check_sharp_simplex(tr: Trial):
    n, k = tr.n, tr.k
    face = np.sort(generator(tr.pick_seed, 6).permutation(n + 1)[: k + 1])
    F = simplex_face_subspace(n, face)
    d = F.distance
    L = section(john_body("simplex", n, n + 1, 0), F)
    tr.add(_root(volume(L), k), 0.0, t1c_bound(n, k, d), 0.0, d=d, sharp=True,
           note="face " + "-".join(map(str, face)))


@dataclass(frozen=True)
class Checker:
    id: str
    body_class: str
    position: str
    run: Callable
    needs_distance: bool = False
    pool: str = "default"
    description: str = ""


CHECKERS = {c.id: c for c in [
    Checker("T1a", "general", "john", check_t1a, description="section volume, John position"),
    Checker("T1b", "symmetric", "john", check_t1b, description="section volume, symmetric John position"),
    Checker("T1c", "general", "john", check_t1c, needs_distance=True, description="affine section volume"),
    Checker("T2a", "general", "lowner", check_t2a, description="projection volume, Löwner position"),
    Checker("T2b", "symmetric", "lowner", check_t2b, description="projection volume, symmetric Löwner"),
    Checker("T3a", "general", "john", check_t3a, pool="k>=2", description="section mean width ratio"),
    Checker("T3b", "symmetric", "john", check_t3b, description="section mean width, symmetric"),
    Checker("T4a", "general", "lowner", check_t4a, description="projection mean width"),
    Checker("T4b", "symmetric", "lowner", check_t4b, description="projection mean width, symmetric"),
    Checker("T5", "symmetric", "john", check_t5, description="Wills functional of sections"),
    Checker("T6", "symmetric", "lowner", check_t6, description="Wills functional of projections"),
    Checker("T7a", "general", "john", check_t7a, needs_distance=True, description="polar Wills integral, affine"),
    Checker("T7b", "symmetric", "john", check_t7b, description="polar Wills integral, symmetric"),
    Checker("T8a", "general", "minsurf", check_t8a, description="polar projection body sections"),
    Checker("T8b", "general", "minsurf", check_t8b, description="projection body projections"),
    Checker("T8i", "symmetric", "minsurf", check_t8i, description="Wills functional, min surface"),
    Checker("T8ii", "symmetric", "minsurf", check_t8ii, description="section volume, min surface"),
    Checker("T8iii", "symmetric", "minsurf", check_t8iii, description="section mean width, min surface"),
    Checker("T8iv", "symmetric", "minsurf", check_t8iv, description="polar section volume, min surface"),
    Checker("T8v", "symmetric", "minsurf", check_t8v, description="polar section mean width, min surface"),
    Checker("G1", "symmetric", "john", check_g1, description="Gaussian measure comparison"),
    Checker("L32", "general", "john", check_l32, description="lifted restriction bounds"),
    Checker("SHARP-cube", "cube", "john", check_sharp_cube, pool="k|n", description="cube diagonal sections"),
    Checker("SHARP-simplex", "simplex", "john", check_sharp_simplex, description="simplex faces"),
]}
