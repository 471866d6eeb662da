import math

import numpy as np
import pytest
from hypothesis import given, strategies as st
from scipy import integrate, special, stats

from johnsections.core import Ellipsoid, HPolytope, VPolytope, polar, projection_body, surface_measure, volume
from johnsections.errors import IndexOutOfRange
from johnsections.functionals import (
    gauge_body_volume_mc, gaussian_measure_mc, gaussian_width_constant, mean_width_mc,
    polar_wills_integral_mc, quermass_conversion, simplex_constants, unit_ball_volume, wills_mc,
)
from johnsections.functionals.constants import (
    cross_root, expected_max_abs_gaussian, expected_max_gaussian, gaussian_measure_cube,
    intrinsic_from_quermass, mean_width_cross, mean_width_cube, mean_width_john_simplex,
    mean_width_lowner_simplex, polar_integral_cube,
)
from johnsections.functionals.montecarlo import box_muller, generator
from johnsections.harness.generators import cross, cube, gen_body, simplex, simplex_vertices


def within(est, target, sigmas=3.0, extra=0.0):
    return abs(est.value - target) <= sigmas * est.std_error + extra


def box(lo, hi):
    lo, hi = np.asarray(lo, float), np.asarray(hi, float)
    n = len(lo)
    return HPolytope.from_inequalities(np.vstack([np.eye(n), -np.eye(n)]), np.concatenate([hi, -lo]))


# constants


@pytest.mark.parametrize("n, v", [(0, 1.0), (1, 2.0), (2, math.pi), (3, 4 * math.pi / 3)])
def test_unit_ball_volume(n, v):
    assert unit_ball_volume(n) == pytest.approx(v, rel=1e-14)


def test_gaussian_width_constant():
    assert gaussian_width_constant(1) == pytest.approx(math.sqrt(2 / math.pi), rel=1e-14)
    assert gaussian_width_constant(2) == pytest.approx(math.sqrt(math.pi / 2), rel=1e-14)
    assert gaussian_width_constant(64) / 8 == pytest.approx(1.0, rel=0.02)


@pytest.mark.parametrize("n", [1, 3, 6])
def test_gaussian_width_constant_is_mean_norm(n):
    # chi distribution mean, from scipy
    assert gaussian_width_constant(n) == pytest.approx(stats.chi(n).mean(), rel=1e-12)


def test_simplex_constant_examples():
    s2 = simplex_constants(2)
    assert s2.volume == pytest.approx(math.sqrt(3) / 2)
    assert s2.john_root**2 == pytest.approx(3 * math.sqrt(3))
    s1 = simplex_constants(1)
    assert s1.inradius == pytest.approx(1 / math.sqrt(2))
    assert s1.circumradius == pytest.approx(1 / math.sqrt(2))


@pytest.mark.parametrize("k", range(1, 8))
def test_simplex_constant_consistency(k):
    s = simplex_constants(k)
    assert s.john_root == pytest.approx(math.sqrt(k * (k + 1)) * s.volume ** (1 / k), rel=1e-12)
    assert s.john_scale * s.inradius == pytest.approx(1.0)
    assert s.lowner_scale * s.circumradius == pytest.approx(1.0)


@pytest.mark.parametrize("k", [1, 2, 3, 4, 5])
def test_simplex_roots_match_volumes(k):
    s = simplex_constants(k)
    assert volume(simplex(k)) ** (1 / k) == pytest.approx(s.john_root, rel=1e-10)
    lowner = VPolytope(simplex_vertices(k) / k)
    assert volume(lowner) ** (1 / k) == pytest.approx(s.lowner_root, rel=1e-10)
    assert volume(cross(k)) ** (1 / k) == pytest.approx(cross_root(k), rel=1e-10)


def test_quermass_conversion_edge_cases():
    assert quermass_conversion(4, 4, 4) == pytest.approx(1.0)
    assert intrinsic_from_quermass(5, 5) == pytest.approx(1.0)
    with pytest.raises(IndexOutOfRange):
        quermass_conversion(2, 3, 1)
    with pytest.raises(IndexOutOfRange):
        intrinsic_from_quermass(2, 3)


@pytest.mark.parametrize("a", [0.5, 1.0, 2.0])
def test_intrinsic_volumes_reproduce_square_wills(a):
    K = box([-a, -a], [a, a])
    W = [volume(K), surface_measure(K).total / 2, unit_ball_volume(2)]  # W_0, W_1, W_2 in R^2
    for lam in (0.3, 1.0, 2.5):
        Wl = [W[0] * lam**2, W[1] * lam, W[2]]
        total = sum(intrinsic_from_quermass(2, i) * Wl[2 - i] for i in range(3))
        assert total == pytest.approx((1 + 2 * a * lam) ** 2, rel=1e-12)


def test_quermass_conversion_segment_in_plane():
    # a segment of length L: its length in R^1 is W_1 in R^2, which is half the perimeter 2L
    L = 3.0
    assert quermass_conversion(2, 1, 0) * (2 * L / 2) == pytest.approx(L)


def test_quermass_conversion_flat_square_in_space():
    # W_1 of a square of side a inside its own plane is half its perimeter, 2a;
    # W_2 in R^3 is |B^3| times the mean width of the flat square, sampled here
    a = 1.5
    V = VPolytope(a / 2 * np.array([[1, 1, 0], [1, -1, 0], [-1, 1, 0], [-1, -1, 0.0]]))
    w = mean_width_mc(V, 400_000, 4)
    c = quermass_conversion(3, 2, 1) * unit_ball_volume(3)
    assert abs(c * w.value - 2 * a) <= 3 * c * w.std_error


@pytest.mark.parametrize("m", [1, 2, 3, 7])
def test_expected_max_gaussian(m):
    f = lambda x: x * m * stats.norm.pdf(x) * stats.norm.cdf(x) ** (m - 1)
    ref = integrate.quad(f, -np.inf, np.inf)[0]
    assert expected_max_gaussian(m) == pytest.approx(ref, abs=1e-10)
    if m == 2:
        assert expected_max_gaussian(2) == pytest.approx(1 / math.sqrt(math.pi))


def test_expected_max_abs_gaussian():
    assert expected_max_abs_gaussian(1) == pytest.approx(math.sqrt(2 / math.pi), rel=1e-10)


def sphere(rng, N, k):
    g = rng.standard_normal((N, k))
    return g / np.linalg.norm(g, axis=1, keepdims=True)


def test_reference_mean_widths_closed_forms():
    assert mean_width_cube(1) == pytest.approx(1.0)
    assert mean_width_cube(2) == pytest.approx(4 / math.pi)
    assert mean_width_cube(3) == pytest.approx(1.5)
    assert mean_width_cross(1) == pytest.approx(1.0)
    # B_1^2 is a square of side sqrt 2 rotated: w = sqrt2/2 * 4/pi
    assert mean_width_cross(2) == pytest.approx(2 * math.sqrt(2) / math.pi)


@pytest.mark.parametrize("k", [2, 3, 4])
def test_reference_mean_widths_by_direct_sampling(k):
    rng = np.random.default_rng(k)
    T = sphere(rng, 400_000, k)
    for V, w in ((simplex_vertices(k), mean_width_john_simplex(k)),
                 (simplex_vertices(k) / k, mean_width_lowner_simplex(k)),
                 (np.vstack([np.eye(k), -np.eye(k)]), mean_width_cross(k))):
        h = (T @ V.T).max(axis=1)
        assert abs(h.mean() - w) <= 4 * h.std() / math.sqrt(len(h))


@pytest.mark.parametrize("k, s", [(1, 1.0), (2, 0.7), (3, 1.9)])
def test_gaussian_measure_cube(k, s):
    assert gaussian_measure_cube(s, k) == pytest.approx((stats.norm.cdf(s) - stats.norm.cdf(-s)) ** k)


@pytest.mark.parametrize("k, lam", [(1, 0.3), (1, 1.0), (1, 5.0), (2, 0.5), (2, 1.0), (2, 3.0)])
def test_polar_integral_cube_direct_quadrature(k, lam):
    if k == 1:
        f = lambda x: math.exp(-x * x / (4 * math.pi) - abs(x) / lam)
        ref = 2 * integrate.quad(f, 0, np.inf, epsabs=1e-13, epsrel=1e-12)[0]
    else:
        f = lambda y, x: math.exp(-(x * x + y * y) / (4 * math.pi) - max(abs(x), abs(y)) / lam)
        # integrate over one eighth |y| <= x and multiply
        ref = 8 * integrate.dblquad(f, 0, 60, 0, lambda x: x, epsabs=1e-12, epsrel=1e-11)[0]
    assert polar_integral_cube(lam, k) == pytest.approx(ref, rel=1e-8)


# mean width


def test_mean_width_of_ball_is_one():
    est = mean_width_mc(Ellipsoid(np.zeros(3), np.eye(3)), 1000, 0)
    assert est.value == pytest.approx(1.0, abs=1e-14)
    assert est.std_error < 1e-14


def test_mean_width_of_segment():
    est = mean_width_mc(box([-1.0], [1.0]), 1000, 3)
    assert est.value == pytest.approx(1.0)


@pytest.mark.parametrize("n", [2, 3, 4])
def test_mean_width_of_cube(n):
    assert within(mean_width_mc(cube(n), 200_000, 1), mean_width_cube(n))


def test_mean_width_linear_in_scale():
    P = gen_body("general", 3, 9, 2)
    a = mean_width_mc(P, 100_000, 4)
    b = mean_width_mc(P.scaled(2.0), 100_000, 5)
    assert abs(b.value - 2 * a.value) <= 3 * (b.std_error + 2 * a.std_error)


def test_gaussian_support_ratio_is_cn(square):
    rng = generator(12, 0)
    G = box_muller(rng, (400_000, 2))
    h = np.abs(G).sum(axis=1)
    w = mean_width_mc(square, 400_000, 13)
    ratio = h.mean() / w.value
    err = ratio * (h.std() / math.sqrt(len(h)) / h.mean() + w.std_error / w.value)
    assert abs(ratio - gaussian_width_constant(2)) <= 3 * err


def test_box_muller_is_standard_normal():
    x = box_muller(generator(1, 2), (200_000,))
    assert stats.kstest(x, "norm").pvalue > 1e-3


def test_determinism():
    P = gen_body("symmetric", 3, 8, 1)
    for f in (lambda: mean_width_mc(P, 5000, 9), lambda: wills_mc(P, 5000, 9),
              lambda: gaussian_measure_mc(P, 1.0, 5000, 9), lambda: polar_wills_integral_mc(P, 1.0, 5000, 9)):
        a, b = f(), f()
        assert a.value == b.value and a.std_error == b.std_error
    assert mean_width_mc(P, 5000, 9).value != mean_width_mc(P, 5000, 10).value


def test_estimate_serialisation():
    d = wills_mc(gen_body("general", 2, 6, 0), 1000, 3).as_dict()
    assert set(d) == {"value", "std_error", "samples", "seed", "bias_bound"}


# Wills functional


@pytest.mark.parametrize("a", [0.5, 1.0, 3.0])
def test_wills_of_segment(a):
    seg = box([-a], [a])
    assert wills_mc(seg, 10, 0).value == pytest.approx(2 * a + 1)
    assert within(wills_mc(seg, 200_000, 1, exact_shortcuts=False), 2 * a + 1)


def test_wills_product_rule(square):
    seg = wills_mc(box([-1.0], [1.0]), 200_000, 2, exact_shortcuts=False)
    sq = wills_mc(square, 200_000, 3, exact_shortcuts=False)
    target = seg.value**2
    assert abs(sq.value - target) <= 3 * (sq.std_error + 2 * seg.value * seg.std_error)


@pytest.mark.parametrize("seed", [0, 1, 2])
def test_wills_of_rotated_box(seed):
    rng = np.random.default_rng(seed)
    sides = rng.uniform(0.3, 2.0, 3)
    Q, _ = np.linalg.qr(rng.standard_normal((3, 3)))
    P = box(-sides / 2, sides / 2).linear_image(Q)
    assert within(wills_mc(P, 200_000, seed), float(np.prod(1 + sides)))


def test_wills_monotone_under_inclusion():
    small = wills_mc(box([-0.5, -0.5], [0.5, 0.7]), 100_000, 1, exact_shortcuts=False)
    large = wills_mc(box([-0.6, -0.5], [0.6, 0.9]), 100_000, 2, exact_shortcuts=False)
    assert small.value <= large.value + 3 * (small.std_error + large.std_error)


@given(st.integers(0, 10_000), st.integers(1, 4))
def test_wills_at_least_volume(seed, n):
    P = gen_body("general", n, 3 * n, seed) if n > 1 else box([-0.3], [1.1])
    est = wills_mc(P, 2000, seed)
    assert est.value >= volume(P)
    assert est.bias_bound >= 0


# Gaussian measure


def test_gaussian_measure_examples():
    seg = box([-1.0], [1.0])
    assert within(gaussian_measure_mc(seg, 1.0, 200_000, 0), 0.6826894921370859)
    assert gaussian_measure_mc(seg, 0.0, 1000, 1).value == 0.0
    big = gaussian_measure_mc(cube(3), 1e3, 10_000, 1)
    assert big.value == 1.0
    assert big.std_error > 0


def test_gaussian_measure_unbiased_across_seeds():
    # z-scores over independent seeds: mean near 0, spread near 1
    seg = box([-1.0], [1.0])
    target = 0.6826894921370859
    z = np.array([(e.value - target) / e.std_error
                  for e in (gaussian_measure_mc(seg, 1.0, 50_000, s) for s in range(100))])
    assert abs(z.mean()) <= 3 / math.sqrt(len(z))
    assert 0.75 <= z.std() <= 1.25


def test_gaussian_measure_nondecreasing():
    P = gen_body("symmetric", 3, 10, 7)
    ests = [gaussian_measure_mc(P, t, 50_000, 3) for t in (0.25, 0.5, 1.0, 2.0)]
    for a, b in zip(ests, ests[1:]):
        assert a.value <= b.value + 3 * (a.std_error + b.std_error)


def test_gaussian_measure_cube_oracle():
    est = gaussian_measure_mc(cube(3), 0.8, 200_000, 5)
    assert within(est, gaussian_measure_cube(0.8, 3))


# the double-polarity integral


def test_polar_integral_segment_quadrature():
    f = lambda x: math.exp(-x * x / (4 * math.pi) - abs(x))
    ref = 2 * integrate.quad(f, 0, np.inf)[0]
    assert within(polar_wills_integral_mc(box([-1.0], [1.0]), 1.0, 200_000, 1), ref)


@pytest.mark.parametrize("lam", [0.3, 1.0, 4.0])
def test_polar_integral_square_layer_cake(square, lam):
    assert within(polar_wills_integral_mc(square, lam, 200_000, 2), polar_integral_cube(lam, 2))


def test_polar_integral_small_dilation_limit(square):
    lam = 1e-3
    est = polar_wills_integral_mc(square, lam, 100_000, 3)
    assert est.value / lam**2 == pytest.approx(2 * volume(square), rel=0.02)


def test_polar_integral_large_dilation_limit(square):
    est = polar_wills_integral_mc(square, 1e3, 100_000, 4)
    assert est.value == pytest.approx((2 * math.pi) ** 2, rel=0.02)


def test_polar_integral_scaling_identity():
    P = gen_body("general", 2, 6, 3)
    a = polar_wills_integral_mc(P.scaled(2.5), 1.0, 100_000, 6)
    b = polar_wills_integral_mc(P, 2.5, 100_000, 7)
    assert abs(a.value - b.value) <= 3 * (a.std_error + b.std_error)


def test_polar_integral_general_body_quadrature():
    # 2-D oracle: closed-form radial integral, angular quadrature split at the vertex angles
    P = gen_body("general", 2, 5, 11)
    lam = 0.8
    a = 1 / (4 * math.pi)

    def radial(th):
        b = float(max((np.array([math.cos(th), math.sin(th)]) @ P.normals.T) / P.offsets)) / lam
        # int_0^inf r exp(-a r^2 - b r) dr
        return 1 / (2 * a) - b * math.sqrt(math.pi) / (4 * a**1.5) * special.erfcx(b / (2 * math.sqrt(a)))

    from johnsections.core import vertex_enumerate

    V = vertex_enumerate(P).vertices
    cuts = np.sort(np.mod(np.arctan2(V[:, 1], V[:, 0]), 2 * math.pi))
    cuts = np.concatenate([[0.0], cuts, [2 * math.pi]])
    ref = sum(integrate.quad(radial, lo, hi, epsabs=1e-12, epsrel=1e-12)[0] for lo, hi in zip(cuts, cuts[1:]))
    assert within(polar_wills_integral_mc(P, lam, 200_000, 8), ref)


# volume of a body given by its gauge


def test_gauge_body_volume_square(square):
    from johnsections.core import gauge

    est = gauge_body_volume_mc(lambda x: gauge(square, x), 2, 100_000, 1)
    assert within(est, 4.0)


def test_gauge_body_volume_polar_projection_body():
    P = gen_body("general", 3, 8, 5)
    Z = projection_body(P)
    signs = np.array(np.meshgrid(*[[-1.0, 1.0]] * len(Z.generators))).reshape(len(Z.generators), -1).T
    zon = VPolytope.hull(signs @ Z.generators)
    exact = volume(polar(zon))
    est = gauge_body_volume_mc(Z.support, 3, 200_000, 2)
    assert within(est, exact)
