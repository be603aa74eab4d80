from math import pi

import numpy as np
import pytest
from scipy.integrate import quad

import tangentflats as tf
from conftest import random_ellipsoid


def cap_volume_oracle(n, r):
    """One-dimensional oracle |S^{n-1}| int_0^r sin^{n-1}(t) dt."""
    return tf.sphere_volume(n - 1) * quad(
        lambda t: np.sin(t) ** (n - 1), 0.0, r, epsabs=1e-14)[0]


def test_body_volume_against_cap_oracle(grid3):
    for r in (0.3, pi / 4, 1.1):
        body = tf.metric_sphere(3, r)
        assert abs(tf.body_volume(body, grid3) - cap_volume_oracle(3, r)) < 1e-8


def test_polar_of_cap_is_dual_cap(grid3):
    r = 0.55
    body = tf.metric_sphere(3, r)
    assert abs(tf.polar_volume(body, grid3) - cap_volume_oracle(3, pi / 2 - r)) < 1e-8
    # self-dual radius
    body = tf.metric_sphere(3, pi / 4)
    assert tf.body_volume(body, grid3) == pytest.approx(
        tf.polar_volume(body, grid3), rel=1e-10)


def test_polar_of_ellipsoid_inverts_semiaxes(grid3):
    axes = np.array([1.5, 0.9, 0.6])
    dual = tf.polar_body(tf.ellipsoid(3, axes))
    expect = tf.ellipsoid(3, 1.0 / axes)
    # same quadric up to scale
    M1 = dual.matrix / np.abs(dual.matrix).max()
    M2 = expect.matrix / np.abs(expect.matrix).max()
    assert np.abs(M1 - M2).max() < 1e-12
    with pytest.raises(tf.BodyError):
        tf.polar_body(tf.implicit_surface(3, [1.0, -1.0],
                                          [[0, 2, 0, 0], [2, 0, 0, 0]]))


def test_intrinsic_volume_sphere_closed_forms(grid3):
    r = 0.7
    body = tf.metric_sphere(3, r)
    # j = 1 in RP^3 comes from k = 1
    assert tf.intrinsic_volume(body, 1, grid3) == pytest.approx(
        (2 / pi) * np.cos(r) * np.sin(r), rel=1e-9)
    # j = n-1 comes from k = 0
    assert tf.intrinsic_volume(body, 2, grid3) == pytest.approx(
        np.sin(r) ** 2 / 2, rel=1e-9)


def test_intrinsic_volume_near_hemisphere_limit():
    grid = tf.surface_grid(3, 3)
    body = tf.metric_sphere(3, pi / 2 - 1e-5)
    assert tf.intrinsic_volume(body, 2, grid) == pytest.approx(0.5, abs=1e-4)


def test_profile_identity_with_ratios(grid3):
    body = tf.ellipsoid(3, [1.1, 0.9, 0.75])
    profile = tf.compute_profile(body, grid3)
    ratios = tf.tangent_volume_ratio_profile(body, grid3)
    for j in range(3):
        assert profile.values[j] == ratios[2 - j] / 4.0
        assert tf.intrinsic_volume(body, j, grid3) == ratios[2 - j] / 4.0


def test_steiner_zero_eps_is_volume(grid3):
    body = tf.metric_sphere(3, 0.5)
    profile = tf.compute_profile(body, grid3)
    assert tf.steiner_tube_volume(body, 0.0, profile) == profile.volume


def test_steiner_cap_tube_matches_cap_oracle(grid3):
    r, eps = pi / 6, 0.1
    body = tf.metric_sphere(3, r)
    profile = tf.compute_profile(body, grid3)
    tube = tf.steiner_tube_volume(body, eps, profile)
    assert abs(tube - cap_volume_oracle(3, r + eps)) < 1e-8


def test_steiner_refuses_eps_beyond_reach(grid3):
    r = pi / 6
    body = tf.metric_sphere(3, r)
    profile = tf.compute_profile(body, grid3)
    assert profile.reach == pytest.approx(pi / 2 - r, rel=1e-12)
    with pytest.raises(tf.TubeRadiusError):
        tf.steiner_tube_volume(body, pi / 2 - r + 0.01, profile)


def test_steiner_against_mc_tube(grid3):
    r, eps = pi / 6, 0.1
    body = tf.metric_sphere(3, r)
    profile = tf.compute_profile(body, grid3)
    tube = tf.steiner_tube_volume(body, eps, profile)
    est = tf.mc_tube_volume(body, eps, 200_000, tf.RngStream(31))
    assert abs(est.mean - tube) < 4 * est.stderr
    with pytest.raises(tf.BodyError):
        tf.mc_tube_volume(tf.ellipsoid(3, [1, 1, 1]), eps, 10, tf.RngStream(0))


def test_sum_identity_spheres(grid3):
    for r in (pi / 6, pi / 4, pi / 3):
        res = tf.sum_identity_residual(tf.metric_sphere(3, r), grid3)
        assert abs(res) < 1e-5


def test_sum_identity_ellipsoids(grid3):
    gen = tf.RngStream(33).generator()
    for _ in range(3):
        res = tf.sum_identity_residual(random_ellipsoid(gen), grid3)
        assert abs(res) < 1e-4


def test_bound_check_bodies(grid3):
    for r in (0.2, pi / 4, 1.4):
        body = tf.metric_sphere(3, r)
        for k in range(3):
            assert tf.bound_check(body, k, grid3)
    needle = tf.ellipsoid(3, [1.0, 0.01, 0.01])
    for k in range(3):
        assert tf.bound_check(needle, k, grid3)
    # k = 0: the ratio is 4 V_{n-1} <= 4 directly
    gen = tf.RngStream(35).generator()
    body = random_ellipsoid(gen)
    ratio0 = tf.tangent_volume_ratio_convex(body, 0, grid3)
    assert ratio0 == pytest.approx(4 * tf.intrinsic_volume(body, 2, grid3), rel=1e-12)
    assert ratio0 <= 4.0


def test_cap_intrinsic_volume_profile_in_radius():
    # Growing caps trade intrinsic volume between indices: V_{n-1} grows
    # from 0, V_0 falls from 1/2 (the value of a point), and the middle
    # index is symmetric about the self-dual radius.  All three follow from
    # the closed forms cos^2(r)/2, (2/pi) cos(r) sin(r), sin^2(r)/2.
    grid = tf.surface_grid(3, 3)
    rs = np.linspace(0.15, pi / 2 - 0.15, 12)
    values = np.array([tf.compute_profile(tf.metric_sphere(3, r), grid).values
                       for r in rs])
    assert (np.diff(values[:, 2]) > 0).all()
    assert (np.diff(values[:, 0]) < 0).all()
    assert np.allclose(values[:, 1], values[::-1, 1], atol=1e-9)
    assert np.allclose(values[:, 0], np.cos(rs) ** 2 / 2, atol=1e-9)
    assert np.allclose(values[:, 2], np.sin(rs) ** 2 / 2, atol=1e-9)


def test_cap_volume_derivative_is_area():
    grid = tf.surface_grid(3, 3)
    r, h = 0.8, 1e-5
    dv = (tf.body_volume(tf.metric_sphere(3, r + h), grid)
          - tf.body_volume(tf.metric_sphere(3, r - h), grid)) / (2 * h)
    area = tf.surface_area(tf.metric_sphere(3, r), grid)
    assert abs(dv - area) < 1e-6 * max(1.0, area)
