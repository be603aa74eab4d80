import numpy as np
import pytest

import tangentflats as tf
from tangentflats.bodies import BodyFileError


def test_metric_sphere_homogeneous_equation():
    r = 0.6
    body = tf.metric_sphere(3, r)
    # lifted points (cos r, sin r * omega) satisfy the quadric
    gen = tf.RngStream(1).generator()
    om = gen.standard_normal((20, 3))
    om /= np.linalg.norm(om, axis=1, keepdims=True)
    x = np.column_stack([np.full(20, np.cos(r)), np.sin(r) * om])
    assert np.abs(body.surface_value(x)).max() < 1e-12
    with pytest.raises(tf.BodyError):
        tf.metric_sphere(3, 2.0)


def test_quadric_signature_checks():
    with pytest.raises(tf.NonConvexQuadricError):
        tf.quadric(np.diag([-1.0, -1.0, 1.0, 1.0]))       # hyperboloid
    with pytest.raises(tf.NonConvexQuadricError):
        tf.quadric(np.diag([0.0, 1.0, 1.0, 1.0]))         # singular
    # sign normalization: n negatives flips to one negative
    b = tf.quadric(np.diag([1.0, -2.0, -3.0, -4.0]))
    lam = np.linalg.eigvalsh(b.matrix)
    assert (lam < 0).sum() == 1


def test_affine_sphere_membership():
    center = np.array([0.3, -0.2, 0.5])
    r = 0.4
    body = tf.affine_sphere(3, center, r)
    gen = tf.RngStream(2).generator()
    d = gen.standard_normal((20, 3))
    d /= np.linalg.norm(d, axis=1, keepdims=True)
    pts = np.column_stack([np.ones(20), center + r * d])
    pts /= np.linalg.norm(pts, axis=1, keepdims=True)
    assert np.abs(body.surface_value(pts)).max() < 1e-12
    assert body.convex


def test_ellipsoid_membership_and_convexity():
    axes = np.array([1.5, 0.7, 0.9])
    body = tf.ellipsoid(3, axes)
    pts = np.column_stack([np.ones(3), np.diag(axes)])
    pts /= np.linalg.norm(pts, axis=1, keepdims=True)
    assert np.abs(body.surface_value(pts)).max() < 1e-12


def test_rotate_body_membership_convention():
    gen = tf.RngStream(3).generator()
    body = tf.ellipsoid(3, [1.2, 0.8, 1.0])
    g = tf.haar_rotation(3, tf.RngStream(4)).g
    moved = tf.rotate_body(body, g)
    # x on moved body iff g^T x on the original
    from tangentflats.curvature import surface_points, surface_grid
    x, _ = surface_points(body, surface_grid(3, 2))
    assert np.abs(moved.surface_value(x @ g.T)).max() < 1e-10


def test_implicit_polynomial_evaluation():
    # F = x0^2 x1 - x2^3 is homogeneous of degree 3
    poly = tf.bodies.HomogeneousPolynomial(
        np.array([1.0, -1.0]), np.array([[2, 1, 0], [0, 0, 3]]))
    x = np.array([[1.0, 2.0, 1.0], [0.5, 1.0, -1.0]])
    assert np.allclose(poly.value(x), [1.0, 1.25])
    g = poly.gradient(x)
    assert np.allclose(g[0], [2 * 1 * 2, 1.0, -3.0])
    h = poly.hessian(x)
    assert np.allclose(h[0][0, 1], 2.0) and np.allclose(h[0][2, 2], -6.0)
    with pytest.raises(tf.BodyError):
        tf.bodies.HomogeneousPolynomial(np.array([1.0, 1.0]),
                                        np.array([[2, 0, 0], [1, 0, 0]]))


@pytest.mark.parametrize("text", [
    "kind = metric_sphere\nn = 3\nradius = 0.5\n",
    "kind = affine_sphere\nn = 3\ncenter = 0.1 0.2 -0.3\nradius = 0.4\n",
    "kind = ellipsoid\nn = 3\nsemiaxes = 1.0 0.8 0.5\n",
])
def test_body_file_round_trip(text):
    body = tf.parse_body_text(text)
    body2 = tf.parse_body_text(tf.format_body(body))
    assert body2.kind == body.kind and body2.n == body.n
    assert np.allclose(body2.matrix, body.matrix, atol=1e-12)


def test_body_file_quadric_and_implicit_round_trip():
    b = tf.quadric(np.diag([-0.8, 1.0, 2.0, 0.5]))
    b2 = tf.parse_body_text(tf.format_body(b))
    assert np.allclose(b2.matrix, b.matrix)
    imp = tf.implicit_surface(3, [1.0, 1.0, 1.0, -0.3],
                              [[0, 4, 0, 0], [0, 0, 4, 0], [0, 0, 0, 4],
                               [4, 0, 0, 0]])
    imp2 = tf.parse_body_text(tf.format_body(imp))
    assert np.array_equal(imp2.poly.exponents, imp.poly.exponents)
    assert np.allclose(imp2.poly.coeffs, imp.poly.coeffs)


def test_body_file_errors_carry_line_numbers():
    with pytest.raises(BodyFileError) as err:
        tf.parse_body_text("kind = metric_sphere\nn == 3\n")
    assert "line 2" in str(err.value)
    with pytest.raises(BodyFileError) as err:
        tf.parse_body_text("kind = metric_sphere\nn = 3\nradius = huge\n")
    assert "line 3" in str(err.value)
    with pytest.raises(BodyFileError):
        tf.parse_body_text("kind = dodecahedron\nn = 3\n")
    with pytest.raises(BodyFileError):
        tf.parse_body_text("kind = metric_sphere\nn = 3\n")   # missing radius
    with pytest.raises(BodyFileError) as err:
        tf.parse_body_text("kind = metric_sphere\nn = 3\nwobble = 1\n")
    assert "unknown key" in str(err.value)
