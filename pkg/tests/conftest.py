import numpy as np
import pytest

import tangentflats as tf


@pytest.fixture(scope="session")
def grid3():
    return tf.surface_grid(3, 4)


@pytest.fixture(scope="session")
def grid3_coarse():
    return tf.surface_grid(3, 3)


def octahedral_quartic(a: float, b: float, convex: bool) -> tf.ConvexBody:
    """Star-shaped quartic x^4+y^4+z^4 + a(x^2y^2+y^2z^2+z^2x^2) = b w^4.

    a = 2 is a metric sphere, a around 1..1.5 is strictly convex, and
    a = -0.9 has mixed curvature signs while staying star-shaped.
    """
    terms = []
    for j in (1, 2, 3):
        e = [0, 0, 0, 0]
        e[j] = 4
        terms.append((1.0, list(e)))
    for (i, j) in ((1, 2), (2, 3), (1, 3)):
        e = [0, 0, 0, 0]
        e[i] = 2
        e[j] = 2
        terms.append((a, list(e)))
    terms.append((-b, [4, 0, 0, 0]))
    return tf.implicit_surface(3, [t[0] for t in terms],
                               [t[1] for t in terms], convex=convex)


def random_ellipsoid(gen: np.random.Generator, lo=0.6, hi=1.8) -> tf.ConvexBody:
    axes = np.exp(gen.uniform(np.log(lo), np.log(hi), size=3))
    return tf.ellipsoid(3, axes)
