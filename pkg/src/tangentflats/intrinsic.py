"""Spherical/projective intrinsic volumes, Steiner tube formula, polar
bodies, and the sum identity they satisfy.

A convex body C in RP^n is lifted to one component of its preimage on S^n;
volumes and intrinsic volumes agree with the lift.  The j-th intrinsic
volume is a quarter of the tangent volume ratio at k = n-1-j, and the full
collection satisfies

    4|C|/|S^n| + 4|C*|/|S^n| + sum_k ratio_k = 4,

where C* is the polar body of the lifted cone.
"""
from __future__ import annotations

from dataclasses import dataclass
from math import pi

import numpy as np

from .bodies import BodyError, ConvexBody, quadric
from .curvature import (NonConvexBodyError, QuadratureGrid, _radial_roots,
                        min_curvature_radius, tangent_volume_ratio_profile)
from .rng import MCEstimate, RngStream
from .volumes import sphere_volume, steiner_coefficient

_GL64 = np.polynomial.legendre.leggauss(64)


class TubeRadiusError(ValueError):
    """Requested tube radius exceeds the validity estimate."""


def _cap_profile_volume(rho: np.ndarray, weights: np.ndarray, n: int) -> float:
    """Volume of the star-shaped region with radial profile rho over the
    direction grid: integral of int_0^rho sin^{n-1}(t) dt."""
    xg, wg = _GL64
    t = 0.5 * rho[:, None] * (xg[None, :] + 1.0)
    inner = 0.5 * rho * (np.sin(t) ** (n - 1) @ wg)
    return float(weights @ inner)


def body_volume(body: ConvexBody, grid: QuadratureGrid) -> float:
    """Volume of the convex region bounded by the body, computed on one
    lifted component (equal to the projective volume)."""
    if not body.convex:
        raise NonConvexBodyError("volume of the bounded region needs a convex body")
    rho, _, _ = _radial_roots(body, grid.nodes)
    return _cap_profile_volume(rho, grid.weights, body.n)


def polar_body(body: ConvexBody) -> ConvexBody:
    """Polar dual of the lifted convex region.

    For a quadric region {x^T A x <= 0} the polar cone is the region of the
    inverse matrix, which keeps the computation exact; only quadric-backed
    kinds are supported.
    """
    if body.matrix is None:
        raise BodyError("polar body is implemented for quadric-backed kinds only")
    return quadric(np.linalg.inv(body.matrix))


def polar_volume(body: ConvexBody, grid: QuadratureGrid) -> float:
    """Volume of the polar of the lifted convex region."""
    return body_volume(polar_body(body), grid)


@dataclass(frozen=True)
class IntrinsicProfile:
    """Intrinsic volumes V_0..V_{n-1} of a convex body together with the
    region volume, polar volume, and a conservative reach estimate."""

    body: ConvexBody
    values: np.ndarray          # (n,) intrinsic volumes V_j
    ratios: np.ndarray          # (n,) tangent volume ratios, index k
    volume: float
    polar: float
    reach: float

    def __post_init__(self):
        if (np.asarray(self.values) < -1e-12).any():
            raise ValueError("intrinsic volumes of a convex body are nonnegative")


def compute_profile(body: ConvexBody, grid: QuadratureGrid) -> IntrinsicProfile:
    ratios = tangent_volume_ratio_profile(body, grid)
    values = ratios[::-1] / 4.0                       # V_j = ratio_{n-1-j} / 4
    if body.kind == "metric_sphere":
        reach = pi / 2 - body.radius
    else:
        reach = min_curvature_radius(body, grid)
    return IntrinsicProfile(body, values, ratios, body_volume(body, grid),
                            polar_volume(body, grid), reach)


def intrinsic_volume(body: ConvexBody, j: int, grid: QuadratureGrid) -> float:
    """The j-th intrinsic volume: one quarter of the tangent volume ratio
    at k = n-1-j."""
    if not 0 <= j <= body.n - 1:
        raise ValueError("need 0 <= j <= n-1")
    ratios = tangent_volume_ratio_profile(body, grid)
    return float(ratios[body.n - 1 - j] / 4.0)


def steiner_tube_volume(body: ConvexBody, eps: float,
                        profile: IntrinsicProfile) -> float:
    """Volume of the eps-neighborhood by the tube expansion

        |C| + sum_k f_k(eps) |S^k| |S^{n-k-1}| V_k(C).

    Refuses eps beyond the profile's reach estimate rather than silently
    extrapolating past the formula's validity.
    """
    if eps < 0:
        raise ValueError("eps must be nonnegative")
    if eps > profile.reach + 1e-12:
        raise TubeRadiusError(
            f"tube radius {eps:.6g} exceeds the validity estimate "
            f"{profile.reach:.6g}")
    n = body.n
    total = profile.volume
    for k in range(n):
        total += steiner_coefficient(k, n, eps) * sphere_volume(k) * \
            sphere_volume(n - k - 1) * profile.values[k]
    return total


def mc_tube_volume(body: ConvexBody, eps: float, samples: int,
                   rng: RngStream) -> MCEstimate:
    """Direct Monte Carlo tube volume: uniform points on S^n tested for
    projective distance <= eps from the body.

    Implemented for metric spheres, where the distance to the region is the
    exact angle gap; this is the independent oracle for the tube formula.
    """
    if body.kind != "metric_sphere":
        raise BodyError("direct tube sampling is implemented for metric spheres")
    n = body.n
    g = rng.generator()
    x = g.standard_normal((samples, n + 1))
    x /= np.linalg.norm(x, axis=1, keepdims=True)
    c = body.star_center()
    ang = np.arccos(np.clip(np.abs(x @ c), 0.0, 1.0))
    hit = ang <= body.radius + eps
    p = hit.mean()
    vol_rpn = sphere_volume(n) / 2.0
    mean = vol_rpn * p
    stderr = vol_rpn * np.sqrt(max(p * (1 - p), 0.0) / samples)
    return MCEstimate(float(mean), float(stderr), samples, rng.seed)


def sum_identity_residual(body: ConvexBody, grid: QuadratureGrid) -> float:
    """Deviation of 4|C|/|S^n| + 4|C*|/|S^n| + sum_k ratio_k from 4."""
    profile = compute_profile(body, grid)
    sn = sphere_volume(body.n)
    lhs = 4.0 * profile.volume / sn + 4.0 * profile.polar / sn + profile.ratios.sum()
    return float(lhs - 4.0)


def bound_check(body: ConvexBody, k: int, grid: QuadratureGrid,
                slack: float = 1e-6) -> bool:
    """True iff the tangent volume ratio respects the universal bound of 4."""
    ratio = tangent_volume_ratio_profile(body, grid)[k]
    return bool(ratio <= 4.0 + slack)
