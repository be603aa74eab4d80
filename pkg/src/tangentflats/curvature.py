"""Second fundamental form, principal curvatures, and quadrature of the
tangent-flat volume of a hypersurface.

All geometry happens on the double cover S^n.  A body's surface is
parametrized radially from an interior star center c:

    x(omega) = cos(rho) c + sin(rho) W omega,     omega in S^{n-1},

where W spans c-perp and rho(omega) is the root of F along the ray.  The
area element factors as

    J = sin(rho)^{n-2} sqrt(sin(rho)^2 + |grad rho|^2),

because the angular tangent directions stay orthogonal to the radial one.

The shape operator at a surface point x with respect to the inward normal is
the restriction of Hess(F)/|grad F| to the tangent space {x, grad F}^perp,
with the sign fixed so that a metric sphere of radius r has all principal
curvatures equal to cot(r).
"""
from __future__ import annotations

from dataclasses import dataclass
from math import comb, gamma, pi

import numpy as np

from .bodies import ConvexBody
from .projective import ProjectivePoint
from .rng import MCEstimate, RngStream
from .volumes import sphere_volume

GRID_BUDGET_BASE = 128          # node budget at level 1 is 128, x4 per level
DEGENERATE_DET_TOL = 1e-12


class NonConvexBodyError(ValueError):
    """Non-positive curvature found on a body declared convex."""


class SurfaceDegeneracyError(ValueError):
    """Surface parametrization or gradient degenerates at some node."""


class NotOnSurfaceError(ValueError):
    pass


# ---------------------------------------------------------------------------
# quadrature grid on S^{n-1}

@dataclass(frozen=True)
class QuadratureGrid:
    """Product quadrature on the direction sphere S^{n-1}.

    Gauss-Legendre in the polar angles, uniform in the azimuth; weights are
    renormalized to sum exactly to |S^{n-1}| so constants integrate exactly.
    """

    n: int
    level: int
    nodes: np.ndarray     # (N, n) unit vectors
    weights: np.ndarray   # (N,) positive, summing to |S^{n-1}|

    def __post_init__(self):
        if (self.weights <= 0).any():
            raise ValueError("quadrature weights must be positive")


def grid_axis_points(n: int, level: int) -> int:
    """Points per polar axis: the total node budget 128 * 4^(level-1) spread
    over the n-1 angular axes (azimuth gets twice the polar count)."""
    m = n - 1
    budget = GRID_BUDGET_BASE * 4 ** (level - 1)
    return max(4, round((budget / 2.0) ** (1.0 / m)))


def surface_grid(n: int, level: int) -> QuadratureGrid:
    if n < 2:
        raise ValueError("need ambient projective dimension n >= 2")
    if level < 1:
        raise ValueError("level must be >= 1")
    m = n - 1
    P = grid_axis_points(n, level)
    axes = []
    for j in range(m - 1):
        x, w = np.polynomial.legendre.leggauss(P)
        theta = (x + 1.0) * (pi / 2)
        axes.append((theta, w * (pi / 2) * np.sin(theta) ** (m - 1 - j)))
    nphi = 2 * P
    phi = np.arange(nphi) * (2 * pi / nphi)
    axes.append((phi, np.full(nphi, 2 * pi / nphi)))

    angle_grids = np.meshgrid(*[a[0] for a in axes], indexing="ij")
    weight = np.ones_like(angle_grids[0])
    for wg in np.meshgrid(*[a[1] for a in axes], indexing="ij"):
        weight = weight * wg

    shape = angle_grids[0].shape
    pts = np.empty(shape + (n,))
    s = np.ones(shape)
    for j in range(m):
        pts[..., j] = s * np.cos(angle_grids[j])
        s = s * np.sin(angle_grids[j])
    pts[..., m] = s

    nodes = pts.reshape(-1, n)
    w = weight.ravel()
    w = w * (sphere_volume(n - 1) / w.sum())
    return QuadratureGrid(n, level, nodes, w)


# ---------------------------------------------------------------------------
# surface parametrization

def _center_frame(body: ConvexBody):
    """Star center c and an orthonormal basis W of c-perp."""
    if body.matrix is not None:
        lam, vec = np.linalg.eigh(body.matrix)
        return vec[:, 0], vec[:, 1:], lam
    c = body.star_center()
    d = len(c)
    sign = 1.0 if c[0] >= 0 else -1.0
    u = c.copy()
    u[0] += sign
    u = u / np.linalg.norm(u)
    H = np.eye(d) - 2.0 * np.outer(u, u)
    return c, H[:, 1:], None


def _radial_roots(body: ConvexBody, omega: np.ndarray):
    """Geodesic radius rho(omega) of the surface along each ray from the
    star center, plus the center frame. Closed form for quadrics, bracketed
    bisection for implicit surfaces."""
    c, W, lam = _center_frame(body)
    if body.matrix is not None:
        lam0 = -lam[0]
        d = lam[1:]
        q = (omega ** 2) @ d
        rho = np.arctan(np.sqrt(lam0 / q))
        return rho, c, W
    # implicit: sign change of F along t -> cos(t) c + sin(t) omega~
    omt = omega @ W.T
    s_in = body.interior_sign()
    tgrid = np.linspace(1e-9, pi / 2 - 1e-9, 192)
    lo = np.zeros(omega.shape[0])
    hi = np.full(omega.shape[0], np.nan)
    prev = np.full(omega.shape[0], 1e-9)
    found = np.zeros(omega.shape[0], dtype=bool)
    for t in tgrid:
        x = np.cos(t) * c[None, :] + np.sin(t) * omt
        sgn = np.sign(body.surface_value(x))
        crossed = (~found) & (sgn != s_in)
        lo[crossed] = prev[crossed]
        hi[crossed] = t
        found |= crossed
        prev = np.where(found, prev, t)
        if found.all():
            break
    if not found.all():
        raise SurfaceDegeneracyError(
            "no surface crossing along some rays; the body is not "
            "star-shaped around its center axis")
    for _ in range(64):
        mid = 0.5 * (lo + hi)
        x = np.cos(mid)[:, None] * c[None, :] + np.sin(mid)[:, None] * omt
        sgn = np.sign(body.surface_value(x))
        inside = sgn == s_in
        lo = np.where(inside, mid, lo)
        hi = np.where(inside, hi, mid)
    return 0.5 * (lo + hi), c, W


def surface_points(body: ConvexBody, grid: QuadratureGrid):
    """Surface nodes x (N, n+1) and area-element values J (N,)."""
    omega = grid.nodes
    rho, c, W = _radial_roots(body, omega)
    omt = omega @ W.T
    x = np.cos(rho)[:, None] * c[None, :] + np.sin(rho)[:, None] * omt

    G = body.surface_gradient(x)
    xt = -np.sin(rho)[:, None] * c[None, :] + np.cos(rho)[:, None] * omt
    dFdt = np.einsum('ni,ni->n', G, xt)
    if np.abs(dFdt).min() < 1e-13:
        raise SurfaceDegeneracyError("ray tangent to the surface at a node")
    # |grad rho|^2 from implicit differentiation; angular gradient directions
    # span {c, omega~}-perp
    g_c = G @ c
    g_om = np.einsum('ni,ni->n', G, omt)
    ang2 = np.maximum((G ** 2).sum(1) - g_c ** 2 - g_om ** 2, 0.0)
    grad_rho2 = np.sin(rho) ** 2 * ang2 / dFdt ** 2
    J = np.sin(rho) ** (grid.n - 2) * np.sqrt(np.sin(rho) ** 2 + grad_rho2)
    return x, J


# ---------------------------------------------------------------------------
# curvature

def _orthobasis_complement(v: np.ndarray) -> np.ndarray:
    """Batched orthonormal basis of v-perp via a Householder reflector
    mapping e_0 to -sign(v_0) v; columns 1..d-1 span v-perp."""
    N, d = v.shape
    sign = np.where(v[:, 0] >= 0, 1.0, -1.0)
    u = v.copy()
    u[:, 0] += sign
    u = u / np.linalg.norm(u, axis=1, keepdims=True)
    H = np.eye(d)[None, :, :] - 2.0 * u[:, :, None] * u[:, None, :]
    return H[:, :, 1:]


def shape_operators(body: ConvexBody, x: np.ndarray):
    """Restricted shape operator matrices at surface nodes.

    Returns (S, T, nu): S is (N, n-1, n-1) symmetric with the principal
    curvatures as eigenvalues, T the tangent bases (N, n+1, n-1) and nu the
    inward unit normals (N, n+1).
    """
    G = body.surface_gradient(x)
    Gn = np.linalg.norm(G, axis=1)
    if Gn.min() < 1e-12:
        raise SurfaceDegeneracyError("vanishing gradient on the surface")
    ghat = G / Gn[:, None]
    s_in = body.interior_sign()
    nu = s_in * ghat

    B1 = _orthobasis_complement(x)                       # basis of x-perp
    g_in = np.einsum('ni,nij->nj', ghat, B1)
    g_in = g_in / np.linalg.norm(g_in, axis=1, keepdims=True)
    B2 = _orthobasis_complement(g_in)
    T = np.einsum('nij,njk->nik', B1, B2)                # {x, ghat}-perp

    H = body.surface_hessian(x)
    S = np.einsum('nia,nij,njb->nab', T, H, T)
    S = -s_in * S / Gn[:, None, None]
    return 0.5 * (S + S.transpose(0, 2, 1)), T, nu


def principal_curvature_arrays(body: ConvexBody, x: np.ndarray) -> np.ndarray:
    """Principal curvatures at surface nodes, sorted descending, (N, n-1)."""
    S, _, _ = shape_operators(body, x)
    return np.linalg.eigvalsh(S)[:, ::-1]


@dataclass(frozen=True)
class CurvatureFrame:
    """Curvature data of a hypersurface at one point: inward normal,
    descending principal curvatures, and principal directions (rows)."""

    x: ProjectivePoint
    nu: np.ndarray
    principal: np.ndarray
    frame: np.ndarray

    def curvature_sigma(self, k: int) -> float:
        return float(elementary_symmetric(self.principal[None, :], k)[0])


def curvature_frame(body: ConvexBody, x: ProjectivePoint) -> CurvatureFrame:
    """Curvature frame of the body at a surface point.

    The point must satisfy |F(x)| <= 1e-10 (relative); points off by up to
    1e-6 are projected back onto the surface along the gradient first.
    """
    v = np.array(x.v, dtype=float)
    scale = max(1.0, float(np.abs(body.surface_gradient(v[None, :])).max()))
    val = float(body.surface_value(v[None, :])[0])
    if abs(val) > 1e-6 * scale:
        raise NotOnSurfaceError(f"point is off the surface: F = {val:.3e}")
    if abs(val) > 1e-10 * scale:
        for _ in range(50):
            val = float(body.surface_value(v[None, :])[0])
            G = body.surface_gradient(v[None, :])[0]
            G = G - (G @ v) * v
            g2 = G @ G
            if g2 < 1e-24:
                raise SurfaceDegeneracyError("gradient vanishes while projecting")
            v = v - val * G / g2
            v = v / np.linalg.norm(v)
            if abs(val) < 1e-13 * scale:
                break
    S, T, nu = shape_operators(body, v[None, :])
    w, vecs = np.linalg.eigh(S[0])
    order = np.argsort(w)[::-1]
    principal = w[order]
    directions = (T[0] @ vecs[:, order]).T
    return CurvatureFrame(ProjectivePoint(v), nu[0], principal, directions)


def elementary_symmetric(values: np.ndarray, k: int) -> np.ndarray:
    """k-th elementary symmetric polynomial along the last axis, batched."""
    values = np.atleast_2d(values)
    N, m = values.shape
    if not 0 <= k <= m:
        raise ValueError(f"need 0 <= k <= {m}")
    e = np.zeros((N, m + 1))
    e[:, 0] = 1.0
    for j in range(m):
        e[:, 1:j + 2] += values[:, j:j + 1] * e[:, 0:j + 1].copy()
    return e[:, k]


def _elementary_symmetric_all(values: np.ndarray) -> np.ndarray:
    values = np.atleast_2d(values)
    N, m = values.shape
    e = np.zeros((N, m + 1))
    e[:, 0] = 1.0
    for j in range(m):
        e[:, 1:j + 2] += values[:, j:j + 1] * e[:, 0:j + 1].copy()
    return e


def mean_abs_minor(frame: CurvatureFrame, k: int, mc_samples: int,
                   rng: RngStream) -> MCEstimate:
    """Monte Carlo mean of |det| of the second fundamental form restricted
    to a uniform k-plane of the tangent space.

    For positive definite forms this equals sigma_k / C(n-1, k); with mixed
    signs only the Monte Carlo average applies.
    """
    d = frame.principal
    m = d.shape[0]
    if not 0 <= k <= m:
        raise ValueError(f"need 0 <= k <= {m}")
    if k == 0:
        return MCEstimate(1.0, 0.0, mc_samples, rng.seed)
    g = rng.generator()
    z = g.standard_normal((mc_samples, m, k))
    q, _ = np.linalg.qr(z)
    restricted = np.einsum('sik,i,sil->skl', q, d, q)
    vals = np.abs(np.linalg.det(restricted)) if k > 1 else \
        np.abs(restricted[:, 0, 0])
    mean = float(vals.mean())
    stderr = float(vals.std(ddof=1) / np.sqrt(mc_samples)) if mc_samples > 1 else 0.0
    return MCEstimate(mean, stderr, mc_samples, rng.seed)


# ---------------------------------------------------------------------------
# tangent-flat volumes

def _ratio_prefactor(k: int, n: int) -> float:
    return gamma((k + 1) / 2) * gamma((n - k) / 2) / pi ** ((n + 1) / 2)


def _convex_sigma_data(body: ConvexBody, grid: QuadratureGrid):
    x, J = surface_points(body, grid)
    d = principal_curvature_arrays(body, x)
    if body.convex:
        prod = np.abs(d).prod(axis=1)
        if d.min() <= 0.0 or prod.min() < DEGENERATE_DET_TOL:
            raise NonConvexBodyError(
                "non-positive principal curvature at a quadrature node of a "
                "body declared convex")
    return x, J, d


def tangent_volume_ratio_profile(body: ConvexBody, grid: QuadratureGrid) -> np.ndarray:
    """Tangent volume ratios for every k = 0..n-1 at once (convex bodies).

    Entry k is Gamma((k+1)/2)Gamma((n-k)/2) / pi^{(n+1)/2} times the surface
    integral of the k-th elementary symmetric polynomial of the principal
    curvatures.
    """
    if not body.convex:
        raise NonConvexBodyError("tangent volume ratios by curvature integral "
                                 "require a convex body")
    n = body.n
    if grid.n != n:
        raise ValueError("grid dimension does not match the body")
    _, J, d = _convex_sigma_data(body, grid)
    sig = _elementary_symmetric_all(d)              # (N, n)
    wj = grid.weights * J
    integrals = wj @ sig[:, :n]
    return np.array([_ratio_prefactor(k, n) * integrals[k] for k in range(n)])


def tangent_volume_ratio_convex(body: ConvexBody, k: int,
                                grid: QuadratureGrid) -> float:
    """Volume ratio of the manifold of tangent k-flats to the Schubert
    hypersurface volume, via the curvature integral (convex bodies)."""
    if not 0 <= k <= body.n - 1:
        raise ValueError("need 0 <= k <= n-1")
    return float(tangent_volume_ratio_profile(body, grid)[k])


def tangent_volume_ratio_error(body: ConvexBody, k: int, level: int) -> tuple[float, float]:
    """Ratio at the given level plus a truncation estimate from the
    difference against the previous refinement level."""
    hi = tangent_volume_ratio_convex(body, k, surface_grid(body.n, level))
    lo = tangent_volume_ratio_convex(body, k, surface_grid(body.n, max(1, level - 1)))
    return hi, abs(hi - lo)


def abs_normal_curvature_integral(d1, d2):
    """Integral over tangent directions of |normal curvature| in dimension
    two:  pi/2 |d1+d2| when d1 d2 >= 0, else
    2 sqrt(-d1 d2) + 2 |d1+d2| |arctan(sqrt(-d1/d2)) - pi/4|.

    Symmetric in (d1, d2) and even under joint sign flip (bitwise, via
    canonicalization of the pair), continuous across d1 d2 = 0.
    """
    d1 = np.asarray(d1, dtype=float)
    d2 = np.asarray(d2, dtype=float)
    lo = np.minimum(d1, d2)
    hi = np.maximum(d1, d2)
    flip = hi < -lo
    lo, hi = np.where(flip, -hi, lo), np.where(flip, -lo, hi)
    same = lo * hi >= 0
    out = np.where(same, 0.5 * pi * np.abs(lo + hi), 0.0)
    if (~same).any():
        a = hi[~same]           # positive branch
        b = lo[~same]           # negative branch
        mixed = 2.0 * np.sqrt(-a * b) + \
            2.0 * np.abs(a + b) * np.abs(np.arctan(np.sqrt(-a / b)) - pi / 4)
        out = np.array(out, dtype=float)
        out[~same] = mixed
    return out if out.shape else float(out)


def tangent_line_volume_rp3(body: ConvexBody, grid: QuadratureGrid) -> float:
    """Volume of the manifold of tangent lines of a surface in RP^3 as the
    surface integral of the direction-averaged |normal curvature|.

    Valid for surfaces with mixed curvature signs, unlike the elementary
    symmetric route.
    """
    if body.n != 3:
        raise ValueError("this formula is specific to surfaces in RP^3")
    x, J = surface_points(body, grid)
    d = principal_curvature_arrays(body, x)
    h = abs_normal_curvature_integral(d[:, 0], d[:, 1])
    return float(np.sum(grid.weights * J * h))


def tangent_volume_ratio_semialgebraic(body: ConvexBody, k: int,
                                       grid: QuadratureGrid,
                                       mc_samples: int,
                                       rng: RngStream) -> MCEstimate:
    """Tangent volume ratio by the general (possibly non-convex) formula:
    nested surface quadrature with Monte Carlo over tangent k-planes of
    |det| of the restricted second fundamental form.

    The reported standard error covers the Monte Carlo part; quadrature
    truncation is separate and controlled by the grid level.
    """
    n = body.n
    if not 0 <= k <= n - 1:
        raise ValueError("need 0 <= k <= n-1")
    x, J = surface_points(body, grid)
    d = principal_curvature_arrays(body, x)
    N = x.shape[0]
    pref = comb(n - 1, k) * _ratio_prefactor(k, n)
    wj = grid.weights * J * pref
    if k == 0:
        return MCEstimate(float(wj.sum()), 0.0, mc_samples, rng.seed)

    g = rng.generator()
    z = g.standard_normal((N, mc_samples, n - 1, k))
    q, _ = np.linalg.qr(z)
    restricted = np.einsum('nsik,ni,nsil->nskl', q, d, q)
    if k == 1:
        vals = np.abs(restricted[:, :, 0, 0])
    else:
        vals = np.abs(np.linalg.det(restricted))
    node_mean = vals.mean(axis=1)
    node_var = vals.var(axis=1, ddof=1) if mc_samples > 1 else np.zeros(N)
    total = float(wj @ node_mean)
    stderr = float(np.sqrt((wj ** 2 @ node_var) / mc_samples))
    return MCEstimate(total, stderr, mc_samples, rng.seed)


def surface_area(body: ConvexBody, grid: QuadratureGrid) -> float:
    """Riemannian surface volume of the body's boundary."""
    _, J = surface_points(body, grid)
    return float(np.sum(grid.weights * J))


def min_curvature_radius(body: ConvexBody, grid: QuadratureGrid) -> float:
    """Conservative reach proxy: min over nodes of 1/max|d_i|, capped at pi/4."""
    x, _ = surface_points(body, grid)
    d = principal_curvature_arrays(body, x)
    dmax = np.abs(d).max(axis=1)
    return float(min(pi / 4, 1.0 / dmax.max()))
