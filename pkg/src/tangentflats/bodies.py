"""Hypersurface descriptions: metric spheres, affine spheres, ellipsoids,
general quadrics and homogeneous implicit surfaces.

Every body lives in RP^n and is handled on the double cover S^n as the zero
set of a homogeneous polynomial F.  For the quadric-backed kinds the
defining matrix is normalized so that exactly one eigenvalue is negative;
the convex region is then {x : x^T A x < 0} and the negative eigenvector is
an interior point usable as a star center for parametrization.

Body files are plain key-value text; see `parse_body_text` for the schema.
"""
from __future__ import annotations

from dataclasses import dataclass
from math import pi, tan

import numpy as np

QUADRIC_KINDS = ("metric_sphere", "affine_sphere", "ellipsoid", "quadric")


class BodyError(ValueError):
    pass


class NonConvexQuadricError(BodyError):
    """Quadric matrix does not bound a strictly convex region."""


class BodyFileError(BodyError):
    """Malformed body file; carries the offending line number."""

    def __init__(self, line: int, message: str):
        super().__init__(f"line {line}: {message}")
        self.line = line


@dataclass(frozen=True)
class HomogeneousPolynomial:
    """Homogeneous polynomial in n+1 variables given by monomials."""

    coeffs: np.ndarray        # (M,)
    exponents: np.ndarray     # (M, n+1) nonnegative ints

    def __post_init__(self):
        c = np.asarray(self.coeffs, dtype=float)
        e = np.asarray(self.exponents, dtype=int)
        if c.ndim != 1 or e.ndim != 2 or c.shape[0] != e.shape[0]:
            raise BodyError("coefficients and exponent rows must match")
        degs = e.sum(axis=1)
        if len(set(degs.tolist())) != 1:
            raise BodyError("polynomial must be homogeneous")
        object.__setattr__(self, "coeffs", c)
        object.__setattr__(self, "exponents", e)

    @property
    def nvars(self) -> int:
        return self.exponents.shape[1]

    @property
    def degree(self) -> int:
        return int(self.exponents[0].sum())

    def value(self, x: np.ndarray) -> np.ndarray:
        x = np.atleast_2d(x)
        mono = np.prod(x[:, None, :] ** self.exponents[None, :, :], axis=2)
        return mono @ self.coeffs

    def gradient(self, x: np.ndarray) -> np.ndarray:
        x = np.atleast_2d(x)
        out = np.zeros_like(x)
        for j in range(self.nvars):
            mask = self.exponents[:, j] > 0
            if not mask.any():
                continue
            e2 = self.exponents[mask].copy()
            c2 = self.coeffs[mask] * e2[:, j]
            e2[:, j] -= 1
            mono = np.prod(x[:, None, :] ** e2[None, :, :], axis=2)
            out[:, j] = mono @ c2
        return out

    def hessian(self, x: np.ndarray) -> np.ndarray:
        x = np.atleast_2d(x)
        d = self.nvars
        out = np.zeros((x.shape[0], d, d))
        for i in range(d):
            for j in range(i, d):
                e = self.exponents
                if i == j:
                    mask = e[:, i] > 1
                    if not mask.any():
                        continue
                    e2 = e[mask].copy()
                    c2 = self.coeffs[mask] * e2[:, i] * (e2[:, i] - 1)
                    e2[:, i] -= 2
                else:
                    mask = (e[:, i] > 0) & (e[:, j] > 0)
                    if not mask.any():
                        continue
                    e2 = e[mask].copy()
                    c2 = self.coeffs[mask] * e2[:, i] * e2[:, j]
                    e2[:, i] -= 1
                    e2[:, j] -= 1
                mono = np.prod(x[:, None, :] ** e2[None, :, :], axis=2)
                out[:, i, j] = mono @ c2
                if i != j:
                    out[:, j, i] = out[:, i, j]
        return out


@dataclass(frozen=True)
class ConvexBody:
    """A hypersurface in RP^n together with chart metadata.

    For the quadric-backed kinds `matrix` is the normalized defining form
    (one negative eigenvalue); for the implicit kind `poly` holds the
    homogeneous polynomial and `center` an interior star point on S^n.
    `convex` records whether strict convexity is guaranteed by construction
    (quadric kinds) or merely declared (implicit kind).
    """

    kind: str
    n: int
    convex: bool
    matrix: np.ndarray | None = None
    poly: HomogeneousPolynomial | None = None
    center: np.ndarray | None = None
    radius: float | None = None
    chart: int = 0

    def defining_matrix(self) -> np.ndarray:
        if self.matrix is None:
            raise BodyError(f"body kind {self.kind!r} has no quadric matrix")
        return self.matrix

    def star_center(self) -> np.ndarray:
        """Interior point on S^n from which the surface is star-shaped."""
        if self.center is not None:
            return self.center
        lam, vec = np.linalg.eigh(self.defining_matrix())
        return vec[:, 0]

    def surface_value(self, x: np.ndarray) -> np.ndarray:
        x = np.atleast_2d(x)
        if self.matrix is not None:
            return np.einsum('ni,ij,nj->n', x, self.matrix, x)
        return self.poly.value(x)

    def surface_gradient(self, x: np.ndarray) -> np.ndarray:
        x = np.atleast_2d(x)
        if self.matrix is not None:
            return 2.0 * x @ self.matrix
        return self.poly.gradient(x)

    def surface_hessian(self, x: np.ndarray) -> np.ndarray:
        x = np.atleast_2d(x)
        if self.matrix is not None:
            return np.broadcast_to(2.0 * self.matrix,
                                   (x.shape[0],) + self.matrix.shape)
        return self.poly.hessian(x)

    def interior_sign(self) -> float:
        """Sign of F on the declared interior region."""
        c = self.star_center()
        return float(np.sign(self.surface_value(c[None, :])[0]))


def _normalize_quadric(A: np.ndarray) -> np.ndarray:
    A = 0.5 * (A + A.T)
    lam = np.linalg.eigvalsh(A)
    if np.abs(lam).min() < 1e-12 * np.abs(lam).max():
        raise NonConvexQuadricError("quadric matrix is singular")
    neg = int((lam < 0).sum())
    d = A.shape[0]
    if neg == d - 1:
        A = -A
        neg = 1
    if neg != 1:
        raise NonConvexQuadricError(
            f"signature has {neg} negative eigenvalues; a convex-bounding "
            "quadric needs exactly one after sign normalization")
    return A


def metric_sphere(n: int, radius: float) -> ConvexBody:
    """Metric sphere of geodesic radius r in RP^n: the quadric
    x_1^2 + ... + x_n^2 = tan(r)^2 x_0^2."""
    if not 0 < radius < pi / 2:
        raise BodyError("metric sphere radius must lie in (0, pi/2)")
    A = np.diag([-tan(radius) ** 2] + [1.0] * n)
    return ConvexBody("metric_sphere", n, True, matrix=A, radius=radius)


def affine_sphere(n: int, center, radius: float, chart: int = 0) -> ConvexBody:
    """Euclidean sphere in the affine chart x_chart = 1; convex in RP^n for
    any center and radius but not a metric sphere unless centered."""
    center = np.asarray(center, dtype=float)
    if center.shape != (n,):
        raise BodyError(f"center must have {n} chart coordinates")
    if radius <= 0:
        raise BodyError("radius must be positive")
    A = np.zeros((n + 1, n + 1))
    rest = [j for j in range(n + 1) if j != chart]
    A[rest, rest] = 1.0
    A[chart, rest] = -center
    A[rest, chart] = -center
    A[chart, chart] = center @ center - radius ** 2
    return ConvexBody("affine_sphere", n, True, matrix=_normalize_quadric(A),
                      radius=radius, chart=chart)


def ellipsoid(n: int, semiaxes, chart: int = 0) -> ConvexBody:
    """Axis-aligned ellipsoid in the affine chart x_chart = 1."""
    semiaxes = np.asarray(semiaxes, dtype=float)
    if semiaxes.shape != (n,) or (semiaxes <= 0).any():
        raise BodyError(f"need {n} positive semiaxes")
    diag = np.empty(n + 1)
    rest = [j for j in range(n + 1) if j != chart]
    diag[chart] = -1.0
    diag[rest] = 1.0 / semiaxes ** 2
    return ConvexBody("ellipsoid", n, True, matrix=np.diag(diag), chart=chart)


def quadric(A) -> ConvexBody:
    """General convex-bounding quadric {x^T A x = 0}; the matrix is sign
    normalized to a single negative eigenvalue and symmetrized."""
    A = np.asarray(A, dtype=float)
    n = A.shape[0] - 1
    return ConvexBody("quadric", n, True, matrix=_normalize_quadric(A))


def implicit_surface(n: int, coeffs, exponents, center=None,
                     convex: bool = False) -> ConvexBody:
    """Hypersurface {F = 0} for a homogeneous polynomial F, star-shaped
    around `center` (defaults to e_0).  Convexity is declared, not proven;
    the quadrature routines verify it at their nodes when required."""
    poly = HomogeneousPolynomial(np.asarray(coeffs, float),
                                 np.asarray(exponents, int))
    if poly.nvars != n + 1:
        raise BodyError(f"polynomial must have {n + 1} variables")
    if center is None:
        center = np.eye(n + 1)[0]
    center = np.asarray(center, dtype=float)
    center = center / np.linalg.norm(center)
    return ConvexBody("implicit", n, convex, poly=poly, center=center)


def rotate_body(body: ConvexBody, g: np.ndarray) -> ConvexBody:
    """Body moved by an orthogonal matrix: x lies on the moved body iff
    g^{-1} x lies on the original, so the quadric matrix maps to g A g^T."""
    if body.matrix is None:
        raise BodyError("only quadric-backed bodies support rotation")
    g = np.asarray(g, dtype=float)
    A = g @ body.matrix @ g.T
    return ConvexBody("quadric", body.n, body.convex,
                      matrix=0.5 * (A + A.T))


# ---------------------------------------------------------------------------
# body files

def parse_body_text(text: str, name: str = "<body>") -> ConvexBody:
    """Parse the key-value body format.

    Schema (one `key = value` per line, '#' starts a comment):

        kind = metric_sphere | affine_sphere | ellipsoid | quadric | implicit
        n = <int>
        radius = <float in radians>          # metric_sphere, affine_sphere
        center = <n floats>                  # affine_sphere (chart coords)
        semiaxes = <n floats>                # ellipsoid
        row = <n+1 floats>                   # quadric, one line per row
        term = <coeff> <n+1 integer exponents>   # implicit, repeated
        chart = <int>                        # optional, default 0
        convex = true | false                # implicit only, default false
    """
    fields: dict = {"row": [], "term": []}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise BodyFileError(lineno, f"expected 'key = value', got {raw.strip()!r}")
        key, _, value = line.partition("=")
        key = key.strip().lower()
        value = value.strip()
        try:
            if key == "kind":
                fields["kind"] = value.lower()
            elif key == "n":
                fields["n"] = int(value)
            elif key == "radius":
                fields["radius"] = float(value)
            elif key == "chart":
                fields["chart"] = int(value)
            elif key == "convex":
                fields["convex"] = value.lower() in ("true", "yes", "1")
            elif key in ("center", "semiaxes"):
                fields[key] = [float(t) for t in value.split()]
            elif key == "row":
                fields["row"].append([float(t) for t in value.split()])
            elif key == "term":
                parts = value.split()
                fields["term"].append((float(parts[0]),
                                       [int(t) for t in parts[1:]]))
            else:
                raise BodyFileError(lineno, f"unknown key {key!r}")
        except BodyFileError:
            raise
        except (ValueError, IndexError) as exc:
            raise BodyFileError(lineno, f"bad value for {key!r}: {exc}") from exc

    def require(key):
        if key not in fields:
            raise BodyFileError(0, f"{name}: missing required key {key!r}")
        return fields[key]

    kind = require("kind")
    n = require("n")
    chart = fields.get("chart", 0)
    try:
        if kind == "metric_sphere":
            return metric_sphere(n, require("radius"))
        if kind == "affine_sphere":
            return affine_sphere(n, require("center"), require("radius"), chart)
        if kind == "ellipsoid":
            return ellipsoid(n, require("semiaxes"), chart)
        if kind == "quadric":
            rows = fields["row"]
            if len(rows) != n + 1 or any(len(r) != n + 1 for r in rows):
                raise BodyFileError(0, f"{name}: quadric needs {n + 1} rows "
                                       f"of {n + 1} entries")
            return quadric(np.array(rows))
        if kind == "implicit":
            terms = fields["term"]
            if not terms:
                raise BodyFileError(0, f"{name}: implicit body needs terms")
            coeffs = [t[0] for t in terms]
            expo = [t[1] for t in terms]
            if any(len(e) != n + 1 for e in expo):
                raise BodyFileError(0, f"{name}: each term needs {n + 1} exponents")
            return implicit_surface(n, coeffs, expo,
                                    center=fields.get("center"),
                                    convex=fields.get("convex", False))
    except BodyError as exc:
        if isinstance(exc, BodyFileError):
            raise
        raise BodyFileError(0, f"{name}: {exc}") from exc
    raise BodyFileError(0, f"{name}: unknown body kind {kind!r}")


def parse_body_file(path) -> ConvexBody:
    with open(path) as fh:
        return parse_body_text(fh.read(), name=str(path))


def format_body(body: ConvexBody) -> str:
    """Serialize a body back to the key-value format."""
    def fmt(values):
        return " ".join(repr(float(v)) for v in values)

    lines = [f"kind = {body.kind}", f"n = {body.n}"]
    if body.kind == "metric_sphere":
        lines.append(f"radius = {float(body.radius)!r}")
    elif body.kind == "affine_sphere":
        A = body.matrix
        rest = [j for j in range(body.n + 1) if j != body.chart]
        lines.append("center = " + fmt(-A[body.chart, rest]))
        lines.append(f"radius = {float(body.radius)!r}")
        lines.append(f"chart = {body.chart}")
    elif body.kind == "ellipsoid":
        rest = [j for j in range(body.n + 1) if j != body.chart]
        semi = 1.0 / np.sqrt(np.diag(body.matrix)[rest])
        lines.append("semiaxes = " + fmt(semi))
        lines.append(f"chart = {body.chart}")
    elif body.kind == "quadric":
        for row in body.matrix:
            lines.append("row = " + fmt(row))
    elif body.kind == "implicit":
        for c, e in zip(body.poly.coeffs, body.poly.exponents):
            lines.append(f"term = {float(c)!r} " + " ".join(str(int(x)) for x in e))
        lines.append("center = " + fmt(body.center))
        lines.append(f"convex = {str(body.convex).lower()}")
    return "\n".join(lines) + "\n"
