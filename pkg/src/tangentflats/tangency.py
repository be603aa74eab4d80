"""Real lines tangent to four quadrics in RP^3 by homotopy continuation.

Tangency of a line to a quadric {x^T A x = 0} is a quadratic condition on
Pluecker coordinates, given by the second compound matrix of A; together
with the Pluecker quadric this yields five quadrics in P^5 with total
degree 2^5 = 32.  All 32 paths of a total-degree homotopy are tracked from
a start system of squared generic linear forms, with a random complex
factor on the start system so that paths avoid the real discriminant, a
predictor-corrector loop with adaptive steps, and renormalization to the
unit sphere of C^6 after every step (the patch row of the bordered Jacobian
is the conjugate of the current point).

Endpoints are polished with Newton on the target system, deduplicated, and
classified real when, after phase alignment and a real Newton polish, the
imaginary part is negligible.  Paths that stall just short of t = 1 but
polish onto the solution set are flagged singular rather than lost: they
occur systematically for families whose tangency quadrics share a
positive-dimensional complex solution component (affine spheres all touch
the imaginary conic of their chart at infinity), and such components carry
no real lines.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from multiprocessing import Pool

import numpy as np

from .projective import haar_matrices
from .rng import MCEstimate, RngStream

_PAIRS = list(itertools.combinations(range(4), 2))

#: Pluecker quadric p01 p23 - p02 p13 + p03 p12 as a symmetric 6x6 form.
PLUCKER_FORM = np.zeros((6, 6))
PLUCKER_FORM[0, 5] = PLUCKER_FORM[5, 0] = 0.5
PLUCKER_FORM[1, 4] = PLUCKER_FORM[4, 1] = -0.5
PLUCKER_FORM[2, 3] = PLUCKER_FORM[3, 2] = 0.5

_TOTAL_PATHS = 32
_STALL_T = 1e-4                 # paths stalling past 1 - _STALL_T may still polish
_RESIDUAL_TOL = 1e-10
_DEDUP_TOL = 1e-8
_REAL_RATIO = 1e-6
_BORDERLINE_RATIO = 1e-4


class PathFailureError(RuntimeError):
    """More than one percent of the homotopy paths were lost; carries the
    per-path log for diagnosis."""

    def __init__(self, message, path_log):
        super().__init__(message)
        self.path_log = path_log


class DegenerateConfigurationError(RuntimeError):
    """Configuration flagged degenerate (non-isolated or borderline-real
    solutions)."""


@dataclass(frozen=True)
class PluckerQuadric:
    """Symmetric quadratic form on Pluecker space cutting out the tangent
    lines of one quadric surface.

    For p the wedge of points u, v the value p^T M p equals
    (u^T A u)(v^T A v) - (u^T A v)^2: negative for secant lines, zero for
    tangents, positive for lines missing the real quadric.
    """

    matrix: np.ndarray

    def __post_init__(self):
        M = np.asarray(self.matrix, dtype=float)
        if M.shape != (6, 6) or np.abs(M - M.T).max() > 1e-10:
            raise ValueError("need a symmetric 6x6 matrix")
        object.__setattr__(self, "matrix", M)

    def value(self, p: np.ndarray) -> float:
        return float(p @ self.matrix @ p)


def second_compound(A: np.ndarray) -> np.ndarray:
    """Second compound matrix: entries are the 2x2 minors det(A[{i,j},{k,l}])
    over lexicographic index pairs."""
    M = np.empty((6, 6))
    for a, (i, j) in enumerate(_PAIRS):
        for b, (k, l) in enumerate(_PAIRS):
            M[a, b] = A[i, k] * A[j, l] - A[i, l] * A[j, k]
    return M


def tangency_quadric_of(A: np.ndarray) -> PluckerQuadric:
    """Tangency condition of the quadric {x^T A x = 0} on Pluecker space."""
    A = np.asarray(A, dtype=float)
    if A.shape != (4, 4):
        raise ValueError("tangency quadrics are built from 4x4 matrices")
    if abs(np.linalg.det(A)) < 1e-12 * np.linalg.norm(A) ** 4:
        raise ValueError("quadric matrix must be nonsingular")
    return PluckerQuadric(second_compound(0.5 * (A + A.T)))


@dataclass(frozen=True)
class SolutionSet:
    """Result of one tangency solve.

    solutions holds the polished endpoints with residual below tolerance on
    all five equations, unit-normalized in C^6; multiplicities counts the
    paths that merged into each.  real_solutions is the subset that passed
    the reality test.  Path accounting: tracked + singular + failed = 32.
    """

    solutions: np.ndarray           # (S, 6) complex
    residuals: np.ndarray           # (S,)
    multiplicities: np.ndarray      # (S,) int
    real_solutions: np.ndarray      # (R, 6) float
    tracked: int
    singular: int
    failed: int
    merged: int
    borderline: int
    real_singular: int
    nonisolated: int

    @property
    def real_count(self) -> int:
        return self.real_solutions.shape[0]

    @property
    def finite_with_multiplicity(self) -> int:
        return int(self.multiplicities.sum())

    @property
    def degenerate(self) -> bool:
        """Non-isolated behavior that makes the real count unreliable:
        merged endpoints, borderline reality, a real solution with
        rank-deficient Jacobian, or cleanly tracked paths landing on a
        rank-deficient endpoint (a positive-dimensional solution set, as for
        a repeated quadric).

        Paths that stall just before t = 1 and polish onto a rank-deficient
        endpoint are NOT flagged: they indicate a complex excess component
        (as for four spheres) that carries no countable real lines, and are
        reported in `singular` instead.
        """
        return (self.merged > 0 or self.borderline > 0
                or self.real_singular > 0 or self.nonisolated > 0)


def _normalize_forms(quadrics) -> np.ndarray:
    Ms = []
    for Q in quadrics:
        M = Q.matrix if isinstance(Q, PluckerQuadric) else np.asarray(Q, float)
        Ms.append(M / np.linalg.norm(M))
    Ms.append(PLUCKER_FORM / np.linalg.norm(PLUCKER_FORM))
    return np.array(Ms)


def _start_points(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    starts = np.empty((_TOTAL_PATHS, 6), dtype=complex)
    for idx, signs in enumerate(itertools.product((1.0, -1.0), repeat=5)):
        L = a - np.array(signs)[:, None] * b
        _, _, vh = np.linalg.svd(L)
        starts[idx] = vh[-1].conj()
    return starts / np.linalg.norm(starts, axis=1, keepdims=True)


def solve_tangency_system(quadrics, rng: RngStream, max_steps: int = 4000,
                          retries: int = 2) -> SolutionSet:
    """Track all 32 total-degree paths for four tangency quadrics plus the
    Pluecker quadric and classify the endpoints.

    A solve that loses paths is retried with a fresh random path-rotation
    constant (derived deterministically from the stream); once the retry
    budget is exhausted PathFailureError carries the per-path log.
    """
    if len(quadrics) != 4:
        raise ValueError("need exactly four tangency quadrics")
    last_error = None
    for attempt in range(retries + 1):
        try:
            return _solve_once(quadrics, rng.substream(attempt), max_steps)
        except PathFailureError as exc:
            last_error = exc
    raise last_error


def _solve_once(quadrics, rng: RngStream, max_steps: int) -> SolutionSet:
    Ms = _normalize_forms(quadrics)
    gen = rng.generator()
    gam = np.exp(2j * np.pi * gen.uniform())
    a = gen.standard_normal((5, 6)) + 1j * gen.standard_normal((5, 6))
    b = gen.standard_normal((5, 6)) + 1j * gen.standard_normal((5, 6))
    p = _start_points(a, b)

    def target(pp):
        return np.einsum('bi,sij,bj->bs', pp, Ms, pp)

    def start(pp):
        ap = pp @ a.T
        bp = pp @ b.T
        return ap ** 2 - bp ** 2

    def homotopy(pp, tt):
        return (1 - tt)[:, None] * gam * start(pp) + tt[:, None] * target(pp)

    def jacobian(pp, tt):
        JF = 2.0 * np.einsum('sij,bj->bsi', Ms, pp)
        ap = pp @ a.T
        bp = pp @ b.T
        JG = 2.0 * (ap[:, :, None] * a[None, :, :] - bp[:, :, None] * b[None, :, :])
        return (1 - tt)[:, None, None] * gam * JG + tt[:, None, None] * JF

    def dhomotopy_dt(pp):
        return target(pp) - gam * start(pp)

    def bordered_solve(J, patch, rhs):
        Jb = np.empty((J.shape[0], 6, 6), dtype=complex)
        Jb[:, :5] = J
        Jb[:, 5] = patch
        try:
            return np.linalg.solve(Jb, rhs[..., None])[..., 0], \
                np.ones(J.shape[0], dtype=bool)
        except np.linalg.LinAlgError:
            out = np.zeros_like(rhs)
            ok = np.ones(J.shape[0], dtype=bool)
            for q in range(J.shape[0]):
                try:
                    out[q] = np.linalg.solve(Jb[q], rhs[q])
                except np.linalg.LinAlgError:
                    ok[q] = False
            return out, ok

    B = _TOTAL_PATHS
    t = np.zeros(B)
    dt = np.full(B, 0.1)
    active = np.ones(B, dtype=bool)
    stalled_t = np.zeros(B)
    steps = 0
    while active.any() and steps < max_steps:
        steps += 1
        idx = np.where(active)[0]
        pc, tc = p[idx], t[idx]
        t_new = np.minimum(tc + dt[idx], 1.0)
        rhs = np.zeros((len(idx), 6), dtype=complex)
        rhs[:, :5] = -dhomotopy_dt(pc) * (t_new - tc)[:, None]
        dp, ok0 = bordered_solve(jacobian(pc, tc), pc.conj(), rhs)
        pn = pc + dp
        ok = ok0.copy()
        prev = None
        for _ in range(3):
            rhs2 = np.zeros((len(idx), 6), dtype=complex)
            rhs2[:, :5] = -homotopy(pn, t_new)
            dd, okc = bordered_solve(jacobian(pn, t_new), pn.conj(), rhs2)
            ok &= okc
            pn = pn + dd
            nrm = np.linalg.norm(dd, axis=1)
            if prev is not None:
                ok &= (nrm <= 0.5 * prev) | (nrm < 1e-12)
            prev = nrm
        ok &= prev < 1e-9
        acc = idx[ok]
        p[acc] = pn[ok] / np.linalg.norm(pn[ok], axis=1, keepdims=True)
        t[acc] = t_new[ok]
        dt[acc] = np.minimum(dt[acc] * 1.5, 0.1)
        dt[idx[~ok]] *= 0.5
        dead = active & (dt < 1e-9)
        stalled_t[dead] = t[dead]
        active &= ~dead
        active[t >= 1.0] = False

    stalled_t[active] = t[active]           # ran out of steps
    reached = (t >= 1.0)
    near = (~reached) & (stalled_t >= 1.0 - _STALL_T)

    # polish everything at t = 1 with guarded minimum-norm Newton steps: the
    # pseudo-inverse handles endpoints on positive-dimensional components,
    # where the bordered Jacobian is rank deficient and a plain solve blows up
    for _ in range(12):
        res_now = np.abs(target(p)).max(axis=1)
        if (res_now < 1e-15).all():
            break
        Jb = np.empty((B, 6, 6), dtype=complex)
        Jb[:, :5] = jacobian(p, np.ones(B))
        Jb[:, 5] = p.conj()
        rhs = np.zeros((B, 6), dtype=complex)
        rhs[:, :5] = -target(p)
        dd = np.einsum('bij,bj->bi', np.linalg.pinv(Jb, rcond=1e-12), rhs)
        p_try = p + dd
        p_try = p_try / np.linalg.norm(p_try, axis=1, keepdims=True)
        res_try = np.abs(target(p_try)).max(axis=1)
        improved = res_try < res_now
        p[improved] = p_try[improved]
        if not improved.any():
            break
    residuals = np.abs(target(p)).max(axis=1)

    good = (reached | near) & (residuals < _RESIDUAL_TOL)
    tracked_clean = reached & (residuals < _RESIDUAL_TOL)
    singular = near & (residuals < _RESIDUAL_TOL)
    lost = ~good
    if lost.sum() > 0.01 * _TOTAL_PATHS:
        log = [f"path {i}: stalled at t = {stalled_t[i]:.12f}, "
               f"residual {residuals[i]:.3e}" for i in np.where(lost)[0]]
        raise PathFailureError(
            f"{lost.sum()} of {_TOTAL_PATHS} paths lost before t = 1", log)
    sols = p[good]
    res = residuals[good]

    # rank of the bordered Jacobian at every good endpoint: a clean track
    # onto a rank-deficient endpoint means the target solution set itself is
    # positive dimensional there (non-transverse configuration)
    Jb_end = np.empty((int(good.sum()), 6, 6), dtype=complex)
    Jb_end[:, :5] = jacobian(sols, np.ones(int(good.sum())))
    Jb_end[:, 5] = sols.conj()
    sv = np.linalg.svd(Jb_end, compute_uv=False)
    rank_deficient = sv[:, -1] < 1e-7 * sv[:, 0]
    nonisolated = int((rank_deficient & tracked_clean[good]).sum())

    # dedup by phase-aligned distance
    order = np.argsort(res)
    kept: list[int] = []
    mult: list[int] = []
    for i in order:
        merged_into = None
        for j, kdx in enumerate(kept):
            ov = np.vdot(sols[kdx], sols[i])
            dist = np.linalg.norm(sols[i] * np.exp(-1j * np.angle(ov)) - sols[kdx]) \
                if abs(ov) > 0 else 2.0
            if dist < _DEDUP_TOL:
                merged_into = j
                break
        if merged_into is None:
            kept.append(i)
            mult.append(1)
        else:
            mult[merged_into] += 1
    solutions = sols[kept]
    residuals_kept = res[kept]
    multiplicities = np.array(mult, dtype=int)
    merged = int((multiplicities > 1).sum())

    # reality classification with a real Newton polish; a real solution with
    # rank-deficient Jacobian signals a non-isolated real family
    real_pts = []
    borderline = 0
    real_singular = 0
    for i, sol in enumerate(solutions):
        m = np.argmax(np.abs(sol))
        aligned = sol * (sol[m].conj() / abs(sol[m]))
        ratio = np.linalg.norm(aligned.imag) / np.linalg.norm(aligned.real)
        if ratio >= _BORDERLINE_RATIO:
            continue
        x = aligned.real / np.linalg.norm(aligned.real)
        for _ in range(8):
            J = 2.0 * np.einsum('sij,j->si', Ms, x)
            Jb = np.vstack([J, x[None, :]])
            r = np.concatenate([-np.einsum('i,sij,j->s', x, Ms, x), [0.0]])
            step, *_ = np.linalg.lstsq(Jb, r, rcond=1e-12)
            x = x + step
            x = x / np.linalg.norm(x)
        real_res = np.abs(np.einsum('i,sij,j->s', x, Ms, x)).max()
        is_real = ratio < _REAL_RATIO and real_res < _RESIDUAL_TOL
        if is_real:
            J = 2.0 * np.einsum('sij,j->si', Ms, x)
            sv = np.linalg.svd(np.vstack([J, x[None, :]]), compute_uv=False)
            if sv[-1] < 1e-7 * sv[0]:
                real_singular += 1
            real_pts.append(x)
        else:
            borderline += 1
    real_solutions = np.array(real_pts) if real_pts else np.empty((0, 6))

    return SolutionSet(
        solutions=solutions,
        residuals=residuals_kept,
        multiplicities=multiplicities,
        real_solutions=real_solutions,
        tracked=int(tracked_clean.sum()),
        singular=int(singular.sum()),
        failed=int(lost.sum()),
        merged=merged,
        borderline=borderline,
        real_singular=real_singular,
        nonisolated=nonisolated,
    )


def count_real_tangent_lines(bodies, rotations, rng: RngStream) -> int:
    """Number of real lines tangent to four rotated quadric bodies in RP^3.

    The moved body g X has matrix g A g^T (membership: x in gX iff g^T x
    in X).  Raises DegenerateConfigurationError for non-isolated or
    borderline draws.
    """
    if len(bodies) != 4 or len(rotations) != 4:
        raise ValueError("need four bodies and four rotations")
    quadrics = []
    for body, g in zip(bodies, rotations):
        g = g.g if hasattr(g, "g") else np.asarray(g, float)
        A = body.defining_matrix()
        quadrics.append(tangency_quadric_of(g @ A @ g.T))
    sols = solve_tangency_system(quadrics, rng)
    if sols.degenerate:
        raise DegenerateConfigurationError(
            f"merged endpoints: {sols.merged}, borderline reality: "
            f"{sols.borderline}, singular real solutions: "
            f"{sols.real_singular}, non-isolated endpoints: {sols.nonisolated}")
    return sols.real_count


def _tau_trial(args):
    bodies, seed, trial = args
    stream = RngStream(seed, trial)
    gen = stream.generator()
    gs = haar_matrices(4, 4, gen)
    try:
        return count_real_tangent_lines(bodies, gs, stream.substream(1 << 32))
    except (DegenerateConfigurationError, PathFailureError):
        return -1


def average_tangent_count_empirical(bodies, trials: int, seed: int,
                                    workers: int = 1) -> MCEstimate:
    """Empirical average of real tangent-line counts over independent Haar
    rotation 4-tuples of the given bodies.

    Degenerate draws are discarded and reported; more than five percent of
    them raises a diagnostic error.
    """
    if trials < 1:
        raise ValueError("need trials >= 1")
    tasks = [(tuple(bodies), seed, i) for i in range(trials)]
    if workers > 1:
        with Pool(workers) as pool:
            counts = pool.map(_tau_trial, tasks)
    else:
        counts = [_tau_trial(t) for t in tasks]
    counts = np.array(counts)
    ok = counts[counts >= 0]
    degenerate = int((counts < 0).sum())
    if degenerate > 0.05 * trials:
        raise DegenerateConfigurationError(
            f"{degenerate} of {trials} trials degenerate; inspect the bodies")
    mean = float(ok.mean())
    stderr = float(ok.std(ddof=1) / np.sqrt(ok.size)) if ok.size > 1 else 0.0
    return MCEstimate(mean, stderr, int(ok.size), seed, degenerate=degenerate)
