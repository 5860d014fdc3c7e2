"""Self-map tests for linear fractional maps of the unit ball.

Three routes are implemented and cross-checked rather than collapsed:

* a per-row inequality on the image ellipsoid (fast, one-sided),
* an exact oracle comparing the ellipsoid sup norm against 1,
* a Krein-space contraction test searching for a feasible scale t with
  J - t^2 m* J m positive semidefinite, J = diag(I, -1).

Agreement between the row test and the oracle is measured, never
assumed.  Classification of verified self-maps follows the orbit of the
origin, accelerated by repeated squaring of the associated matrix so
that slowly attracting boundary fixed points are resolved sharply.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import linalg
from .errors import ContractViolation, PoleError
from .geometry import (
    EllipsoidImage,
    ellipsoid_sup_norm,
    image_ellipsoid,
    involution_matrix,
)
from .lfm import LFMap, evaluate, evaluate_batch, from_associated_matrix

ROW_REL_TOL = 1e-10
ORACLE_TOL = 1e-9
KREIN_PSD_TOL = 1e-10
KREIN_GRID_POINTS = 121
KREIN_GRID_DECADES = (-6.0, 6.0)
SAMPLE_CHUNK = 4096

CLASS_INTERIOR = "interior_fixed_point"
CLASS_BOUNDARY = "boundary_denjoy_wolff"
CLASS_NOT_SELFMAP = "not_selfmap"


@dataclass(frozen=True)
class KreinForm:
    """The indefinite metric diag(I, -1) together with a feasible scale."""

    metric: np.ndarray
    t: float


@dataclass(frozen=True)
class CriterionReport:
    """Outcome of all self-map tests on one map.

    row_lhs and rhs are stated at the scale of the unnormalized
    coefficients, where rhs = (|d|^2 - |c|^2)^2.  classification is one
    of interior_fixed_point, boundary_denjoy_wolff, not_selfmap, and
    fixed_point carries the orbit limit when one was computed.
    discrepancy_flag records row-test vs oracle disagreement.
    """

    row_lhs: tuple[float, ...]
    rhs: float
    row_verdict: tuple[bool, ...]
    criterion_selfmap: bool
    oracle_sup: float
    oracle_selfmap: bool
    krein_t: float | None
    classification: str
    fixed_point: tuple[complex, ...] | None
    discrepancy_flag: bool


def krein_metric(n: int) -> np.ndarray:
    j = np.eye(n + 1, dtype=np.complex128)
    j[n, n] = -1.0
    return j


def row_criterion(
    phi: LFMap, rel_tol: float = ROW_REL_TOL
) -> tuple[np.ndarray, float, np.ndarray]:
    """Per-row ellipsoid test.

    Row i compares |center|^2 + |r_i|^2 - 2 Re<center, r_i> against 1,
    where r_i is the conjugate transpose of the i-th row of the image
    ellipsoid's shape matrix; both sides are then rescaled by
    (|d|^2 - |c|^2)^2.  Returns (row_lhs, rhs, verdicts); the verdict
    allows rel_tol of slack relative to rhs.  Rows at or below the bound
    are necessary for the map to send the ball into itself, but the test
    probes only finitely many directions: compare with the sup oracle.
    """
    if not phi.pole_free_on_ball:
        raise PoleError("row criterion needs a pole-free map")
    scale = (abs(phi.d) ** 2 - float(np.linalg.norm(phi.c)) ** 2) ** 2
    if float(np.linalg.norm(phi.c)) == 0.0:
        lhs, verdicts = linear_criterion(phi, rel_tol=rel_tol)
        return lhs * scale, float(scale), verdicts
    ell = image_ellipsoid(phi)
    center = ell.center
    rows = np.conj(ell.shape)
    c2 = float(np.vdot(center, center).real)
    lhs = np.empty(phi.dim)
    for i in range(phi.dim):
        r = rows[i, :]
        lhs[i] = c2 + float(np.vdot(r, r).real) - 2.0 * float(np.vdot(r, center).real)
    verdicts = lhs <= 1.0 + rel_tol
    return lhs * scale, float(scale), verdicts


def linear_criterion(phi: LFMap, rel_tol: float = ROW_REL_TOL):
    """Row test specialized to affine maps (c = 0), at denominator 1.

    Returns (row_lhs, verdicts) with the bound at 1.
    """
    if float(np.linalg.norm(phi.c)) != 0.0:
        raise ContractViolation("linear criterion needs c = 0")
    a = phi.a / phi.d
    b = phi.b / phi.d
    b2 = float(np.vdot(b, b).real)
    lhs = np.empty(phi.dim)
    for i in range(phi.dim):
        r = np.conj(a[i, :])
        lhs[i] = b2 + float(np.vdot(r, r).real) - 2.0 * float(np.vdot(r, b).real)
    return lhs, lhs <= 1.0 + rel_tol


def krein_check(
    phi: LFMap,
    psd_tol: float = KREIN_PSD_TOL,
    grid_points: int = KREIN_GRID_POINTS,
) -> float | None:
    """Search for t > 0 making J - t^2 m* J m positive semidefinite.

    The smallest eigenvalue of that matrix is concave in t^2, so a
    logarithmic grid over [1e-6, 1e6] followed by golden-section
    refinement of the best bracket finds its maximum; feasibility means
    the maximum is >= -psd_tol.  Returns the feasible t or None.
    """
    m = phi.associated_matrix()
    j = krein_metric(phi.dim)
    h = m.conj().T @ j @ m
    h = (h + h.conj().T) / 2.0

    def worst_eig(t: float) -> float:
        pencil = j - (t * t) * h
        return float(np.linalg.eigvalsh((pencil + pencil.conj().T) / 2.0)[0])

    ts = np.logspace(KREIN_GRID_DECADES[0], KREIN_GRID_DECADES[1], grid_points)
    vals = np.array([worst_eig(t) for t in ts])
    best = int(np.argmax(vals))
    lo = ts[max(best - 1, 0)]
    hi = ts[min(best + 1, grid_points - 1)]
    invphi = (np.sqrt(5.0) - 1.0) / 2.0
    x1 = hi - invphi * (hi - lo)
    x2 = lo + invphi * (hi - lo)
    f1, f2 = worst_eig(x1), worst_eig(x2)
    while hi - lo > 1e-12 * hi:
        if f1 >= f2:
            hi, x2, f2 = x2, x1, f1
            x1 = hi - invphi * (hi - lo)
            f1 = worst_eig(x1)
        else:
            lo, x1, f1 = x1, x2, f2
            x2 = lo + invphi * (hi - lo)
            f2 = worst_eig(x2)
    t_best = x1 if f1 >= f2 else x2
    f_best = max(f1, f2, vals[best])
    if f_best == vals[best]:
        t_best = float(ts[best])
    if f_best >= -psd_tol:
        return float(t_best)
    return None


def oracle_is_selfmap(phi: LFMap, tol: float = ORACLE_TOL) -> tuple[float, bool]:
    """Exact verdict: the ellipsoid sup norm compared against 1."""
    if not phi.pole_free_on_ball:
        raise PoleError("sup-norm oracle needs a pole-free map")
    sup = ellipsoid_sup_norm(image_ellipsoid(phi))
    return sup, bool(sup <= 1.0 + tol)


def sphere_points(count: int, dim: int, seed: int) -> np.ndarray:
    """Uniform points on the unit sphere of C^dim, deterministic per seed.

    Samples are drawn in fixed-size chunks, each from its own seeded
    substream, so the result does not depend on how chunks are executed.
    """
    base = int(seed) % 2**63
    out = np.empty((count, dim), dtype=np.complex128)
    done = 0
    chunk_index = 0
    while done < count:
        rng = np.random.default_rng([base, chunk_index])
        g = rng.standard_normal((SAMPLE_CHUNK, 2 * dim))
        z = g[:, ::2] + 1j * g[:, 1::2]
        z /= np.linalg.norm(z, axis=1)[:, None]
        take = min(SAMPLE_CHUNK, count - done)
        out[done : done + take] = z[:take]
        done += take
        chunk_index += 1
    return out


def monte_carlo_sup(phi: LFMap, count: int, seed: int) -> float:
    """Largest |phi(z)| over uniformly sampled boundary points."""
    best = 0.0
    done = 0
    chunk_index = 0
    base = int(seed) % 2**63
    while done < count:
        rng = np.random.default_rng([base, chunk_index])
        g = rng.standard_normal((SAMPLE_CHUNK, 2 * phi.dim))
        z = g[:, ::2] + 1j * g[:, 1::2]
        z /= np.linalg.norm(z, axis=1)[:, None]
        take = min(SAMPLE_CHUNK, count - done)
        images = evaluate_batch(phi, z[:take])
        best = max(best, float(np.max(np.linalg.norm(images, axis=1))))
        done += take
        chunk_index += 1
    return best


def _origin_orbit(phi: LFMap, max_doublings: int = 100):
    """Orbit of 0 under phi, phi^2, phi^4, ... via matrix squaring.

    Returns (converged, point) where point is the limit when the step
    between successive iterates fell below 1e-12, else the last iterate.
    Squaring reaches iterate counts far beyond what stepwise evaluation
    could, which pins down slowly attracting boundary limits.
    """
    n = phi.dim
    m = phi.associated_matrix()
    m = m / np.max(np.abs(m))
    prev = None
    point = None
    for _ in range(max_doublings):
        den = m[n, n]
        if abs(den) <= 1e-250 * np.max(np.abs(m)):
            break
        point = m[:n, n] / den
        if prev is not None and np.linalg.norm(point - prev) < 1e-12:
            return True, point
        prev = point
        m = m @ m
        m = m / np.max(np.abs(m))
    return False, point if point is not None else np.zeros(n, dtype=np.complex128)


def _charpoly(m: np.ndarray) -> np.ndarray:
    """Characteristic polynomial coefficients, leading first.

    Faddeev-LeVerrier recurrence; unlike root-finding from computed
    eigenvalues this keeps exact coefficients for exactly represented
    matrices, which is what makes multiple-eigenvalue polishing work.
    """
    k = m.shape[0]
    coeffs = np.empty(k + 1, dtype=np.complex128)
    coeffs[0] = 1.0
    work = np.zeros_like(m)
    for i in range(1, k + 1):
        work = m @ (work + coeffs[i - 1] * np.eye(k))
        coeffs[i] = -np.trace(work) / i
    return coeffs


def _refine_boundary_point(phi: LFMap, approx: np.ndarray) -> np.ndarray:
    """Sharpen a boundary fixed point found by iteration.

    The point solves m (p, 1) = lam (p, 1) with lam the denominator at
    p.  Plain eigensolvers lose half the digits when lam is defective
    (the parabolic case), so instead: cluster the computed eigenvalues
    around the iterate's lam, polish lam as a root of the (k-1)-th
    derivative of the characteristic polynomial (a simple root there,
    hence well conditioned), then project the homogeneous iterate onto
    the small-singular-value subspace of m - lam I.  Falls back to the
    unrefined point whenever a step looks unreliable.
    """
    n = phi.dim
    m = phi.associated_matrix()
    mx = float(np.max(np.abs(m)))
    m = m / mx
    lam0 = (np.vdot(phi.c, approx) + phi.d) / mx
    eigs = np.linalg.eigvals(m)
    scale = max(1.0, float(np.max(np.abs(eigs))))
    cluster = eigs[np.abs(eigs - lam0) <= 1e-3 * scale]
    k = max(1, cluster.size)
    poly = np.polynomial.Polynomial(_charpoly(m)[::-1])
    for _ in range(k - 1):
        poly = poly.deriv()
    dpoly = poly.deriv()
    lam = complex(np.mean(cluster)) if cluster.size else complex(lam0)
    for _ in range(60):
        slope = dpoly(lam)
        if abs(slope) < 1e-300:
            break
        step = poly(lam) / slope
        lam -= step
        if abs(step) < 1e-15 * max(1.0, abs(lam)):
            break
    if abs(lam - lam0) > 1e-2 * scale:
        lam = complex(lam0)
    _, sing, vh = np.linalg.svd(m - lam * np.eye(n + 1))
    keep = sing <= max(1e-6 * scale, sing[-1] * (1.0 + 1e-12))
    basis = vh[keep, :].conj().T
    hom = np.append(approx, 1.0)
    v = basis @ (basis.conj().T @ hom)
    if abs(v[n]) < 1e-6 * np.linalg.norm(v):
        return approx
    candidate = v[:n] / v[n]
    if np.linalg.norm(candidate - approx) > 1e-3 * (1.0 + np.linalg.norm(approx)):
        return approx
    try:
        old = float(np.linalg.norm(evaluate(phi, approx) - approx))
        new = float(np.linalg.norm(evaluate(phi, candidate) - candidate))
    except PoleError:
        return approx
    return candidate if new <= max(old, 1e-12) else approx


def _interior_fixed_point(phi: LFMap, tol: float) -> np.ndarray | None:
    """Fixed point inside the open ball, from eigenvectors of m.

    phi(p) = p exactly when m maps the homogeneous vector (p, 1) to a
    multiple of itself, so interior fixed points sit among projective
    eigenvectors with nonzero last component.
    """
    n = phi.dim
    m = phi.associated_matrix()
    _, vecs = np.linalg.eig(m)
    best = None
    best_norm = np.inf
    for k in range(n + 1):
        v = vecs[:, k]
        if abs(v[n]) <= 1e-9 * np.linalg.norm(v):
            continue
        p = v[:n] / v[n]
        pnorm = float(np.linalg.norm(p))
        if pnorm >= 1.0 - tol:
            continue
        if np.linalg.norm(evaluate(phi, p) - p) > 1e-8 * (1.0 + pnorm):
            continue
        if pnorm < best_norm:
            best, best_norm = p, pnorm
    return best


def classify_fixed_point(
    phi: LFMap, oracle_sup: float, tol: float = ORACLE_TOL
) -> tuple[str, np.ndarray | None]:
    """Classify a verified self-map and locate the relevant fixed point.

    A sup norm strictly below 1 keeps the image compactly inside the
    ball, forcing an interior fixed point.  At boundary contact the
    orbit of 0 decides: convergence to an interior point classifies as
    interior; otherwise the orbit limit is the attracting boundary
    point and is reported.  Interior fixed points are read off the
    eigenvectors of the associated matrix rather than the orbit, since
    periodic orbits (an involution, say) stall at points that are not
    fixed.
    """
    if oracle_sup > 1.0 + tol:
        return CLASS_NOT_SELFMAP, None
    if oracle_sup < 1.0 - tol:
        found = _interior_fixed_point(phi, tol)
        if found is not None:
            return CLASS_INTERIOR, found
        return CLASS_INTERIOR, _origin_orbit(phi)[1]
    converged, point = _origin_orbit(phi)
    if converged and float(np.linalg.norm(point)) < 1.0 - tol:
        found = _interior_fixed_point(phi, tol)
        return CLASS_INTERIOR, found if found is not None else point
    return CLASS_BOUNDARY, _refine_boundary_point(phi, point)


def check(
    phi: LFMap,
    row_rel_tol: float = ROW_REL_TOL,
    oracle_tol: float = ORACLE_TOL,
    krein_psd_tol: float = KREIN_PSD_TOL,
) -> CriterionReport:
    """Run every self-map test on one pole-free map and bundle the results."""
    row_lhs, rhs, row_ok = row_criterion(phi, rel_tol=row_rel_tol)
    criterion_selfmap = bool(np.all(row_ok))
    oracle_sup, oracle_ok = oracle_is_selfmap(phi, tol=oracle_tol)
    krein_t = krein_check(phi, psd_tol=krein_psd_tol)
    classification, point = classify_fixed_point(phi, oracle_sup, tol=oracle_tol)
    return CriterionReport(
        row_lhs=tuple(float(x) for x in row_lhs),
        rhs=float(rhs),
        row_verdict=tuple(bool(v) for v in row_ok),
        criterion_selfmap=criterion_selfmap,
        oracle_sup=float(oracle_sup),
        oracle_selfmap=bool(oracle_ok),
        krein_t=krein_t,
        classification=classification,
        fixed_point=None if point is None else tuple(complex(x) for x in point),
        discrepancy_flag=bool(criterion_selfmap != oracle_ok),
    )


def random_unitary(n: int, rng: np.random.Generator) -> np.ndarray:
    g = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    q, r = np.linalg.qr(g)
    phases = np.diag(r).copy()
    phases /= np.abs(phases)
    return q * phases


def random_selfmap_shaped(
    n: int, rng: np.random.Generator, target_sup: float
) -> LFMap:
    """A map built as an ellipsoid placement after a ball automorphism.

    Scaling the placement makes the image sup norm land on target_sup
    exactly, so both self-maps and near-misses can be manufactured with
    a controlled margin.
    """
    g = rng.standard_normal(2 * n)
    alpha = (g[::2] + 1j * g[1::2])
    alpha *= 0.7 * rng.uniform(0.1, 1.0) / np.linalg.norm(alpha)
    shape = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    shape /= np.linalg.svd(shape, compute_uv=False)[0]
    shape *= rng.uniform(0.4, 1.0)
    center = 0.3 * (rng.standard_normal(n) + 1j * rng.standard_normal(n))
    inv_m = np.zeros((n + 1, n + 1), dtype=np.complex128)
    inv_m[:n, :n] = involution_matrix(alpha)
    inv_m[:n, n] = alpha
    inv_m[n, :n] = np.conj(-alpha)
    inv_m[n, n] = 1.0

    def build(sh, ce):
        place = np.eye(n + 1, dtype=np.complex128)
        place[:n, :n] = sh
        place[:n, n] = ce
        return from_associated_matrix(place @ inv_m)

    phi = build(shape, center)
    current = ellipsoid_sup_norm(image_ellipsoid(phi))
    factor = target_sup / current
    return build(shape * factor, center * factor)


def random_pole_free_map(n: int, rng: np.random.Generator) -> LFMap:
    """A random map whose poles avoid the closed ball, O(1) coefficients."""
    a = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    b = 0.7 * (rng.standard_normal(n) + 1j * rng.standard_normal(n))
    c = 0.6 * (rng.standard_normal(n) + 1j * rng.standard_normal(n))
    d = (np.linalg.norm(c) + 0.3 + 0.5 * abs(rng.standard_normal())) * np.exp(
        2j * np.pi * rng.uniform()
    )
    return LFMap(a, b, c, d)


def agreement_table(count: int, seed: int, dims=(1, 2, 3, 4)) -> dict:
    """Measured row-test vs oracle agreement over a random map ensemble.

    Rows alternate between shaped maps with a prescribed sup norm on
    either side of 1 and raw pole-free maps.  Returns a dict with one
    row per map and summary counts; fully deterministic per seed.
    """
    base = int(seed) % 2**63
    rows = []
    agree = both_true = both_false = criterion_only = oracle_only = 0
    for idx in range(count):
        n = dims[idx % len(dims)]
        rng = np.random.default_rng([base, 7, idx])
        if idx % 2 == 0:
            target = rng.uniform(0.5, 1.5)
            while abs(target - 1.0) < 1e-4:
                target = rng.uniform(0.5, 1.5)
            phi = random_selfmap_shaped(n, rng, target)
        else:
            phi = random_pole_free_map(n, rng)
        lhs, rhs, ok = row_criterion(phi)
        crit = bool(np.all(ok))
        sup, oracle_ok = oracle_is_selfmap(phi)
        rows.append(
            {
                "index": idx,
                "dim": n,
                "criterion_selfmap": crit,
                "oracle_selfmap": oracle_ok,
                "oracle_sup": float(sup),
                "max_row_excess": float(np.max(lhs / rhs)) if rhs > 0 else float("inf"),
                "agree": crit == oracle_ok,
            }
        )
        if crit == oracle_ok:
            agree += 1
        if crit and oracle_ok:
            both_true += 1
        elif not crit and not oracle_ok:
            both_false += 1
        elif crit and not oracle_ok:
            criterion_only += 1
        else:
            oracle_only += 1
    return {
        "count": count,
        "seed": int(seed),
        "rows": rows,
        "summary": {
            "agree": agree,
            "disagree": count - agree,
            "both_true": both_true,
            "both_false": both_false,
            "criterion_only": criterion_only,
            "oracle_only": oracle_only,
        },
    }
