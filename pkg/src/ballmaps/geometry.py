"""Geometry of the complex unit ball under linear fractional maps.

Covers the standard involutive automorphisms of the ball, the exact
ellipsoid image of the ball under a pole-free map, and the sup norm of
a point set {center + shape @ v : |v| <= 1}.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import linalg
from .errors import ContractViolation, DegenerateMapError, PoleError, ShapeError
from .lfm import LFMap

SUP_MAX_BISECT = 200


def project_alpha(alpha, z) -> tuple[np.ndarray, np.ndarray]:
    """Split z into its components along and orthogonal to alpha.

    Returns (p, q) with p the orthogonal projection of z onto the span
    of alpha and q = z - p.  For alpha = 0 the projection is zero.
    """
    alpha = linalg.as_vector(alpha)
    z = linalg.as_vector(z)
    if alpha.shape != z.shape:
        raise ShapeError(f"shape mismatch: alpha {alpha.shape}, z {z.shape}")
    norm2 = float(np.vdot(alpha, alpha).real)
    if norm2 == 0.0:
        return np.zeros_like(z), z.copy()
    p = (np.vdot(alpha, z) / norm2) * alpha
    return p, z - p


def ball_involution(alpha, z) -> np.ndarray:
    """The involutive ball automorphism exchanging 0 and alpha.

    For alpha = 0 this is z -> -z.  Requires |alpha| < 1.
    """
    alpha = linalg.as_vector(alpha)
    z = linalg.as_vector(z)
    anorm = float(np.linalg.norm(alpha))
    if anorm >= 1.0:
        raise ContractViolation(f"|alpha| = {anorm:.3f} must be < 1")
    if anorm == 0.0:
        return -z
    p, q = project_alpha(alpha, z)
    s = np.sqrt(1.0 - anorm**2)
    den = 1.0 - np.vdot(alpha, z)
    if abs(den) <= 1e-14 * (1.0 + anorm * np.linalg.norm(z)):
        raise PoleError("involution evaluated at its pole", point=z)
    return (alpha - p - s * q) / den


@dataclass(frozen=True)
class BallAutomorphism:
    """A ball automorphism: unitary rotation applied after the involution."""

    alpha: np.ndarray
    rotation: np.ndarray

    def __post_init__(self):
        alpha = linalg.as_vector(self.alpha)
        rot = linalg.as_square_matrix(self.rotation)
        if rot.shape[0] != alpha.shape[0]:
            raise ShapeError(
                f"rotation shape {rot.shape} does not match alpha length {alpha.shape[0]}"
            )
        if float(np.linalg.norm(alpha)) >= 1.0:
            raise ContractViolation("|alpha| must be < 1")
        if np.max(np.abs(rot.conj().T @ rot - np.eye(rot.shape[0]))) > 1e-10:
            raise ContractViolation("rotation must be unitary")
        alpha.flags.writeable = False
        rot.flags.writeable = False
        object.__setattr__(self, "alpha", alpha)
        object.__setattr__(self, "rotation", rot)

    def __call__(self, z) -> np.ndarray:
        return self.rotation @ ball_involution(self.alpha, z)


def automorphism_eval(aut: BallAutomorphism, z) -> np.ndarray:
    return aut(z)


def involution_matrix(alpha) -> np.ndarray:
    """Linear part of the involution numerator: s*beta - s*I - beta.

    beta is the orthogonal projection onto the span of alpha and
    s = sqrt(1 - |alpha|^2).  Requires 0 < |alpha| < 1.
    """
    alpha = linalg.as_vector(alpha)
    anorm2 = float(np.vdot(alpha, alpha).real)
    if anorm2 == 0.0 or anorm2 >= 1.0:
        raise ContractViolation("need 0 < |alpha| < 1")
    beta = np.outer(alpha, np.conj(alpha)) / anorm2
    s = np.sqrt(1.0 - anorm2)
    return s * beta - s * np.eye(alpha.shape[0]) - beta


def involution_matrix_inverse(alpha) -> np.ndarray:
    """Closed-form inverse of involution_matrix.

    Rank-one update formula:
        -(1 / (s |alpha|^2)) (|alpha|^2 I + (s - 1) alpha alpha*).
    """
    alpha = linalg.as_vector(alpha)
    anorm2 = float(np.vdot(alpha, alpha).real)
    if anorm2 == 0.0 or anorm2 >= 1.0:
        raise ContractViolation("need 0 < |alpha| < 1")
    s = np.sqrt(1.0 - anorm2)
    outer = np.outer(alpha, np.conj(alpha))
    return -(anorm2 * np.eye(alpha.shape[0]) + (s - 1.0) * outer) / (s * anorm2)


def automorphism_to_lfmap(aut: BallAutomorphism) -> LFMap:
    """Express an automorphism as a linear fractional map."""
    n = aut.alpha.shape[0]
    if float(np.linalg.norm(aut.alpha)) == 0.0:
        return LFMap(-aut.rotation, np.zeros(n), np.zeros(n), 1.0)
    a = aut.rotation @ involution_matrix(aut.alpha)
    b = aut.rotation @ aut.alpha
    return LFMap(a, b, -aut.alpha, 1.0)


@dataclass(frozen=True)
class EllipsoidImage:
    """The set {center + shape @ v : |v| <= 1} in C^N."""

    center: np.ndarray
    shape: np.ndarray

    def __post_init__(self):
        center = linalg.as_vector(self.center)
        shape = linalg.as_square_matrix(self.shape)
        if shape.shape[0] != center.shape[0]:
            raise ShapeError(
                f"shape matrix {shape.shape} does not match center length {center.shape[0]}"
            )
        center.flags.writeable = False
        shape.flags.writeable = False
        object.__setattr__(self, "center", center)
        object.__setattr__(self, "shape", shape)

    @property
    def dim(self) -> int:
        return self.center.shape[0]


def image_ellipsoid(phi: LFMap) -> EllipsoidImage:
    """Exact image of the open unit ball under a pole-free map.

    After rescaling the map so its denominator is <z, c'> + 1 (divide a
    and b by d and replace c by c / conj(d)), the image of the ball is
    the ellipsoid with

        center = (b' - a' c') / (1 - |c'|^2)
        shape  = (b' c'* - a' (s I + (1 - s) c' c'* / |c'|^2)) / (1 - |c'|^2)

    where s = sqrt(1 - |c'|^2).  A map with c = 0 is affine and the
    image is {b' + a' v}.
    """
    if not phi.pole_free_on_ball:
        raise PoleError("map has poles on the closed unit ball")
    d = phi.d
    a = phi.a / d
    b = phi.b / d
    c = phi.c / np.conj(d)
    cnorm2 = float(np.vdot(c, c).real)
    if cnorm2 == 0.0:
        center, shape = b, a
    else:
        s = np.sqrt(1.0 - cnorm2)
        one_minus_s = cnorm2 / (1.0 + s)
        proj = np.outer(c, np.conj(c)) / cnorm2
        center = (b - a @ c) / (1.0 - cnorm2)
        shape = (
            np.outer(b, np.conj(c)) - a @ (s * np.eye(phi.dim) + one_minus_s * proj)
        ) / (1.0 - cnorm2)
    sigma = np.linalg.svd(shape, compute_uv=False)
    if sigma[0] == 0.0 or sigma[-1] <= 1e-14 * sigma[0]:
        raise DegenerateMapError("image ellipsoid is numerically degenerate")
    return EllipsoidImage(center, shape)


def _secular_sum(gap: float, diffs: np.ndarray, weights: np.ndarray) -> float:
    """sum weights / (diffs + gap)^2 at lam = sigma_max^2 + gap.

    Working in the distance above sigma_max^2 keeps the pole distances
    exact when the root sits within rounding range of the pole, which
    happens for nearly centered ellipsoids.
    """
    return float(np.sum(weights / (diffs + gap) ** 2))


def ellipsoid_sup_norm(ell: EllipsoidImage) -> float:
    """sup {|center + shape @ v| : |v| <= 1}.

    With shape = w diag(sigma) v* and coordinates rotated by w, the
    problem reduces to maximizing |m + diag(sigma) x| over the real
    nonnegative unit ball, whose stationary condition is the secular
    equation sum_i sigma_i^2 m_i^2 / (lam - sigma_i^2)^2 = 1 with
    lam > sigma_max^2.  Solved by bisection; when every component of m
    along the top singular directions vanishes the root may not exist
    and the leftover mass sits on a top direction instead.
    """
    w, sigma, _ = linalg.svd(ell.shape)
    m = np.abs(w.conj().T @ ell.center)
    smax = float(sigma[0])
    mnorm = float(np.linalg.norm(m))
    if mnorm <= 1e-15 * max(1.0, smax):
        return smax
    if smax <= 1e-15 * mnorm:
        return mnorm
    ctol = 1e-14 * max(1.0, mnorm)
    active = m > ctol
    if not np.any(active):
        return smax
    sig2 = sigma[active] ** 2
    diffs = smax**2 - sig2
    weights = sig2 * m[active] ** 2
    gap_lo = 1e-30 * max(smax**2, mnorm**2)
    gap_hi = (smax + mnorm) ** 2
    if _secular_sum(gap_lo, diffs, weights) <= 1.0:
        # Hard case: the active directions cannot absorb all the mass, so
        # the rest rides a top singular direction at lam = sigma_max^2.
        lam = smax**2
        safe = diffs > 0.0
        x = sigma[active][safe] * m[active][safe] / diffs[safe]
        rest = max(0.0, 1.0 - float(np.sum(x**2)))
        sup2 = (
            float(np.sum((m[active][safe] * lam / diffs[safe]) ** 2))
            + float(np.sum(m[active][~safe] ** 2))
            + lam * rest
        )
        return float(np.sqrt(sup2))
    # Bisect on log(gap): the root can be many orders of magnitude
    # closer to the pole than to the far bracket.
    lo = np.log(gap_lo)
    hi = np.log(gap_hi)
    for _ in range(SUP_MAX_BISECT):
        mid = 0.5 * (lo + hi)
        if _secular_sum(np.exp(mid), diffs, weights) > 1.0:
            lo = mid
        else:
            hi = mid
        if hi - lo <= 1e-14:
            break
    gap = np.exp(0.5 * (lo + hi))
    lam = smax**2 + gap
    sup2 = lam**2 * float(np.sum(m[active] ** 2 / (diffs + gap) ** 2))
    return float(np.sqrt(sup2))
