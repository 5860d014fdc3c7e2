"""Real quadrics on C^N and their exact pullbacks under factor maps.

A quadric is stored over real coordinates, x^T S x + b^T x + c = 0 with
z_k = x_{2k} + i x_{2k+1}.  Generalized ellipsoids in standard form,

    sum a_i |z_i|^2 + sum b_i Re(z_i) + sum g_i Im(z_i) + d = 0,

are the Hermitian members of that family: their S commutes with the
complex structure.  Such quadrics also have a homogeneous description
Z* Q Z with Z = (z, 1) and Q Hermitian of size N+1, and substituting a
linear fractional map with associated matrix m and clearing the squared
denominator is exactly the congruence Q -> m* Q m.  Reflections are
permutation matrices, so their pullback is an index swap, with no
arithmetic beyond the change of description.  Affine pullbacks are done
as real substitutions, which also covers quadrics that are not of
Hermitian type.

Quadrics are projective: an overall real scale does not change the zero
set, and comparisons should go through normalized().
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .bruhat import FactorMap
from .errors import ContractViolation, ShapeError
from .lfm import LFMap

HERMITIAN_STRUCTURE_TOL = 1e-10


def _real_parts(z: np.ndarray) -> np.ndarray:
    """Interleaved real coordinates (Re z_0, Im z_0, Re z_1, ...)."""
    z = np.asarray(z, dtype=np.complex128)
    x = np.empty(z.shape[:-1] + (2 * z.shape[-1],))
    x[..., 0::2] = z.real
    x[..., 1::2] = z.imag
    return x


@dataclass(frozen=True)
class Quadric:
    """Zero set of x^T S x + b^T x + c in real coordinates of C^N."""

    s: np.ndarray
    b: np.ndarray
    c: float

    def __post_init__(self):
        s = np.asarray(self.s, dtype=np.float64)
        b = np.asarray(self.b, dtype=np.float64)
        if s.ndim != 2 or s.shape[0] != s.shape[1]:
            raise ShapeError(f"quadratic part must be square, got {s.shape}")
        if s.shape[0] % 2 != 0 or s.shape[0] == 0:
            raise ShapeError("real dimension must be even and positive")
        if b.shape != (s.shape[0],):
            raise ShapeError(f"linear part has shape {b.shape}, expected ({s.shape[0]},)")
        if not (np.all(np.isfinite(s)) and np.all(np.isfinite(b)) and np.isfinite(self.c)):
            raise ContractViolation("quadric coefficients must be finite")
        s = (s + s.T) / 2.0
        if not (np.any(s) or np.any(b) or self.c != 0.0):
            raise ContractViolation("all-zero quadric")
        s.flags.writeable = False
        b = b.copy()
        b.flags.writeable = False
        object.__setattr__(self, "s", s)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "c", float(self.c))

    @property
    def dim(self) -> int:
        return self.s.shape[0] // 2


def from_standard_form(alphas, betas, gammas, delta: float) -> Quadric:
    """Quadric of sum a_i|z_i|^2 + sum b_i Re(z_i) + sum g_i Im(z_i) + d."""
    alphas = np.asarray(alphas, dtype=np.float64)
    betas = np.asarray(betas, dtype=np.float64)
    gammas = np.asarray(gammas, dtype=np.float64)
    if not (alphas.shape == betas.shape == gammas.shape) or alphas.ndim != 1:
        raise ShapeError("coefficient vectors must share one length")
    n = alphas.shape[0]
    s = np.zeros((2 * n, 2 * n))
    s[np.arange(0, 2 * n, 2), np.arange(0, 2 * n, 2)] = alphas
    s[np.arange(1, 2 * n, 2), np.arange(1, 2 * n, 2)] = alphas
    b = np.empty(2 * n)
    b[0::2] = betas
    b[1::2] = gammas
    return Quadric(s, b, float(delta))


def evaluate(q: Quadric, z) -> float:
    x = _real_parts(np.asarray(z, dtype=np.complex128))
    return float(x @ q.s @ x + q.b @ x + q.c)


def evaluate_batch(q: Quadric, points: np.ndarray) -> np.ndarray:
    x = _real_parts(np.asarray(points, dtype=np.complex128))
    return np.einsum("ki,ij,kj->k", x, q.s, x) + x @ q.b + q.c


def residual(q: Quadric, points) -> float:
    """Largest |q(z)| over the given complex points; 0 for no points."""
    pts = np.asarray(points, dtype=np.complex128)
    if pts.size == 0:
        return 0.0
    pts = np.atleast_2d(pts)
    return float(np.max(np.abs(evaluate_batch(q, pts))))


def normalized(q: Quadric) -> Quadric:
    """Projective representative with largest coefficient 1 in magnitude.

    The sign is fixed by making the first nonzero coefficient positive,
    so projectively equal quadrics compare entrywise.
    """
    flat = np.concatenate([q.s.ravel(), q.b, [q.c]])
    scale = np.max(np.abs(flat))
    first = flat[np.nonzero(flat)[0][0]]
    if first < 0:
        scale = -scale
    return Quadric(q.s / scale, q.b / scale, q.c / scale)


def to_hermitian(q: Quadric, tol: float = HERMITIAN_STRUCTURE_TOL) -> np.ndarray:
    """Homogeneous Hermitian matrix Q with q(z) = Z* Q Z, Z = (z, 1).

    Requires the quadratic part to be of Hermitian type, meaning no
    Re(z_i z_j) or Im(z_i z_j) terms; those cannot survive a reflection
    substitution as polynomial terms.
    """
    n = q.dim
    s4 = q.s.reshape(n, 2, n, 2)
    sxx, sxy = s4[:, 0, :, 0], s4[:, 0, :, 1]
    syx, syy = s4[:, 1, :, 0], s4[:, 1, :, 1]
    scale = max(1.0, float(np.max(np.abs(q.s))))
    defect = max(float(np.max(np.abs(sxx - syy))), float(np.max(np.abs(sxy + syx))))
    if defect > tol * scale:
        raise ContractViolation(
            "quadratic part is not of Hermitian type (has z_i z_j terms)"
        )
    h = (sxx + syy) / 2.0 + 1j * (syx - sxy) / 2.0
    w = (q.b[0::2] + 1j * q.b[1::2]) / 2.0
    big = np.empty((n + 1, n + 1), dtype=np.complex128)
    big[:n, :n] = (h + h.conj().T) / 2.0
    big[:n, n] = w
    big[n, :n] = np.conj(w)
    big[n, n] = q.c
    return big


def from_hermitian(big: np.ndarray) -> Quadric:
    """Inverse of to_hermitian; big is (N+1)x(N+1) Hermitian."""
    big = np.asarray(big, dtype=np.complex128)
    n = big.shape[0] - 1
    big = (big + big.conj().T) / 2.0
    h = big[:n, :n]
    s4 = np.empty((n, 2, n, 2))
    s4[:, 0, :, 0] = h.real
    s4[:, 1, :, 1] = h.real
    s4[:, 1, :, 0] = h.imag
    s4[:, 0, :, 1] = -h.imag
    b = np.empty(2 * n)
    b[0::2] = 2.0 * big[:n, n].real
    b[1::2] = 2.0 * big[:n, n].imag
    return Quadric(s4.reshape(2 * n, 2 * n), b, float(big[n, n].real))


def _unwrap_affine(m) -> LFMap:
    phi = m.map if isinstance(m, FactorMap) else m
    if float(np.linalg.norm(phi.c)) != 0.0:
        raise ContractViolation("affine pullback needs a map with c = 0")
    return phi


def _real_matrix(a: np.ndarray) -> np.ndarray:
    """Real 2x2-block representation of a complex matrix, exact."""
    n, k = a.shape
    t = np.empty((2 * n, 2 * k))
    t4 = t.reshape(n, 2, k, 2)
    t4[:, 0, :, 0] = a.real
    t4[:, 1, :, 1] = a.real
    t4[:, 1, :, 0] = a.imag
    t4[:, 0, :, 1] = -a.imag
    return t


def pullback_affine(q: Quadric, m) -> Quadric:
    """Quadric q' with q'(z) = q(m(z)) for an affine (c = 0) map.

    Done as the real substitution x -> Tx + t in the quadratic form, so
    it applies to every stored quadric, Hermitian type or not.
    """
    phi = _unwrap_affine(m)
    if phi.dim != q.dim:
        raise ShapeError(f"map dimension {phi.dim} vs quadric dimension {q.dim}")
    t_mat = _real_matrix(phi.a / phi.d)
    t_vec = _real_parts(phi.b / phi.d)
    s2 = t_mat.T @ q.s @ t_mat
    b2 = t_mat.T @ (2.0 * (q.s @ t_vec) + q.b)
    c2 = float(t_vec @ q.s @ t_vec + q.b @ t_vec + q.c)
    return Quadric(s2, b2, c2)


def pullback_swap(q: Quadric, i: int, j: int) -> Quadric:
    """Pullback through the transposition of homogeneous coordinates i, j.

    For j = N this is the inversion-type reflection sending z_i to
    1/z_i-style quotients; the result satisfies
    q'(z) = q(f(z)) * |denominator|^2, the squared-denominator clearing
    of the substituted equation.  Exact coefficient shuffling.
    """
    n = q.dim
    if not (0 <= i < j <= n):
        raise ContractViolation(f"transposition ({i}, {j}) out of range for N={n}")
    big = to_hermitian(q)
    order = np.arange(n + 1)
    order[i], order[j] = order[j], order[i]
    return from_hermitian(big[np.ix_(order, order)])


def pullback_reflection(q: Quadric, n: int | None = None) -> Quadric:
    """Pullback through the canonical reflection (z_1/z_N, ..., 1/z_N).

    Clears |z_N|^2: the result q' satisfies q'(z) = q(f(z)) |z_N|^2 away
    from z_N = 0.  An involution, exactly.
    """
    if n is not None and n != q.dim:
        raise ShapeError(f"reflection dimension {n} vs quadric dimension {q.dim}")
    return pullback_swap(q, q.dim - 1, q.dim)


def pullback_factor(q: Quadric, factor: FactorMap) -> Quadric:
    """Pullback through one decomposition factor."""
    if factor.kind == "reflection":
        return pullback_swap(q, factor.swap[0], factor.swap[1])
    return pullback_affine(q, factor.map)


def pullback_chain(q: Quadric, factors) -> Quadric:
    """Pullback through a composition factors[0] after factors[1] after ...

    Pullback is contravariant, so the outermost factor substitutes
    first.
    """
    out = q
    for factor in factors:
        out = pullback_factor(out, factor)
    return out


def pullback_map(q: Quadric, phi: LFMap) -> Quadric:
    """Pullback through a whole map in one congruence.

    For Hermitian-type q this is m* Q m on the homogeneous matrix; the
    result satisfies q'(z) = q(phi(z)) |<z,C> + D|^2.  Non-Hermitian
    quadrics are supported for affine maps only.
    """
    if phi.dim != q.dim:
        raise ShapeError(f"map dimension {phi.dim} vs quadric dimension {q.dim}")
    try:
        big = to_hermitian(q)
    except ContractViolation:
        if float(np.linalg.norm(phi.c)) == 0.0:
            return pullback_affine(q, phi)
        raise
    m = phi.associated_matrix()
    return from_hermitian(m.conj().T @ big @ m)
