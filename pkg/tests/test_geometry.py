"""Ball automorphisms, image ellipsoids, and the ellipsoid sup norm."""

import numpy as np
import pytest

from ballmaps import (
    BallAutomorphism,
    ContractViolation,
    EllipsoidImage,
    LFMap,
    PoleError,
    ShapeError,
    automorphism_to_lfmap,
    ball_involution,
    ellipsoid_sup_norm,
    image_ellipsoid,
    involution_matrix,
    involution_matrix_inverse,
    project_alpha,
)
from ballmaps.criterion import random_unitary

from conftest import random_ball_point

ALPHA = np.array([0.5, 0.0], dtype=np.complex128)


def random_alpha(rng, n, lo=0.05, hi=0.9):
    g = rng.standard_normal(2 * n)
    a = g[::2] + 1j * g[1::2]
    return a * (rng.uniform(lo, hi) / np.linalg.norm(a))


def test_project_alpha_frozen():
    p, q = project_alpha([1.0, 0.0], [0.3 + 0.1j, 0.7j])
    np.testing.assert_allclose(p, [0.3 + 0.1j, 0.0], atol=1e-15)
    np.testing.assert_allclose(q, [0.0, 0.7j], atol=1e-15)


def test_project_alpha_zero_and_orthogonality():
    z = np.array([0.2, -0.4j])
    p, q = project_alpha([0.0, 0.0], z)
    np.testing.assert_array_equal(p, 0.0)
    np.testing.assert_array_equal(q, z)
    rng = np.random.default_rng(31)
    for _ in range(20):
        n = int(rng.integers(1, 5))
        alpha = random_alpha(rng, n)
        z = random_ball_point(rng, n)
        p, q = project_alpha(alpha, z)
        np.testing.assert_allclose(p + q, z, atol=1e-14)
        assert abs(np.vdot(alpha, q)) < 1e-12
    with pytest.raises(ShapeError):
        project_alpha([1.0], [1.0, 0.0])


def test_ball_involution_swaps_zero_and_alpha():
    np.testing.assert_allclose(ball_involution(ALPHA, np.zeros(2)), ALPHA, atol=1e-15)
    np.testing.assert_allclose(ball_involution(ALPHA, ALPHA), np.zeros(2), atol=1e-15)
    np.testing.assert_allclose(
        ball_involution([0.0, 0.0], [0.1, 0.2]), [-0.1, -0.2], atol=1e-15
    )


def test_ball_involution_is_involutive_and_isometric_on_sphere():
    rng = np.random.default_rng(32)
    for _ in range(30):
        n = int(rng.integers(1, 5))
        alpha = random_alpha(rng, n)
        z = random_ball_point(rng, n)
        np.testing.assert_allclose(
            ball_involution(alpha, ball_involution(alpha, z)), z, atol=1e-12
        )
        zeta = z / np.linalg.norm(z)
        assert abs(np.linalg.norm(ball_involution(alpha, zeta)) - 1.0) < 1e-12


def test_ball_involution_guards():
    with pytest.raises(ContractViolation):
        ball_involution([1.0, 0.0], [0.0, 0.0])
    with pytest.raises(PoleError):
        ball_involution(ALPHA, [2.0, 0.0])


def test_involution_matrix_frozen():
    s = np.sqrt(3.0) / 2.0
    np.testing.assert_allclose(involution_matrix(ALPHA), np.diag([-1.0, -s]), atol=1e-15)
    np.testing.assert_allclose(
        involution_matrix_inverse(ALPHA), np.diag([-1.0, -2.0 / np.sqrt(3.0)]), atol=1e-15
    )


def test_involution_matrix_inverse_is_inverse():
    rng = np.random.default_rng(33)
    for _ in range(30):
        n = int(rng.integers(1, 5))
        alpha = random_alpha(rng, n)
        prod = involution_matrix(alpha) @ involution_matrix_inverse(alpha)
        np.testing.assert_allclose(prod, np.eye(n), atol=1e-12)
    for bad in ([0.0, 0.0], [1.0, 0.0]):
        with pytest.raises(ContractViolation):
            involution_matrix(bad)
        with pytest.raises(ContractViolation):
            involution_matrix_inverse(bad)


def test_automorphism_validation():
    with pytest.raises(ContractViolation):
        BallAutomorphism(np.array([1.2, 0.0]), np.eye(2))
    with pytest.raises(ContractViolation):
        BallAutomorphism(ALPHA, np.array([[1.0, 1.0], [0.0, 1.0]]))
    with pytest.raises(ShapeError):
        BallAutomorphism(ALPHA, np.eye(3))


def test_automorphism_to_lfmap_matches_direct_eval():
    rng = np.random.default_rng(34)
    for _ in range(25):
        n = int(rng.integers(1, 5))
        alpha = random_alpha(rng, n) if rng.uniform() > 0.2 else np.zeros(n)
        aut = BallAutomorphism(alpha, random_unitary(n, rng))
        phi = automorphism_to_lfmap(aut)
        for _ in range(4):
            z = random_ball_point(rng, n)
            np.testing.assert_allclose(phi(z), aut(z), atol=1e-12)


def test_image_ellipsoid_worked_golden(worked_map):
    ell = image_ellipsoid(worked_map)
    np.testing.assert_allclose(ell.center, [0.5, 0.0], atol=1e-14)
    np.testing.assert_allclose(
        ell.shape, np.diag([-0.5, -np.sqrt(2.0) / 2.0]), atol=1e-14
    )


def test_image_ellipsoid_affine_branch():
    phi = LFMap(np.diag([1.0, 2.0]), [0.1, 0.0], [0.0, 0.0], 2.0)
    ell = image_ellipsoid(phi)
    np.testing.assert_allclose(ell.center, [0.05, 0.0], atol=1e-15)
    np.testing.assert_allclose(ell.shape, np.diag([0.5, 1.0]), atol=1e-15)


def test_image_ellipsoid_requires_pole_free():
    with pytest.raises(PoleError):
        image_ellipsoid(LFMap(np.eye(1), [0.0], [2.0], 1.0))


def test_image_ellipsoid_boundary_membership():
    # sphere points must land exactly on the ellipsoid boundary
    rng = np.random.default_rng(35)
    for _ in range(15):
        n = int(rng.integers(1, 4))
        phi = LFMap(
            rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n)),
            0.5 * (rng.standard_normal(n) + 1j * rng.standard_normal(n)),
            0.4 * (rng.standard_normal(n) + 1j * rng.standard_normal(n)),
            2.0 + rng.uniform(),
        )
        ell = image_ellipsoid(phi)
        inv_shape = np.linalg.inv(ell.shape)
        for _ in range(6):
            z = random_ball_point(rng, n)
            zeta = z / np.linalg.norm(z)
            v = inv_shape @ (phi(zeta) - ell.center)
            assert abs(np.linalg.norm(v) - 1.0) < 1e-9, "boundary must map to boundary"
            w = inv_shape @ (phi(z) - ell.center)
            assert np.linalg.norm(w) < 1.0, "interior must map to interior"


def test_image_ellipsoid_automorphism_is_centered_unitary():
    rng = np.random.default_rng(36)
    for _ in range(10):
        n = int(rng.integers(1, 5))
        aut = BallAutomorphism(random_alpha(rng, n), random_unitary(n, rng))
        ell = image_ellipsoid(automorphism_to_lfmap(aut))
        assert np.linalg.norm(ell.center) < 1e-10
        defect = ell.shape.conj().T @ ell.shape - np.eye(n)
        assert np.max(np.abs(defect)) < 1e-10


def test_sup_norm_frozen_cases():
    cases = [
        (EllipsoidImage([0.0, 0.0], np.diag([2.0, 1.0])), 2.0),
        (EllipsoidImage([0.75], np.eye(1) / 2), 1.25),
        (EllipsoidImage([0.0, 5.0], np.diag([2.0, 1.0])), 6.0),
        (EllipsoidImage([3.0, 0.0], np.diag([2.0, 1.0])), 5.0),
        (EllipsoidImage([0.0, 5.0], np.diag([2.0, 0.0])), np.sqrt(29.0)),
        (EllipsoidImage([0.0, 0.1], np.diag([2.0, 1.0])), np.sqrt(903.0) / 15.0),
    ]
    for ell, expected in cases:
        got = ellipsoid_sup_norm(ell)
        assert abs(got - expected) < 1e-12, f"sup {got} != {expected}"


def test_sup_norm_worked_map(worked_map):
    sup = ellipsoid_sup_norm(image_ellipsoid(worked_map))
    assert abs(sup - 1.0) < 1e-12


def test_sup_norm_near_centered():
    ell = EllipsoidImage([1e-9, 0.0], np.diag([1.0, 0.5]))
    sup = ellipsoid_sup_norm(ell)
    assert abs(sup - (1.0 + 1e-9)) < 1e-13


def _ascent_sup(ell: EllipsoidImage, iters: int = 300) -> float:
    """Fixed-point ascent lower bound for the sup norm."""
    s = ell.shape
    best = float(np.linalg.norm(ell.center))
    rng = np.random.default_rng(0)
    n = ell.dim
    starts = [s.conj().T @ ell.center] + [
        rng.standard_normal(n) + 1j * rng.standard_normal(n) for _ in range(4)
    ]
    for v in starts:
        nv = np.linalg.norm(v)
        if nv == 0.0:
            continue
        v = v / nv
        for _ in range(iters):
            w = s.conj().T @ (ell.center + s @ v)
            nw = np.linalg.norm(w)
            if nw == 0.0:
                break
            v = w / nw
        best = max(best, float(np.linalg.norm(ell.center + s @ v)))
    return best


def test_sup_norm_brackets_random():
    rng = np.random.default_rng(37)
    for i in range(40):
        n = int(rng.integers(1, 5))
        shape = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
        if i % 7 == 0:
            center = 1e-9 * (rng.standard_normal(n) + 1j * rng.standard_normal(n))
        else:
            center = rng.standard_normal(n) + 1j * rng.standard_normal(n)
        ell = EllipsoidImage(center, shape)
        sup = ellipsoid_sup_norm(ell)
        smax = np.linalg.svd(shape, compute_uv=False)[0]
        cnorm = float(np.linalg.norm(center))
        assert sup <= cnorm + smax + 1e-10, "triangle upper bound violated"
        assert sup >= max(cnorm, smax) - 1e-10, "trivial lower bound violated"
        assert sup >= _ascent_sup(ell) - 1e-8, "below an achievable value"
