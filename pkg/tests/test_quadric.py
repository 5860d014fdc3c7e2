"""Real quadrics on C^N and exact pullbacks under factor maps."""

import numpy as np
import pytest

from ballmaps import (
    ContractViolation,
    LFMap,
    Quadric,
    ShapeError,
    bruhat_factorize,
    compose,
    factors_to_maps,
    from_standard_form,
    pullback_affine,
    pullback_chain,
    pullback_map,
    pullback_reflection,
    pullback_swap,
)
from ballmaps.quadric import evaluate, evaluate_batch, normalized, residual, to_hermitian


def unit_sphere(n):
    return from_standard_form(np.ones(n), np.zeros(n), np.zeros(n), -1.0)


def random_hermitian_quadric(rng, n):
    g = rng.standard_normal((n + 1, n + 1)) + 1j * rng.standard_normal((n + 1, n + 1))
    from ballmaps.quadric import from_hermitian

    return from_hermitian(g + g.conj().T)


def random_points(rng, n, count, radius=2.0, floor_last=0.0):
    pts = radius * (rng.standard_normal((count, n)) + 1j * rng.standard_normal((count, n)))
    if floor_last > 0.0:
        small = np.abs(pts[:, -1]) < floor_last
        pts[small, -1] += 2.0 * floor_last
    return pts


def reflection_den(pts):
    return np.abs(pts[:, -1]) ** 2


def test_standard_form_layout():
    q = from_standard_form([1.0, -2.0], [0.5, 0.0], [0.0, 3.0], 4.0)
    np.testing.assert_array_equal(q.s, np.diag([1.0, 1.0, -2.0, -2.0]))
    np.testing.assert_array_equal(q.b, [0.5, 0.0, 0.0, 3.0])
    assert q.c == 4.0 and q.dim == 2
    # value at z = (1, i): 1 - 2 + 0.5 + 3 + 4
    assert abs(evaluate(q, [1.0, 1j]) - 6.5) < 1e-14


def test_quadric_validation():
    with pytest.raises(ContractViolation):
        Quadric(np.zeros((2, 2)), np.zeros(2), 0.0)
    with pytest.raises(ShapeError):
        Quadric(np.zeros((3, 3)), np.zeros(3), 1.0)
    with pytest.raises(ShapeError):
        Quadric(np.zeros((2, 2)), np.zeros(3), 1.0)
    with pytest.raises(ContractViolation):
        Quadric(np.full((2, 2), np.nan), np.zeros(2), 1.0)


def test_evaluate_batch_and_residual():
    q = unit_sphere(2)
    rng = np.random.default_rng(61)
    pts = random_points(rng, 2, 50)
    vals = evaluate_batch(q, pts)
    for k in range(50):
        assert abs(vals[k] - evaluate(q, pts[k])) < 1e-12
    on_sphere = pts / np.linalg.norm(pts, axis=1)[:, None]
    assert residual(q, on_sphere) < 1e-12
    assert residual(q, np.empty((0, 2))) == 0.0


def test_normalized_fixes_scale_and_sign():
    q = from_standard_form([2.0, 0.0], [0.0, 0.0], [0.0, 0.0], -8.0)
    r = normalized(q)
    assert abs(r.c + 1.0) < 1e-15 and abs(r.s[0, 0] - 0.25) < 1e-15
    flipped = normalized(Quadric(-q.s, -q.b, -q.c))
    np.testing.assert_array_equal(r.s, flipped.s)
    assert r.c == flipped.c


def test_reflection_of_unit_sphere_frozen():
    q2 = pullback_reflection(unit_sphere(2))
    np.testing.assert_array_equal(q2.s, np.diag([1.0, 1.0, -1.0, -1.0]))
    np.testing.assert_array_equal(q2.b, np.zeros(4))
    assert q2.c == 1.0


def test_reflection_identity_and_involution():
    rng = np.random.default_rng(62)
    for n in (1, 2, 3):
        q = random_hermitian_quadric(rng, n)
        qr = pullback_reflection(q)
        pts = random_points(rng, n, 1000, floor_last=0.1)
        f_pts = pts.copy()
        f_pts[:, :-1] = pts[:, :-1] / pts[:, -1][:, None]
        f_pts[:, -1] = 1.0 / pts[:, -1]
        direct = evaluate_batch(q, f_pts) * reflection_den(pts)
        assert np.max(np.abs(evaluate_batch(qr, pts) - direct)) < 1e-10
        back = pullback_reflection(qr)
        np.testing.assert_array_equal(back.s, q.s)
        np.testing.assert_array_equal(back.b, q.b)
        assert back.c == q.c


def test_reflection_fixed_quadric_through_origin():
    # |z1|^2 - Re z2 is invariant under the canonical reflection of C^2
    q = from_standard_form([1.0, 0.0], [0.0, -1.0], [0.0, 0.0], 0.0)
    r = pullback_reflection(q)
    np.testing.assert_array_equal(r.s, q.s)
    np.testing.assert_array_equal(r.b, q.b)
    assert r.c == q.c


def test_pullback_swap_range_check():
    with pytest.raises(ContractViolation):
        pullback_swap(unit_sphere(2), 1, 3)


def test_affine_translation_frozen():
    shift = LFMap(np.eye(2), [0.3, 0.4j], [0.0, 0.0], 1.0)
    q = pullback_affine(unit_sphere(2), shift)
    np.testing.assert_allclose(q.s, np.eye(4), atol=1e-15)
    np.testing.assert_allclose(q.b, [0.6, 0.0, 0.0, 0.8], atol=1e-15)
    assert abs(q.c + 0.75) < 1e-15


def test_affine_identity_random():
    rng = np.random.default_rng(63)
    for _ in range(10):
        n = int(rng.integers(1, 4))
        q = random_hermitian_quadric(rng, n)
        phi = LFMap(
            rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n)),
            rng.standard_normal(n) + 1j * rng.standard_normal(n),
            np.zeros(n),
            1.0 + rng.uniform(),
        )
        pts = random_points(rng, n, 1000)
        images = np.stack([phi(z) for z in pts])
        got = evaluate_batch(pullback_affine(q, phi), pts)
        assert np.max(np.abs(got - evaluate_batch(q, images))) < 1e-9


def test_affine_rejects_fractional():
    phi = LFMap(np.eye(1), [0.0], [0.5], 1.0)
    with pytest.raises(ContractViolation):
        pullback_affine(unit_sphere(1), phi)


def test_pullback_map_worked_frozen(worked_map):
    q = pullback_map(unit_sphere(2), worked_map)
    np.testing.assert_allclose(q.s, np.diag([0.0, 0.0, 4.0, 4.0]), atol=1e-14)
    np.testing.assert_allclose(q.b, [8.0, 0.0, 0.0, 0.0], atol=1e-14)
    assert abs(q.c + 8.0) < 1e-14
    # identity q'(z) = q(phi(z)) |<z,C> + D|^2 at sample points
    rng = np.random.default_rng(64)
    pts = 0.8 * random_points(rng, 2, 200, radius=1.0)
    den = np.abs(pts @ np.conj(worked_map.c) + worked_map.d) ** 2
    images = np.stack([worked_map(z) for z in pts])
    direct = evaluate_batch(unit_sphere(2), images) * den
    assert np.max(np.abs(evaluate_batch(q, pts) - direct)) < 1e-10


def test_pullback_map_automorphism_preserves_sphere():
    from ballmaps import BallAutomorphism, automorphism_to_lfmap
    from ballmaps.criterion import random_unitary

    rng = np.random.default_rng(65)
    for _ in range(10):
        n = int(rng.integers(1, 4))
        g = rng.standard_normal(2 * n)
        alpha = (g[::2] + 1j * g[1::2])
        alpha *= rng.uniform(0.1, 0.8) / np.linalg.norm(alpha)
        phi = automorphism_to_lfmap(BallAutomorphism(alpha, random_unitary(n, rng)))
        got = normalized(pullback_map(unit_sphere(n), phi))
        want = normalized(unit_sphere(n))
        np.testing.assert_allclose(got.s, want.s, atol=1e-12)
        np.testing.assert_allclose(got.b, want.b, atol=1e-12)
        assert abs(got.c - want.c) < 1e-12


def test_chain_matches_whole_map(worked_map):
    maps = factors_to_maps(bruhat_factorize(worked_map.associated_matrix()))
    chained = normalized(pullback_chain(unit_sphere(2), maps))
    whole = normalized(pullback_map(unit_sphere(2), worked_map))
    np.testing.assert_allclose(chained.s, whole.s, atol=1e-12)
    np.testing.assert_allclose(chained.b, whole.b, atol=1e-12)
    assert abs(chained.c - whole.c) < 1e-12


def test_pullback_functoriality():
    rng = np.random.default_rng(66)
    for _ in range(15):
        n = int(rng.integers(1, 4))
        q = random_hermitian_quadric(rng, n)
        f = LFMap(
            rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n)),
            rng.standard_normal(n) + 1j * rng.standard_normal(n),
            0.3 * (rng.standard_normal(n) + 1j * rng.standard_normal(n)),
            2.0 + rng.uniform(),
        )
        g = LFMap(
            rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n)),
            rng.standard_normal(n) + 1j * rng.standard_normal(n),
            0.3 * (rng.standard_normal(n) + 1j * rng.standard_normal(n)),
            2.0 + rng.uniform(),
        )
        lhs = normalized(pullback_map(q, compose(f, g)))
        rhs = normalized(pullback_map(pullback_map(q, f), g))
        np.testing.assert_allclose(lhs.s, rhs.s, atol=1e-10)
        np.testing.assert_allclose(lhs.b, rhs.b, atol=1e-10)
        assert abs(lhs.c - rhs.c) < 1e-10


def test_non_hermitian_quadric_paths():
    # Re(z1^2) = x^2 - y^2 has a z_i z_j term: no Hermitian description
    q = Quadric(np.diag([1.0, -1.0]), np.zeros(2), -1.0)
    with pytest.raises(ContractViolation):
        to_hermitian(q)
    with pytest.raises(ContractViolation):
        pullback_reflection(q)

    double = LFMap(2 * np.eye(1), [0.0], [0.0], 1.0)
    scaled = pullback_map(q, double)
    np.testing.assert_array_equal(scaled.s, np.diag([4.0, -4.0]))
    assert scaled.c == -1.0

    fractional = LFMap(np.eye(1), [0.0], [0.5], 1.0)
    with pytest.raises(ContractViolation):
        pullback_map(q, fractional)
