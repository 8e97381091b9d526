import math

import numpy as np
import pytest
import scipy.linalg

from conftest import random_skew_hermitian, random_unitary
from packbound.errors import DimensionMismatch, InvalidSpec, NotUnitary
from packbound.geometry.distance import geodesic_grassmann, projector
from packbound.geometry.space import (
    GrassmannPoint, HorizontalTangent, SpaceSpec, StiefelPoint,
    coordinate_basis, exp_point, grassmann_exp_closed_form, haar_frames, haar_point,
    haar_stiefel, inner, log_unitary, parse_family, random_tangent,
    tangent_coordinates, tangent_from_coordinates, tangent_norm,
)


class TestSpaceSpec:

    @pytest.mark.parametrize('family,k,n,expected', [
        ('stiefel', 1, 1, 1),
        ('stiefel', 1, 2, 3),
        ('stiefel', 2, 2, 4),
        ('stiefel', 2, 4, 12),
        ('grassmann', 1, 2, 2),
        ('grassmann', 2, 4, 8),
        ('grassmann', 3, 7, 24),
    ])
    def test_dimension(self, family, k, n, expected):
        assert SpaceSpec(family, k, n).dimension == expected

    @pytest.mark.parametrize('family,k,n', [
        ('stiefel', 3, 2),
        ('stiefel', 0, 2),
        ('grassmann', 2, 3),
        ('grassmann', 3, 4),
    ])
    def test_invalid(self, family, k, n):
        with pytest.raises(InvalidSpec):
            SpaceSpec(family, k, n)

    def test_unknown_family(self):
        with pytest.raises(InvalidSpec):
            parse_family('flag')

    def test_aliases_and_equality(self):
        assert SpaceSpec('U', 3, 3) == SpaceSpec.unitary(3)
        assert SpaceSpec.unitary(3).is_unitary
        assert SpaceSpec('g', 1, 4) == SpaceSpec.grassmann(1, 4)
        assert len({SpaceSpec.stiefel(1, 2), SpaceSpec('v', 1, 2)}) == 1
        assert SpaceSpec.stiefel(1, 2) != SpaceSpec.grassmann(1, 2)


class TestPoints:

    def test_non_orthonormal_frame_rejected(self):
        with pytest.raises(InvalidSpec):
            StiefelPoint([[1.0, 0.0], [0.0, 1.1]])

    def test_frame_is_read_only(self):
        p = StiefelPoint.canonical(3, 1)
        with pytest.raises(ValueError):
            p.frame[0, 0] = 2

    def test_grassmann_point_needs_small_k(self):
        with pytest.raises(InvalidSpec):
            GrassmannPoint(np.eye(3, 2))

    def test_projector_of_canonical_frame(self):
        p = GrassmannPoint(StiefelPoint.canonical(4, 2))
        assert np.allclose(p.projector, np.diag([1, 1, 0, 0]), atol=1e-15)

    @pytest.mark.parametrize('k,n', [(1, 2), (2, 5), (3, 8)])
    def test_projector_identities(self, k, n):
        p = haar_stiefel(SpaceSpec.grassmann(k, n), 7)
        proj = projector(p)
        assert np.allclose(proj, proj.conj().T, atol=1e-10)
        assert np.allclose(proj @ proj, proj, atol=1e-10)
        assert abs(np.trace(proj).real - k) < 1e-10
        dev = np.linalg.norm(proj - k / n * np.eye(n)) ** 2
        assert abs(dev - k * (n - k) / n) < 1e-10


class TestHaar:

    def test_scalar_has_unit_modulus(self):
        p = haar_stiefel(SpaceSpec.unitary(1), 3)
        assert p.shape == (1, 1)
        assert abs(abs(p.frame[0, 0]) - 1) < 1e-12

    @pytest.mark.parametrize('k,n', [(1, 1), (1, 5), (2, 2), (3, 7), (4, 16)])
    def test_orthonormal(self, k, n):
        phi = haar_stiefel(SpaceSpec.stiefel(k, n), 11).frame
        assert np.max(np.abs(phi.conj().T @ phi - np.eye(k))) < 1e-12

    def test_deterministic(self, v24):
        a = haar_stiefel(v24, 5).frame
        b = haar_stiefel(v24, 5).frame
        assert np.array_equal(a, b)
        assert not np.array_equal(a, haar_stiefel(v24, 6).frame)

    def test_mean_projector(self, g12):
        rng = np.random.default_rng(0)
        total = np.zeros((2, 2), dtype=complex)
        samples = 10000
        for _ in range(samples):
            total += haar_point(g12, rng).projector
        assert np.max(np.abs(total / samples - 0.5 * np.eye(2))) < 0.02

    def test_rejects_tuple(self):
        with pytest.raises(InvalidSpec):
            haar_stiefel((1, 2), 0)

    def test_stacked_frames(self, v24):
        frames = haar_frames(v24, 50, 3)
        assert frames.shape == (50, 4, 2)
        gram = np.einsum('bij,bik->bjk', frames.conj(), frames)
        assert np.max(np.abs(gram - np.eye(2))) < 1e-12
        assert np.array_equal(frames, haar_frames(v24, 50, 3))

    def test_stacked_mean_projector(self, g12):
        frames = haar_frames(g12, 20000, 1)
        mean = np.einsum('bik,bjk->ij', frames, frames.conj()) / len(frames)
        assert np.max(np.abs(mean - 0.5 * np.eye(2))) < 0.02


class TestTangents:

    def test_norm_examples(self, u2, v24):
        assert tangent_norm(HorizontalTangent.zero(v24)) == 0
        t = HorizontalTangent(1j * np.diag([1.0, -1.0]), np.zeros((0, 2)), u2)
        assert abs(tangent_norm(t) - 1) < 1e-15
        b = np.zeros((2, 2), dtype=complex)
        b[0, 1] = 0.6
        b[1, 0] = 0.8j
        t = HorizontalTangent(np.zeros((2, 2)), b, v24)
        assert abs(tangent_norm(t) - 1) < 1e-15

    def test_matrix_norm_relation(self, v24, rng):
        t = random_tangent(v24, 0.7, rng)
        x = t.matrix()
        assert abs(np.linalg.norm(x) - math.sqrt(2) * 0.7) < 1e-12
        assert abs(inner(x, x) - 0.49) < 1e-12

    def test_non_skew_a_rejected(self, v24):
        with pytest.raises(InvalidSpec):
            HorizontalTangent(np.eye(2), np.zeros((2, 2)), v24)

    def test_grassmann_tangent_has_no_a_block(self):
        g = SpaceSpec.grassmann(2, 4)
        with pytest.raises(InvalidSpec):
            HorizontalTangent(1j * np.eye(2), np.zeros((2, 2)), g)

    @pytest.mark.parametrize('space', [
        SpaceSpec.stiefel(2, 5), SpaceSpec.unitary(3), SpaceSpec.grassmann(2, 5),
    ])
    def test_coordinates_are_isometric(self, space, rng):
        coords = rng.standard_normal(space.dimension)
        t = tangent_from_coordinates(space, coords)
        assert abs(tangent_norm(t) - np.linalg.norm(coords)) < 1e-12
        assert np.allclose(tangent_coordinates(t), coords, atol=1e-12)

    def test_coordinate_basis_is_orthonormal(self):
        space = SpaceSpec.stiefel(2, 3)
        basis = [e.matrix() for e in coordinate_basis(space)]
        assert len(basis) == space.dimension
        gram = np.array([[inner(x, y) for y in basis] for x in basis])
        assert np.allclose(gram, np.eye(space.dimension), atol=1e-14)

    def test_wrong_coordinate_count(self, v24):
        with pytest.raises(DimensionMismatch):
            tangent_from_coordinates(v24, np.zeros(5))


class TestExpPoint:

    def test_zero_tangent_returns_base(self, v24):
        base = haar_stiefel(v24, 1)
        assert exp_point(base, HorizontalTangent.zero(v24)) is base

    @pytest.mark.parametrize('t', [0.0, 0.3, 1.0, 2.5])
    def test_rotation_in_v12(self, v12, t):
        tangent = HorizontalTangent(np.zeros((1, 1)), [[t]], v12)
        phi = exp_point(StiefelPoint.canonical(2, 1), tangent).frame
        assert np.allclose(phi[:, 0], [math.cos(t), math.sin(t)], atol=1e-12)

    def test_scalar_phase(self):
        space = SpaceSpec.unitary(1)
        tangent = HorizontalTangent([[1j * math.pi]], np.zeros((0, 1)), space)
        phi = exp_point(StiefelPoint.canonical(1, 1), tangent).frame
        assert abs(phi[0, 0] + 1) < 1e-12

    @pytest.mark.parametrize('k,n', [(1, 3), (2, 4), (2, 7), (3, 6)])
    def test_matches_closed_form(self, k, n, rng):
        space = SpaceSpec.grassmann(k, n)
        base = haar_point(space, rng)
        tangent = random_tangent(space, 1.3, rng)
        a = exp_point(base, tangent).frame
        b = grassmann_exp_closed_form(base, tangent).frame
        assert np.max(np.abs(a - b)) < 1e-10

    @pytest.mark.parametrize('space', [
        SpaceSpec.stiefel(1, 4), SpaceSpec.stiefel(3, 5), SpaceSpec.unitary(4),
        SpaceSpec.grassmann(2, 6),
    ])
    def test_frame_preserved(self, space, rng):
        base = haar_stiefel(space, rng)
        for norm in (0.1, 1.0, 4.0):
            phi = exp_point(base, random_tangent(space, norm, rng)).frame
            assert np.max(np.abs(phi.conj().T @ phi - np.eye(space.k))) < 1e-11

    def test_geodesic_length_from_singular_values(self, rng):
        space = SpaceSpec.grassmann(2, 5)
        u = haar_stiefel(SpaceSpec.stiefel(2, 3), rng).frame
        w = random_unitary(rng, 2)
        s = np.array([1.2, 0.3])
        tangent = HorizontalTangent(np.zeros((2, 2)), (u * s) @ w.conj().T, space)
        base = haar_point(space, rng)
        q = exp_point(base, tangent)
        assert abs(geodesic_grassmann(base, q) - np.linalg.norm(s)) < 1e-9

    def test_dimension_mismatch(self, v24):
        base = StiefelPoint.canonical(5, 2)
        with pytest.raises(DimensionMismatch):
            exp_point(base, HorizontalTangent.zero(v24))


class TestLogUnitary:

    def test_identity(self):
        assert np.allclose(log_unitary(np.eye(3)), 0, atol=1e-15)

    def test_scalar(self):
        out = log_unitary([[1j]])
        assert abs(out[0, 0] - 0.5j * math.pi) < 1e-12

    @pytest.mark.parametrize('k', [1, 2, 4])
    def test_round_trip(self, k, rng):
        a = random_skew_hermitian(rng, k, scale=0.4)
        out = log_unitary(scipy.linalg.expm(a))
        assert np.max(np.abs(out - a)) < 1e-9
        assert np.allclose(out, -out.conj().T, atol=1e-15)

    def test_repeated_eigenvalues(self, rng):
        u = random_unitary(rng, 3)
        v = u @ np.diag(np.exp(1j * np.array([0.5, 0.5, -1.0]))) @ u.conj().T
        assert np.max(np.abs(scipy.linalg.expm(log_unitary(v)) - v)) < 1e-9

    def test_not_unitary(self):
        with pytest.raises(NotUnitary):
            log_unitary(2 * np.eye(2))
