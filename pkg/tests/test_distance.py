import math

import numpy as np
import pytest

from packbound.errors import DimensionMismatch
from packbound.geometry.distance import (
    batch_chordal_grassmann, batch_chordal_stiefel, batch_geodesic_grassmann,
    chordal_grassmann, chordal_stiefel, geodesic_grassmann, max_geodesic_grassmann,
    pairwise_chordal_grassmann, pairwise_chordal_stiefel, pairwise_geodesic_grassmann,
    principal_angles, projector,
)
from packbound.geometry.space import (
    GrassmannPoint, SpaceSpec, StiefelPoint, haar_point, haar_stiefel,
)


def line(t):
    return StiefelPoint([math.cos(t), math.sin(t)])


class TestPrincipalAngles:

    def test_equal_frames(self, v24):
        p = haar_stiefel(v24, 0)
        assert np.allclose(principal_angles(p, p), 0, atol=1e-7)

    def test_orthogonal_lines(self):
        assert np.allclose(principal_angles(line(0), line(math.pi / 2)), [math.pi / 2])

    @pytest.mark.parametrize('t', [0.0, 0.2, 0.9, math.pi / 2])
    def test_lines_at_angle(self, t):
        assert abs(principal_angles(line(0), line(t))[0] - t) < 1e-7

    def test_sorted_and_bounded(self):
        space = SpaceSpec.grassmann(3, 7)
        theta = principal_angles(haar_stiefel(space, 1), haar_stiefel(space, 2))
        assert np.all(np.diff(theta) >= 0)
        assert np.all((theta >= 0) & (theta <= math.pi / 2))

    def test_shape_mismatch(self):
        with pytest.raises(DimensionMismatch):
            principal_angles(StiefelPoint.canonical(3, 1), StiefelPoint.canonical(4, 1))


class TestChordal:

    def test_stiefel_examples(self):
        assert chordal_stiefel(line(0.4), line(0.4)) == 0
        assert abs(chordal_stiefel(np.eye(2), -np.eye(2)) - 2 * math.sqrt(2)) < 1e-15
        assert abs(chordal_stiefel(line(0), line(math.pi / 2)) - math.sqrt(2)) < 1e-15

    def test_stiefel_shape_mismatch(self):
        with pytest.raises(DimensionMismatch):
            chordal_stiefel(StiefelPoint.canonical(3, 1), StiefelPoint.canonical(3, 2))

    @pytest.mark.parametrize('t', [0.0, 0.5, math.pi / 2])
    def test_grassmann_lines(self, t):
        assert abs(chordal_grassmann(line(0), line(t)) - math.sin(t)) < 1e-7

    @pytest.mark.parametrize('k,n', [(1, 3), (2, 4), (3, 9)])
    def test_grassmann_matches_projectors(self, k, n):
        space = SpaceSpec.grassmann(k, n)
        p, q = haar_point(space, 3), haar_point(space, 4)
        expected = np.linalg.norm(projector(p) - projector(q)) / math.sqrt(2)
        assert abs(chordal_grassmann(p, q) - expected) < 1e-10

    def test_grassmann_ignores_representative(self):
        space = SpaceSpec.grassmann(2, 5)
        p = haar_stiefel(space, 8)
        rotated = StiefelPoint(p.frame @ np.array([[0, 1j], [1, 0]]))
        q = haar_stiefel(space, 9)
        assert abs(chordal_grassmann(p, q) - chordal_grassmann(rotated, q)) < 1e-10
        assert abs(geodesic_grassmann(p, q) - geodesic_grassmann(rotated, q)) < 1e-7


class TestGeodesic:

    def test_examples(self):
        assert geodesic_grassmann(line(1.0), line(1.0)) < 1e-7
        assert abs(geodesic_grassmann(line(0), line(math.pi / 2)) - math.pi / 2) < 1e-12
        assert abs(geodesic_grassmann(line(0), line(0.7)) - 0.7) < 1e-7

    def test_bounded_by_diameter(self):
        space = SpaceSpec.grassmann(3, 6)
        for seed in range(5):
            p, q = haar_point(space, seed), haar_point(space, seed + 10)
            assert geodesic_grassmann(p, q) <= max_geodesic_grassmann(3) + 1e-12

    def test_chordal_below_geodesic(self):
        space = SpaceSpec.grassmann(2, 6)
        for seed in range(5):
            p, q = haar_point(space, seed), haar_point(space, seed + 10)
            d, r = chordal_grassmann(p, q), geodesic_grassmann(p, q)
            assert d <= r <= math.pi / 2 * d + 1e-12


class TestBatch:

    @pytest.fixture
    def frames(self):
        space = SpaceSpec.grassmann(2, 5)
        points = [haar_stiefel(space, seed) for seed in range(6)]
        return np.stack([p.frame for p in points]), points

    def test_agree_with_single_pair(self, frames):
        stacked, points = frames
        q = haar_stiefel(SpaceSpec.grassmann(2, 5), 99)
        assert np.allclose(batch_chordal_stiefel(stacked, q),
                           [chordal_stiefel(p, q) for p in points], atol=1e-12)
        assert np.allclose(batch_chordal_grassmann(stacked, q),
                           [chordal_grassmann(p, q) for p in points], atol=1e-10)
        assert np.allclose(batch_geodesic_grassmann(stacked, q),
                           [geodesic_grassmann(p, q) for p in points], atol=1e-10)

    def test_shape_mismatch(self, frames):
        stacked, _ = frames
        with pytest.raises(DimensionMismatch):
            batch_chordal_stiefel(stacked, StiefelPoint.canonical(5, 1))

    def test_accepts_grassmann_points(self):
        p = GrassmannPoint(line(0.3))
        stacked = np.stack([line(0).frame, line(1.0).frame])
        assert np.allclose(batch_geodesic_grassmann(stacked, p), [0.3, 0.7], atol=1e-7)

    def test_pairwise_table(self, frames):
        stacked, points = frames
        others = stacked[:3]
        table = pairwise_geodesic_grassmann(stacked, others)
        assert table.shape == (3, 6)
        for b in range(3):
            for m in range(6):
                assert abs(table[b, m] - geodesic_grassmann(points[m], points[b])) < 1e-7
        assert np.allclose(np.diag(table), 0, atol=1e-7)
        assert np.allclose(pairwise_chordal_stiefel(stacked, others)[:, 3],
                           [chordal_stiefel(points[3], p) for p in points[:3]], atol=1e-12)
        assert np.allclose(pairwise_chordal_grassmann(stacked, others)[1],
                           [chordal_grassmann(p, points[1]) for p in points], atol=1e-10)

    def test_pairwise_shape_mismatch(self, frames):
        stacked, _ = frames
        with pytest.raises(DimensionMismatch):
            pairwise_chordal_stiefel(stacked, np.zeros((2, 5, 1)))
