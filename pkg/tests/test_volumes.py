import math

import pytest

from packbound.errors import DomainError, InvalidSpec
from packbound.geometry.space import SpaceSpec
from packbound.volumes import (
    MONTE_CARLO, BallModel, ball_volume_curved, ball_volume_envelope,
    exact_grassmann_ball, grassmann_ball_k1, log_ball_volume, log_sphere_volume,
    log_vol, log_vol_grassmann, log_vol_stiefel, log_vol_unitary,
)


def rel(a, b):
    return abs(a - b) / abs(b)


class TestTotalVolumes:

    def test_spheres_and_balls(self):
        assert rel(log_sphere_volume(2), math.log(2 * math.pi)) < 1e-12
        assert rel(log_sphere_volume(3), math.log(4 * math.pi)) < 1e-12
        assert rel(log_sphere_volume(4), math.log(2 * math.pi ** 2)) < 1e-12
        assert rel(log_ball_volume(2), math.log(math.pi)) < 1e-12
        assert rel(log_ball_volume(3), math.log(4 * math.pi / 3)) < 1e-12

    def test_sphere_needs_positive_dimension(self):
        with pytest.raises(InvalidSpec):
            log_sphere_volume(0)

    @pytest.mark.parametrize('k,n,expected', [
        (1, 1, 2 * math.pi),
        (1, 2, 2 * math.pi ** 2),
        (2, 2, 4 * math.pi ** 3),
        (1, 3, math.pi ** 3),
    ])
    def test_stiefel(self, k, n, expected):
        assert rel(log_vol_stiefel(k, n), math.log(expected)) < 1e-12

    def test_unitary_recursion(self):
        for n in range(1, 9):
            assert abs(log_vol_unitary(n) - log_vol_stiefel(n, n)) < 1e-12 * max(1, abs(log_vol_unitary(n)))

    @pytest.mark.parametrize('k,n,expected', [
        (1, 2, math.pi),
        (1, 3, math.pi ** 2 / 2),
    ])
    def test_grassmann(self, k, n, expected):
        assert rel(log_vol_grassmann(k, n), math.log(expected)) < 1e-12

    def test_dispatch(self):
        assert log_vol(SpaceSpec.grassmann(2, 5)) == log_vol_grassmann(2, 5)
        assert log_vol(SpaceSpec.stiefel(2, 5)) == log_vol_stiefel(2, 5)

    def test_large_dimensions_stay_finite(self):
        assert math.isfinite(log_vol_stiefel(8, 4000))
        assert math.isfinite(log_vol_grassmann(8, 4000))

    @pytest.mark.parametrize('k,n', [(0, 3), (4, 3)])
    def test_invalid_stiefel(self, k, n):
        with pytest.raises(InvalidSpec):
            log_vol_stiefel(k, n)

    def test_invalid_grassmann(self):
        with pytest.raises(InvalidSpec):
            log_vol_grassmann(2, 3)


class TestCurvedBalls:

    def test_flat(self):
        assert rel(ball_volume_curved(BallModel(0, 2), 1.0), math.log(math.pi)) < 1e-12
        assert ball_volume_curved(BallModel(0, 5), 0.0) == -math.inf

    @pytest.mark.parametrize('r', [0.1, 1.0, 2.0, 3.0])
    def test_unit_sphere_surface(self, r):
        expected = math.log(2 * math.pi * (1 - math.cos(r)))
        assert abs(ball_volume_curved(BallModel(1, 2), r) - expected) < 1e-10

    @pytest.mark.parametrize('r', [0.2, math.pi / 6, 1.2])
    def test_curvature_four_surface(self, r):
        expected = math.log(math.pi * math.sin(r) ** 2)
        assert abs(ball_volume_curved(BallModel(4, 2), r) - expected) < 1e-10

    def test_one_dimensional(self):
        assert abs(ball_volume_curved(BallModel(2, 1), 0.5) - math.log(1.0)) < 1e-12

    @pytest.mark.parametrize('kappa,d', [(1, 3), (4, 2), (2.5, 7)])
    def test_full_radius_is_whole_sphere(self, kappa, d):
        model = BallModel(kappa, d)
        assert abs(ball_volume_curved(model, model.max_radius) - model.log_total_volume()) < 1e-10

    def test_ordered_in_curvature(self):
        for r in (0.1, 0.5, 0.9):
            v4 = ball_volume_curved(BallModel(4, 6), r)
            v1 = ball_volume_curved(BallModel(1, 6), r)
            v0 = ball_volume_curved(BallModel(0, 6), r)
            assert v4 <= v1 <= v0

    def test_increasing_in_radius(self):
        model = BallModel(2.5, 12)
        values = [ball_volume_curved(model, r) for r in (0.1, 0.4, 0.8, 1.6)]
        assert values == sorted(values)

    def test_high_dimension(self):
        curved = ball_volume_curved(BallModel(4, 2000), 0.5)
        flat = ball_volume_curved(BallModel(0, 2000), 0.5)
        assert math.isfinite(curved)
        assert curved < flat

    def test_domain(self):
        with pytest.raises(DomainError):
            ball_volume_curved(BallModel(1, 3), math.pi + 0.1)
        with pytest.raises(DomainError):
            ball_volume_curved(BallModel(0, 3), -0.1)

    def test_model_validation(self):
        with pytest.raises(InvalidSpec):
            BallModel(-1, 3)
        with pytest.raises(InvalidSpec):
            BallModel(1, 0)


class TestExactGrassmannBalls:

    @pytest.mark.parametrize('n', [2, 3, 5])
    @pytest.mark.parametrize('r', [0.3, 0.7, 1.2])
    def test_line_spaces_match_closed_form(self, n, r):
        value, error = exact_grassmann_ball(1, n, r)
        closed = grassmann_ball_k1(n, r)
        assert math.expm1(abs(value - closed)) < 1e-8
        assert error < 1e-6

    @pytest.mark.parametrize('k,n', [(1, 3), (2, 4)])
    def test_full_radius_is_total_volume(self, k, n):
        value, _ = exact_grassmann_ball(k, n, math.sqrt(k) * math.pi / 2)
        assert math.expm1(abs(value - log_vol_grassmann(k, n))) < 1e-6

    @pytest.mark.slow
    def test_full_radius_three_dimensional_angles(self):
        value, _ = exact_grassmann_ball(3, 6, math.sqrt(3) * math.pi / 2)
        assert math.expm1(abs(value - log_vol_grassmann(3, 6))) < 1e-6

    def test_perfect_packing_of_two_lines(self):
        assert abs(grassmann_ball_k1(2, math.pi / 4) + math.log(2) - math.log(math.pi)) < 1e-9

    def test_monte_carlo_agrees(self):
        det, _ = exact_grassmann_ball(2, 4, 0.5)
        mc, err = exact_grassmann_ball(2, 4, 0.5, method=MONTE_CARLO, seed=3, samples=10 ** 6)
        assert abs(math.expm1(mc - det)) <= 4 * err

    @pytest.mark.slow
    def test_monte_carlo_agrees_at_ten_million(self):
        det, _ = exact_grassmann_ball(2, 4, 0.5)
        mc, err = exact_grassmann_ball(2, 4, 0.5, method=MONTE_CARLO, seed=4, samples=10 ** 7)
        assert abs(math.expm1(mc - det)) <= 3 * err

    def test_monte_carlo_is_seeded(self):
        a = exact_grassmann_ball(2, 5, 0.8, method=MONTE_CARLO, seed=9, samples=50000)
        b = exact_grassmann_ball(2, 5, 0.8, method=MONTE_CARLO, seed=9, samples=50000)
        assert a == b

    def test_zero_radius(self):
        assert exact_grassmann_ball(2, 4, 0.0)[0] == -math.inf

    def test_radius_beyond_diameter(self):
        with pytest.raises(InvalidSpec):
            exact_grassmann_ball(2, 4, 2.5)

    def test_deterministic_needs_few_angles(self):
        with pytest.raises(InvalidSpec):
            exact_grassmann_ball(4, 8, 0.5)

    def test_unknown_method(self):
        with pytest.raises(InvalidSpec):
            exact_grassmann_ball(1, 3, 0.5, method='simpson')


class TestEnvelope:

    @pytest.mark.parametrize('k,n', [(1, 2), (1, 3), (2, 4)])
    @pytest.mark.parametrize('r', [0.25, 0.5, 1.0])
    def test_exact_volume_inside_envelope(self, k, n, r):
        env = ball_volume_envelope(SpaceSpec.grassmann(k, n), r)
        assert env.lower <= env.exact + 1e-9
        assert env.exact <= env.upper + 1e-9

    def test_stiefel_has_no_exact_value(self, v24):
        env = ball_volume_envelope(v24, 0.5)
        assert env.exact is None
        assert env.lower <= env.upper

    def test_lower_clamped_past_model_radius(self, g12):
        env = ball_volume_envelope(g12, 3.0, kappa_bar=4.0)
        assert abs(env.lower - BallModel(4.0, 2).log_total_volume()) < 1e-10
