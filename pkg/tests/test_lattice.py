import math

import numpy as np
import pytest

from traceless.lattice import (
    LatticePointSet,
    gaussian_points,
    leading_term_fit,
    optimize_configuration,
    pair_energy,
    pair_expectation,
)


def brute_force_moduli(m: int) -> np.ndarray:
    """Oracle: squared moduli of all lattice points out to radius 2 + sqrt(m/pi)."""
    r = int(math.ceil(2.0 + math.sqrt(m / math.pi)))
    n2 = [a * a + b * b for a in range(-r, r + 1) for b in range(-r, r + 1)]
    return np.sort(np.array(n2))[:m]


class TestGaussianPoints:
    def test_m1(self):
        ps = gaussian_points(1)
        assert ps.points.tolist() == [0j]

    def test_m5_set(self):
        got = set(gaussian_points(5).points.tolist())
        assert got == {0j, 1 + 0j, -1 + 0j, 1j, -1j}

    def test_m9_set(self):
        got = set(gaussian_points(9).points.tolist())
        expect = {0j, 1 + 0j, -1 + 0j, 1j, -1j, 1 + 1j, 1 - 1j, -1 + 1j, -1 - 1j}
        assert got == expect

    @pytest.mark.parametrize("m", [1, 2, 3, 7, 10, 25, 64, 137, 1000])
    def test_minimal_moduli_against_enumeration(self, m):
        pts = gaussian_points(m).points
        got = np.sort(np.abs(pts) ** 2)
        assert np.allclose(got, brute_force_moduli(m), atol=1e-9)

    @pytest.mark.parametrize("m", [1, 2, 5, 16, 100, 1024, 10_000, 100_000])
    def test_radius_bound(self, m):
        ps = gaussian_points(m)
        assert np.max(np.abs(ps.points)) <= 1.0 + math.sqrt(m / math.pi) + 1e-12

    def test_points_distinct_and_deterministic(self):
        a = gaussian_points(50).points
        b = gaussian_points(50).points
        assert np.array_equal(a, b)
        assert len(set(a.tolist())) == 50

    def test_prefix_nesting(self):
        # the canonical total order makes smaller sets exact prefixes
        big = gaussian_points(40).points
        for m in (1, 5, 12, 39):
            assert np.array_equal(gaussian_points(m).points, big[:m])

    def test_rejects_nonpositive(self):
        with pytest.raises(ValueError):
            gaussian_points(0)


class TestPairExpectation:
    def test_two_points_unit_distance(self):
        ps = LatticePointSet(m=2, points=np.array([0j, 1 + 0j]), radius_bound=2.0)
        rep = pair_expectation(ps)
        assert rep.pair_energy == pytest.approx(2.0)
        assert rep.expectation == pytest.approx(1.0)

    def test_cross_set(self):
        # four distance-1 pairs, four distance-sqrt(2), two distance-2
        rep = pair_expectation(gaussian_points(5))
        assert rep.pair_energy == pytest.approx(13.0, rel=1e-14)
        assert rep.expectation == pytest.approx(13.0 / 20.0, rel=1e-14)

    def test_scaling_homogeneity(self, rng):
        pts = gaussian_points(8).points
        base = pair_energy(pts)
        for t in (2.0, 0.5, 3.7):
            assert pair_energy(t * pts) == pytest.approx(base / t**2, rel=1e-12)

    def test_requires_two_points(self):
        with pytest.raises(ValueError):
            pair_expectation(gaussian_points(1))

    def test_coincident_points_rejected(self):
        ps = LatticePointSet(m=2, points=np.array([1j, 1j]), radius_bound=2.0)
        with pytest.raises(ValueError):
            pair_expectation(ps)

    @pytest.mark.parametrize("m", [4, 16, 100, 1000, 10_000])
    def test_energy_window(self, m):
        rep = pair_expectation(gaussian_points(m))
        excess = m * rep.expectation - math.pi * math.log(m)
        assert abs(excess) <= 10.0
        assert rep.expectation <= rep.bound_value


class TestOptimizeConfiguration:
    def test_zero_iterations_is_identity(self):
        pts, energy = optimize_configuration(5, 0, seed=3)
        assert np.array_equal(pts, gaussian_points(5).points)
        assert energy == pytest.approx(13.0)

    def test_two_points_spread_out(self):
        pts, energy = optimize_configuration(2, 500, seed=1)
        assert energy <= 2.0  # lattice value for {0, -1}

    def test_never_increases_and_stays_distinct(self):
        for m, iters, seed in ((16, 10_000, 7), (6, 300, 11)):
            base = pair_energy(gaussian_points(m).points)
            pts, energy = optimize_configuration(m, iters, seed)
            assert energy <= base
            assert len(pts) == m
            diffs = np.abs(pts[:, None] - pts[None, :])
            np.fill_diagonal(diffs, np.inf)
            assert np.min(diffs) > 0.0
            radius = 1.0 + math.sqrt(m / math.pi)
            assert np.max(np.abs(pts)) <= radius + 1e-12

    def test_deterministic(self):
        a = optimize_configuration(8, 200, seed=5)
        b = optimize_configuration(8, 200, seed=5)
        assert np.array_equal(a[0], b[0]) and a[1] == b[1]


class TestLeadingTermFit:
    def test_reference_list_slope_near_pi(self):
        slope, intercept = leading_term_fit([64, 256, 1024, 4096])
        assert 0.85 * math.pi <= slope <= 1.15 * math.pi

    def test_single_m_rejected(self):
        with pytest.raises(ValueError):
            leading_term_fit([64])

    def test_narrow_span_rejected(self):
        with pytest.raises(ValueError):
            leading_term_fit([32, 48, 64])

    def test_duplicates_collapsed(self):
        a = leading_term_fit([64, 256, 1024, 4096])
        b = leading_term_fit([64, 64, 256, 256, 1024, 4096])
        assert a == b
