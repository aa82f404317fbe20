import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from schwarzpick.blaschke import automorphism
from schwarzpick.hyperbolic import hyperbolic_lattice
from schwarzpick.sequences import (CarlesonSquare, carleson_layer_counts, clique_lower_bound,
                                   decompose_separated, density_constant, fit_density, layer_index,
                                   layer_sup, order_check, r_density, separation_constant)

from conftest import random_disc

RADIAL = 1 - 2.0 ** -np.arange(1, 21)


def violator(depth=8, power=0.9):
    """Exactly ceil(2^(power m)) points in layer m of one fixed square."""
    side = 2 * np.pi / 8
    pts = []
    for m in range(1, depth + 1):
        count = math.ceil(2 ** (power * m))
        r = 1 - 0.75 * side * 2.0**-m
        pts.extend(r * np.exp(1j * np.linspace(-0.9 * side, 0.9 * side, count)))
    return np.array(pts), CarlesonSquare(0.0, side)


class TestSeparation:
    def test_pair(self):
        assert separation_constant([0, 0.5]) == pytest.approx(math.log(3))

    def test_triple(self):
        assert separation_constant([0, 0.5, -0.5]) == pytest.approx(math.log(3))

    def test_near_duplicate(self):
        b = 1e-4
        assert separation_constant([0, math.tanh(b / 2)]) == pytest.approx(b, rel=1e-10)

    def test_needs_two(self):
        with pytest.raises(ValueError):
            separation_constant([0.1])

    @settings(max_examples=30, deadline=None)
    @given(st.integers(0, 100_000))
    def test_automorphism_covariance(self, seed):
        rng = np.random.default_rng(seed)
        z = random_disc(rng, 6, 0.9)
        a = random_disc(rng, 1, 0.8)[0]
        tau = automorphism(a, np.exp(1j * rng.uniform(0, 6)))
        assert abs(separation_constant(tau(z)) - separation_constant(z)) < 1e-12 * max(1, separation_constant(z))


class TestDecompose:
    def test_close_pair(self):
        parts, count = decompose_separated([0, math.tanh(0.05)], 0.5)
        assert count == 2

    def test_separated(self):
        parts, count = decompose_separated(hyperbolic_lattice(1.0, 3.0), 0.5)
        assert count == 1 and len(parts[0]) == hyperbolic_lattice(1.0, 3.0).size

    def test_cluster(self):
        z = np.tanh(0.1 / 2 * np.array([0, 1, 2, 3]) / 3) * np.exp(1j * np.arange(4))
        parts, count = decompose_separated(z, 0.5)
        assert count == 4 and clique_lower_bound(z, 0.5) == 4

    @settings(max_examples=30, deadline=None)
    @given(st.integers(0, 100_000), st.floats(0.1, 2.0))
    def test_parts_are_separated(self, seed, eta):
        rng = np.random.default_rng(seed)
        z = random_disc(rng, 25, 0.95)
        parts, count = decompose_separated(z, eta)
        assert sorted(i for p in parts for i in p) == list(range(25))
        for p in parts:
            if len(p) >= 2:
                assert separation_constant(z[p]) >= eta
        assert clique_lower_bound(z, eta) <= count

    def test_empty(self):
        assert decompose_separated([], 1.0) == ([], 0)


class TestLayers:
    def test_empty(self):
        assert carleson_layer_counts([], CarlesonSquare(0, 1), 5) == [0] * 5

    def test_radial_edges(self):
        counts = carleson_layer_counts(RADIAL, CarlesonSquare(0.0, 1.0), 20)
        assert counts == [1] * 20
        assert list(layer_index(RADIAL, 1.0)) == list(range(1, 21))

    def test_outside_window(self):
        Q = CarlesonSquare(0.0, 0.5)
        assert not Q.contains(0.9 * np.exp(0.5j))
        assert Q.contains(0.9 * np.exp(0.49j))
        assert carleson_layer_counts([0.9 * np.exp(0.6j)], Q, 5) == [0] * 5

    def test_angle_wraps(self):
        Q = CarlesonSquare(np.pi - 0.01, 0.1)
        assert Q.contains(0.95 * np.exp(-1j * (np.pi - 0.02)))

    @settings(max_examples=30, deadline=None)
    @given(st.integers(0, 100_000), st.integers(1, 12))
    def test_partition(self, seed, m_max):
        rng = np.random.default_rng(seed)
        z = 1 - 10 ** rng.uniform(-5, 0, 200) * np.exp(0j)
        z = np.abs(z) * np.exp(1j * rng.uniform(-1, 1, 200))
        Q = CarlesonSquare(0.1, 0.6)
        inside = z[Q.contains(z)]
        m = layer_index(inside, Q.side)
        counts = carleson_layer_counts(z, Q, m_max)
        assert sum(counts) + np.count_nonzero(m > m_max) + np.count_nonzero(m < 1) == inside.size
        assert np.all(m >= 0)


class TestDensity:
    def test_radial(self):
        M, alpha = fit_density(RADIAL, 8)
        assert alpha == 0.05 and M <= 3

    def test_violator(self):
        z, Q = violator()
        assert carleson_layer_counts(z, Q, 8) == [math.ceil(2 ** (0.9 * m)) for m in range(1, 9)]
        M, alpha = fit_density(z, 8)
        assert alpha >= 0.9

    def test_empty(self):
        assert fit_density([], 8) == (0.0, 0.05)

    def test_no_alpha(self):
        z, _ = violator(power=1.0)
        assert fit_density(z, 8, (0.5, 0.9)) == (math.inf, math.inf)

    def test_grid_validation(self):
        with pytest.raises(ValueError):
            fit_density(RADIAL, 8, (0.5, 1.0))

    @settings(max_examples=20, deadline=None)
    @given(st.integers(0, 100_000), st.sampled_from([0.1, 0.5, 0.9]))
    def test_monotone_in_Z(self, seed, alpha):
        rng = np.random.default_rng(seed)
        z = random_disc(rng, 40, 0.999)
        extra = random_disc(rng, 10, 0.999)
        assert density_constant(np.concatenate([z, extra]), alpha, 6) >= density_constant(z, alpha, 6)
        assert np.all(layer_sup(np.concatenate([z, extra]), 6) >= layer_sup(z, 6))


class TestRDensity:
    def test_single_point(self):
        assert r_density([0], 2.0, 0.25) == pytest.approx(2.0)

    def test_lattice(self):
        assert r_density(hyperbolic_lattice(0.5, 4.0), 3.0, 0.1) <= 0.5

    def test_radial_grows(self):
        values = [r_density(RADIAL, R, 0.25) for R in (2, 4, 6)]
        assert values[0] < values[1] < values[2]
        # the antipodal probe at radius R is at least R away from every radial point
        assert values[2] >= 6.0 - 1e-9

    def test_more_points_never_increase(self, rng):
        z = random_disc(rng, 30, 0.9)
        extra = random_disc(rng, 30, 0.9)
        assert r_density(np.concatenate([z, extra]), 3.0, 0.25) <= r_density(z, 3.0, 0.25)


class TestOrderCheck:
    def test_separated(self):
        rep = order_check(hyperbolic_lattice(1.0, 3.0), 2, 0.5)
        assert rep.part_count == 1 and rep.condition_a

    def test_cluster(self):
        z = 0.3 + 0.01 * np.exp(2j * np.pi * np.arange(3) / 3)
        rep = order_check(z, 2, 0.5)
        assert rep.part_count == 3 and rep.clique_bound == 3
        assert not rep.condition_a
        assert rep.order == 1

    def test_radial(self):
        rep = order_check(RADIAL, 2, 0.5, probe_radius_beta=2.0, grid_step_beta=0.25)
        assert rep.condition_a and rep.condition_b
        assert rep.carleson_alpha == 0.05
        assert rep.density_R is not None and rep.probe_radius_beta == 2.0
