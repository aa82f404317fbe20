import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from schwarzpick.blaschke import ScaledBlaschke
from schwarzpick.construct import (AssemblyInputs, assemble_solution, audit_f1_properties,
                                   auxiliary_values, grid_sup, nearest_pairing, necessity_stress,
                                   outer_for)
from schwarzpick.errors import PoleError
from schwarzpick.hyperbolic import hyp_dist, hyperbolic_lattice
from schwarzpick.quotients import column_condition_check, epsilon_of
from schwarzpick.solver import solvability

from conftest import random_disc

Z1 = np.array([0.0, 0.6, -0.5j])
B1 = ScaledBlaschke(1, 1, Z1)
F1 = ScaledBlaschke(1j, 0.5, [0.2, -0.3 + 0.1j])


def inputs(f1=F1, f_tilde=None):
    E1 = outer_for(f1, 1024)
    if f_tilde is None:
        return AssemblyInputs(f1, B1, E1)
    return AssemblyInputs(f1, B1, E1, f_tilde)


def cluster(rng, n_points, diameter):
    centre = random_disc(rng, 1, 0.5)[0]
    t = np.tanh(diameter / 4 * np.sqrt(rng.uniform(size=n_points)))
    pts = t * np.exp(2j * np.pi * rng.uniform(size=n_points))
    return (centre + pts) / (1 + np.conj(centre) * pts)


class TestAuxiliary:
    def test_matching_values(self):
        nodes = np.array([0.3, 0.1 + 0.4j])
        aux = auxiliary_values(inputs(), nodes, F1(nodes))
        assert np.max(np.abs(aux.w_tilde)) < 1e-15

    def test_zero_f1(self):
        zero = ScaledBlaschke(1, 0.0, [])
        E1 = outer_for(zero, 256)
        inp = AssemblyInputs(zero, B1, E1)
        nodes = np.array([0.3, 0.1 + 0.4j])
        w = np.array([0.2, -0.1j])
        aux = auxiliary_values(inp, nodes, w)
        assert np.allclose(aux.w_tilde, -w / (B1(nodes) * E1(nodes)), atol=1e-15)

    @settings(max_examples=25, deadline=None)
    @given(st.integers(0, 100_000))
    def test_split_identity(self, seed):
        rng = np.random.default_rng(seed)
        nodes = random_disc(rng, 6, 0.9)
        w = 0.8 * random_disc(rng, 6, 1.0)
        aux = auxiliary_values(inputs(), nodes, w)
        assert aux.split_residual < 1e-12
        # independent recomputation of each part
        div = B1(nodes) * outer_for(F1, 1024)(nodes)
        paired = Z1[nearest_pairing(nodes, Z1)]
        assert np.allclose(aux.h_part, 2 * (F1(nodes) - F1(paired)) / div, rtol=1e-12)
        assert np.allclose(aux.t_part, 2 * (F1(paired) - w) / div, rtol=1e-12)

    def test_pairing_ties(self):
        assert list(nearest_pairing([0.3j, -0.3j], [0.3, -0.3])) == [0, 0]

    def test_pole(self):
        with pytest.raises(PoleError):
            auxiliary_values(inputs(), [0.6, 0.2], [0.1, 0.1])


class TestAssembly:
    def test_zero_tilde(self):
        f = assemble_solution(inputs())
        grid = hyperbolic_lattice(0.2, 2.0)
        assert np.array_equal(f(grid), F1(grid))

    def test_exact_on_zeros(self):
        f = assemble_solution(inputs(f_tilde=lambda z: 0.3 + 0.2 * z))
        assert np.array_equal(f(Z1), F1(Z1))

    def test_interpolation_through_tilde(self):
        rng = np.random.default_rng(4)
        nodes = random_disc(rng, 3, 0.8)
        w = 0.4 * random_disc(rng, 3, 1.0)
        aux = auxiliary_values(inputs(), nodes, w)
        # any function through (nodes, w_tilde) reproduces the targets
        coeffs = np.polyfit(nodes, aux.w_tilde, 2)
        f = assemble_solution(inputs(f_tilde=lambda z: np.polyval(coeffs, z)))
        assert np.max(np.abs(f(nodes) - w)) < 1e-9

    def test_grid_sup(self):
        assert grid_sup(ScaledBlaschke(1, 0.5, [0]), 3.0, 0.2) == pytest.approx(0.5 * math.tanh(1.5))


class TestAuditF1:
    def test_constant_outer(self):
        f1 = ScaledBlaschke(1, 0.4, [0.3, -0.2j])
        audit = audit_f1_properties(f1, [0.3], 1.0, 0.5, grid_radius_beta=2.0, node_count=1024)
        assert audit.prop1_constant >= 0.6 - 1e-9
        assert audit.excluded_prop1 == 0

    def test_constant_f1(self):
        audit = audit_f1_properties(ScaledBlaschke(1, 0.3, []), [0.1, 0.5j], 1.0, 0.2,
                                    grid_radius_beta=2.0, node_count=512)
        assert audit.prop2_constant == 0

    def test_half_identity(self):
        f1 = ScaledBlaschke(1, 0.5, [0])
        audit = audit_f1_properties(f1, [0], 1.0, 1.0, grid_radius_beta=2.0, node_count=512)
        local = hyperbolic_lattice(0.1, 1.0)[1:]
        expected = np.max(hyp_dist(local / 2, 0) / hyp_dist(local, 0))
        assert audit.prop2_constant == pytest.approx(expected, rel=1e-12)
        assert audit.prop2_constant <= 1


class TestStress:
    def test_two_points(self):
        case = necessity_stress([0, 0.01], 0.1, 0.5)
        assert np.allclose(case.values, [0, 0.05])
        assert case.order == (0, 1)

    def test_values_vanish_off_last(self, rng):
        z = cluster(rng, 4, 0.05)
        case = necessity_stress(z, 0.1, 0.25)
        last = case.order[-1]
        assert np.count_nonzero(case.values) == 1 and case.values[last] != 0
        assert last == min(range(1, 4), key=lambda j: hyp_dist(z[0], z[j]))

    def test_validation(self):
        with pytest.raises(ValueError):
            necessity_stress([0.1], 0.1, 0.25)
        with pytest.raises(ValueError):
            necessity_stress([0.1, 0.2], 0.1, 1.5)

    @pytest.mark.parametrize("seed", range(10))
    def test_subsets_compatible(self, seed):
        rng = np.random.default_rng(seed)
        z = cluster(rng, 4, 0.05)
        eps, C = 0.1, 0.25
        case = necessity_stress(z, eps, C)
        for sub in itertools.combinations(range(4), 3):
            idx = list(sub)
            assert epsilon_of(z[idx], case.values[idx]).epsilon_min <= C * eps * (1 + 1e-12)
            # the column condition against eps holds in every order
            assert column_condition_check(z[idx], case.values[idx], eps)[0]

    @pytest.mark.parametrize("seed", range(10))
    def test_full_problem_breaks(self, seed):
        rng = np.random.default_rng(seed)
        z = cluster(rng, 4, 0.05)
        case = necessity_stress(z, 0.1, 0.25)
        assert solvability(z, case.values).status in ("Boundary", "Unsolvable")
