import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from schwarzpick.blaschke import (BoundaryModulus, OuterFunction, ScaledBlaschke, automorphism,
                                  blaschke_deriv, blaschke_eval, hyp_deriv, make_test_family,
                                  numeric_derivative, outer_eval)
from schwarzpick.errors import DegenerateBoundaryError, InvalidBoundaryData
from schwarzpick.hyperbolic import hyperbolic_lattice

from conftest import random_disc

GRID = hyperbolic_lattice(0.1, 4.0)


def central_difference(f, z, h=1e-6):
    return (f(z + h) - f(z - h)) / (2 * h)


class TestEval:
    def test_zero_at_origin_is_identity(self):
        f = ScaledBlaschke(1, 1, [0])
        assert f(0.3 - 0.2j) == pytest.approx(0.3 - 0.2j, abs=1e-16)

    def test_constant(self):
        f = ScaledBlaschke(1, 0.4j, [])
        assert f(0.7) == pytest.approx(0.4j)
        assert f.degree == 0

    def test_square(self):
        assert blaschke_eval(ScaledBlaschke(1, 1, [0, 0]), 0.5) == pytest.approx(0.25)

    def test_vanishes_at_zeros(self):
        f = ScaledBlaschke(1j, 0.8, [0.3, -0.5j])
        assert abs(f(0.3)) < 1e-15 and abs(f(-0.5j)) < 1e-15

    def test_validation(self):
        with pytest.raises(ValueError):
            ScaledBlaschke(2.0, 1, [])
        with pytest.raises(ValueError):
            ScaledBlaschke(1, 1.5, [])
        with pytest.raises(ValueError):
            ScaledBlaschke(1, 1, [1.2])

    @pytest.mark.parametrize("seed", range(5))
    def test_boundary_modulus(self, seed):
        f = make_test_family(seed, 1, 4)[0]
        t = np.linspace(0, 2 * np.pi, 257)
        z = (1 - 1e-9) * np.exp(1j * t)
        assert np.max(np.abs(np.abs(f(z)) - abs(f.scale))) < 1e-6


class TestDerivative:
    def test_square(self):
        assert blaschke_deriv(ScaledBlaschke(1, 1, [0, 0]), 0.5) == pytest.approx(1.0)

    def test_constant(self):
        assert blaschke_deriv(ScaledBlaschke(1, 0.5, []), 0.2) == 0

    def test_single_zero_against_finite_difference(self):
        f = ScaledBlaschke(1, 1, [0.5])
        # closed form of (|a|/a)(a - z)/(1 - conj(a) z) at 0 is |a|^2 - 1 scaled by |a|/a
        assert blaschke_deriv(f, 0) == pytest.approx(central_difference(f, 0.0), abs=1e-8)
        assert blaschke_deriv(f, 0) == pytest.approx(-0.75, abs=1e-14)

    @settings(max_examples=50, deadline=None)
    @given(st.integers(0, 10_000))
    def test_random_against_finite_difference(self, seed):
        rng = np.random.default_rng(seed)
        f = make_test_family(seed, 1, 4)[0]
        z = random_disc(rng, 4, 0.8)
        assert np.allclose(blaschke_deriv(f, z), central_difference(f, z), atol=1e-6)

    def test_cauchy_derivative(self):
        f = make_test_family(3, 1, 3)[0]
        z = np.array([0.0, 0.5j, -0.9])
        assert np.allclose(numeric_derivative(f, z), f.derivative(z), atol=1e-10)


class TestHypDeriv:
    def test_linear(self):
        f = ScaledBlaschke(1, 0.3 + 0.1j, [0])
        assert hyp_deriv(f, 0) == pytest.approx(0.3 + 0.1j)

    def test_square(self):
        assert hyp_deriv(ScaledBlaschke(1, 1, [0, 0]), 0.5) == pytest.approx(0.8)

    @pytest.mark.parametrize("a", [0.0, 0.5, 0.3 - 0.7j])
    def test_automorphism_isometric(self, a):
        f = automorphism(a, 1j)
        grid = GRID[np.abs(GRID - a) > 1e-3] if a != 0 else GRID
        assert np.max(np.abs(np.abs(hyp_deriv(f, grid)) - 1)) < 1e-12

    @pytest.mark.parametrize("seed", range(10))
    def test_schwarz_pick(self, seed):
        f = make_test_family(seed, 1, 3)[0]
        if abs(f.scale) > 1 - 1e-9 and f.degree:
            pytest.skip("unimodular scale")
        assert np.max(np.abs(hyp_deriv(f, GRID))) <= 1 + 1e-12

    def test_degenerate(self):
        with pytest.raises(DegenerateBoundaryError):
            hyp_deriv(ScaledBlaschke(1, 1, []), 0.2)

    def test_generic_callable(self):
        assert hyp_deriv(lambda z: z / 2, 0) == pytest.approx(0.5, abs=1e-12)


class TestOuter:
    def test_constant(self):
        m = BoundaryModulus(lambda t: np.full_like(t, 0.5), 512)
        z = np.array([0, 0.5, 0.3 - 0.8j])
        assert np.allclose(outer_eval(m, z), 0.5, atol=1e-13)

    def test_geometric_mean_at_centre(self):
        m = BoundaryModulus(lambda t: 1.5 + np.cos(3 * t), 1024)
        assert outer_eval(m, 0) == pytest.approx(np.exp(np.mean(np.log(m.samples))), abs=1e-14)

    def test_from_scaled_blaschke(self):
        f1 = ScaledBlaschke(1, 0.5, [0, 0])
        E = OuterFunction(BoundaryModulus.from_self_map(f1, 1024))
        assert np.allclose(E(GRID[np.abs(GRID) < 0.95]), 0.5, atol=1e-12)

    def test_boundary_modulus_reproduced(self):
        m = BoundaryModulus(lambda t: np.exp(np.cos(t)), 4096)
        # log|E| is the Poisson extension of cos, i.e. Re z
        z = np.array([0.2, -0.5j, 0.7 + 0.1j])
        assert np.allclose(np.log(np.abs(outer_eval(m, z))), z.real, atol=1e-12)

    def test_quadrature_convergence(self):
        w = lambda t: 1.2 + np.sin(t) * np.cos(2 * t)  # noqa: E731
        z = np.array([0.6, 0.85j])
        errs = [np.max(np.abs(outer_eval(BoundaryModulus(w, n), z) - outer_eval(BoundaryModulus(w, 2 * n), z)))
                for n in (32, 64, 128)]
        assert errs[0] > errs[1] > errs[2]
        assert errs[2] < 1e-8

    def test_zero_free(self):
        m = BoundaryModulus(lambda t: 0.1 + np.abs(np.sin(t)), 4096)
        assert np.min(np.abs(outer_eval(m, GRID[np.abs(GRID) < 0.95]))) > 0

    def test_clipping(self):
        m = BoundaryModulus(lambda t: np.where(np.abs(np.sin(t)) < 1e-3, 0.0, 1.0), 4096)
        assert m.clipped_count > 0
        assert np.all(np.isfinite(m.log_samples))

    @pytest.mark.parametrize("bad", [-1.0, np.nan])
    def test_invalid(self, bad):
        with pytest.raises(InvalidBoundaryData):
            BoundaryModulus(lambda t: np.full_like(t, bad), 64).samples

    def test_margin(self):
        m = BoundaryModulus(lambda t: np.ones_like(t), 64)
        with pytest.raises(ValueError):
            outer_eval(m, 0.995)


class TestFamily:
    def test_deterministic(self):
        assert make_test_family(7, 20, 3) == make_test_family(7, 20, 3)
        assert make_test_family(7, 20, 3) != make_test_family(8, 20, 3)

    def test_degree_zero(self):
        (f,) = make_test_family(1, 1, 0)
        assert f.degree == 0

    def test_in_unit_ball(self):
        family = make_test_family(11, 100, 3)
        assert len(family) == 100
        for f in family:
            assert f.degree <= 3
            assert 0.3 <= abs(f.scale) <= 1
            assert np.max(np.abs(f(GRID))) <= 1 + 1e-12
            assert all(np.abs(f.zeros) <= np.tanh(1.5) + 1e-12)
