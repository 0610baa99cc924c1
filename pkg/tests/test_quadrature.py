"""Torus-quadrature engine tests: sampling, coefficient extraction, adaptive
summaries, and agreement with the exact oracle."""

from fractions import Fraction

import numpy as np
import pytest

from polylens.errors import (
    AliasingRisk,
    DimensionMismatch,
    GridTooLarge,
    NonConvergent,
    PoleOnTorus,
)
from polylens.expr import parse
from polylens.laurent import decompose, matrix_to_complex, variance_exact
from polylens.quadrature import (
    GridFunction,
    expectation_numeric,
    first_order_summary,
    inner_product_numeric,
    laurent_coefficient,
    sample_torus,
    spectral_summary,
)
from polylens.verify import random_decomposable


class TestSampling:
    def test_unit_pole_has_unit_modulus(self):
        grid = sample_torus(parse("1/w", 1), 1.0, 8)
        assert grid.values.shape == (8, 1)
        assert np.allclose(np.abs(grid.values), 1.0)

    def test_pole_on_torus_detected(self):
        with pytest.raises(PoleOnTorus):
            sample_torus(parse("1/(w1+w2)", 2), 1.0, 16)

    def test_pole_outside_disc_is_fine(self):
        grid = sample_torus(parse("1/(w-2)", 1), 1.0, 8)
        assert np.all(np.isfinite(grid.values))

    def test_grid_budget(self):
        with pytest.raises(GridTooLarge):
            sample_torus(parse("w1*w2", 2), 1.0, 8192)

    def test_dimension_cap(self):
        f = GridFunction(5, 1, lambda c: [c[0]])
        with pytest.raises(GridTooLarge):
            sample_torus(f, 1.0, 8)

    def test_minimum_points(self):
        with pytest.raises(ValueError):
            sample_torus(parse("w", 1), 1.0, 2)


class TestCoefficients:
    def test_residue_direct(self):
        grid = sample_torus(parse("1/w", 1), 0.3, 16)
        value = laurent_coefficient(grid, (-1,))
        assert abs(value[0] - 1.0) < 1e-12

    def test_shifted_pole_derivative(self):
        # d/dw (w-2)^-1 at 0 = -1/4
        grid = sample_torus(parse("1/(w-2)", 1), 1.0, 32)
        value = laurent_coefficient(grid, (1,))
        assert abs(value[0] + 0.25) < 1e-10

    def test_dft_exact_for_polynomials(self):
        grid = sample_torus(parse("w^3", 1), 1.0, 8)
        assert abs(laurent_coefficient(grid, (3,))[0] - 1.0) < 1e-12

    def test_aliasing_guard(self):
        grid = sample_torus(parse("w", 1), 1.0, 16)
        with pytest.raises(AliasingRisk):
            laurent_coefficient(grid, (8,))

    def test_dimension_check(self):
        grid = sample_torus(parse("w", 1), 1.0, 16)
        with pytest.raises(DimensionMismatch):
            laurent_coefficient(grid, (1, 1))


class TestSpectralSummary:
    def test_pole_plus_linear(self):
        s = spectral_summary(parse("1/w + w", 1), 1.0)
        assert abs(s.variance - 2.0) < 1e-10
        assert abs(s.eta[0, 0] - 1.0) < 1e-10
        assert abs(s.jacobian[0, 0] - 1.0) < 1e-10
        assert abs(s.tail_energy) < 1e-10

    def test_pure_pole_scaling(self):
        s = spectral_summary(parse("1/w", 1), 0.5)
        assert abs(s.variance - 4.0) < 1e-10

    def test_analytic_function_has_no_residue(self):
        s = spectral_summary(parse("1/(w-2)", 1), 1.0)
        assert abs(s.eta[0, 0]) < 1e-10
        assert abs(s.core[0] + 0.5) < 1e-10

    def test_summary_consistency_invariant(self):
        s = spectral_summary(parse("2/w + w^2", 1), 0.8)
        assert s.variance >= 0
        assert s.tail_energy >= -1e-12
        assert abs(s.variance - (s.variance_model + s.tail_energy)) < 1e-12

    def test_json_schema(self):
        s = spectral_summary(parse("1/w", 1), 1.0)
        doc = s.to_json_dict()
        assert list(doc) == [
            "lambda", "core", "eta", "jacobian",
            "variance", "tail_energy", "est_error", "grid_n",
        ]
        assert doc["lambda"] == 1.0
        assert len(doc["core"]) == 1 and len(doc["core"][0]) == 2

    def test_nonconvergent_when_capped(self):
        with pytest.raises(NonConvergent):
            spectral_summary(parse("1/(w-2)", 1), 1.0, max_n=32)

    def test_vector_valued(self):
        s = spectral_summary(parse("1/w, w", 1), 1.0)
        assert s.eta.shape == (2, 1)
        assert abs(s.eta[0, 0] - 1.0) < 1e-10
        assert abs(s.jacobian[1, 0] - 1.0) < 1e-10


class TestInnerProduct:
    def test_conjugate_coordinate_against_pole(self):
        zbar = GridFunction(1, 1, lambda c: [np.conj(c[0])])
        value = inner_product_numeric(zbar, parse("1/w", 1), 1.0)
        assert abs(value - 1.0) < 1e-10

    def test_linear_norm(self):
        w = parse("w", 1)
        assert abs(inner_product_numeric(w, w, 2.0) - 4.0) < 1e-10

    def test_probability_normalization(self):
        one = GridFunction(1, 1, lambda c: [np.ones_like(c[0])])
        for lam in (0.3, 1.0, 2.5):
            assert abs(inner_product_numeric(one, one, lam) - 1.0) < 1e-12

    def test_hermitian_symmetry(self):
        rng = np.random.default_rng(5)
        for _ in range(10):
            f = random_decomposable(rng, n=2, k=1)
            g = random_decomposable(rng, n=2, k=1)
            ab = inner_product_numeric(f, g, 0.9)
            ba = inner_product_numeric(g, f, 0.9)
            assert abs(ab - np.conj(ba)) < 1e-10

    def test_shape_check(self):
        with pytest.raises(DimensionMismatch):
            inner_product_numeric(parse("w", 1), parse("w1, w2", 2), 1.0)


class TestOracleAgreement:
    def test_summary_matches_oracle(self):
        rng = np.random.default_rng(11)
        for i in range(20):
            f = random_decomposable(rng)
            lam = (0.3, 1.0, 1.7)[i % 3]
            s = spectral_summary(f, lam)
            d = decompose(f)
            assert np.max(np.abs(s.core - matrix_to_complex([d.core]).ravel())) < 1e-9
            assert np.max(np.abs(s.eta - matrix_to_complex(d.eta))) < 1e-9
            assert np.max(np.abs(s.jacobian - matrix_to_complex(d.jacobian))) < 1e-9
            want = float(variance_exact(f, Fraction(lam)))
            assert abs(s.variance - want) <= 1e-9 * max(1.0, want)

    def test_expectation_scale_independent(self):
        rng = np.random.default_rng(12)
        for _ in range(10):
            f = random_decomposable(rng)
            low = expectation_numeric(f, 0.3)
            high = expectation_numeric(f, 1.2)
            assert np.max(np.abs(low - high)) < 1e-9

    def test_first_order_summary_handles_mixed_poles(self):
        # w2^k / w1 terms appear in pullbacks; coefficient extraction must not
        # require decomposability
        f = parse("1/(w1*(1 + w2/4))", 2)
        core, eta, jac, _, _ = first_order_summary(f, 0.25)
        assert abs(eta[0, 0] - 1.0) < 1e-9
        assert abs(eta[0, 1]) < 1e-9
        assert np.max(np.abs(jac)) < 1e-9


def test_mean_of_modulus_squared_equals_self_inner_product():
    f = parse("1/w + 3*w + w^2", 1)
    lam = 0.8
    s = spectral_summary(f, lam)
    ip = inner_product_numeric(f, f, lam)
    core_energy = float(np.sum(np.abs(s.core) ** 2))
    assert abs((s.variance + core_energy) - ip.real) < 1e-10
    assert abs(ip.imag) < 1e-10
