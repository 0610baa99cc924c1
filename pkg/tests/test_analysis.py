"""Scale-analysis tests: sweeps, optimal scale, detectability."""

import pytest

from polylens.analysis import (
    Degenerate,
    ZERO_JACOBIAN,
    ZERO_RESIDUE,
    detectability_check,
    empirical_optimal_scale,
    geometric_grid,
    optimal_scale,
    variance_sweep,
)
from polylens.errors import InconsistentScales
from polylens.expr import parse


class TestSweep:
    def test_pole_plus_linear_values(self):
        sweep = variance_sweep(parse("1/w + w", 1), [0.5, 1.0, 2.0])
        assert sweep.variance == pytest.approx([4.25, 2.0, 4.25], abs=1e-10)
        assert sweep.lambda_star_closed == pytest.approx(1.0, abs=1e-9)

    def test_pure_pole_saturates_floor(self):
        sweep = variance_sweep(parse("1/w", 1), [0.5, 1.0])
        for lam, v in zip(sweep.lambdas, sweep.variance):
            assert lam**2 * v == pytest.approx(1.0, abs=1e-10)
        assert all(abs(g) < 1e-9 for g in sweep.bound_gap)

    def test_constant_is_flat(self):
        sweep = variance_sweep(parse("5", 1), [0.5, 1.0, 2.0])
        assert all(v == pytest.approx(0.0, abs=1e-12) for v in sweep.variance)
        assert sweep.lambda_star_closed == ZERO_JACOBIAN

    def test_grid_validation(self):
        with pytest.raises(ValueError):
            variance_sweep(parse("w", 1), [1.0, 0.5])
        with pytest.raises(ValueError):
            variance_sweep(parse("w", 1), [])

    def test_matrices_reported_from_smallest_scale(self):
        sweep = variance_sweep(parse("2/w + 3*w", 1), [0.4, 0.9, 1.6])
        assert sweep.eta[0, 0] == pytest.approx(2.0, abs=1e-9)
        assert sweep.jacobian[0, 0] == pytest.approx(3.0, abs=1e-9)

    def test_scale_dependent_coefficients_rejected(self):
        # pole at 0.4: residue matrices differ below and above that radius
        with pytest.raises(InconsistentScales):
            variance_sweep(parse("1/(w-0.4)", 1), [0.3, 0.35, 0.5])


class TestOptimalScale:
    def test_balanced(self):
        assert optimal_scale([[1]], [[1]]) == pytest.approx(1.0)

    def test_plugin_value(self):
        assert optimal_scale([[1]], [[2]]) == pytest.approx(0.25**0.25)
        assert optimal_scale([[1]], [[2]]) == pytest.approx(0.7071067811865476)

    def test_degeneracies_are_values(self):
        assert optimal_scale([[1]], [[0]]) == ZERO_JACOBIAN
        assert optimal_scale([[0]], [[1]]) == ZERO_RESIDUE
        assert isinstance(optimal_scale([[0]], [[0]]), Degenerate)

    def test_string_rendering(self):
        assert str(ZERO_JACOBIAN) == "Degenerate(ZeroJacobian)"
        assert str(ZERO_RESIDUE) == "Degenerate(ZeroResidue)"


class TestEmpiricalScale:
    def test_balanced_pole_linear(self):
        sweep = variance_sweep(parse("1/w + w", 1), geometric_grid(0.25, 4.0, 17))
        assert abs(sweep.lambda_star_empirical - 1.0) <= 1e-3

    def test_weighted(self):
        sweep = variance_sweep(parse("1/w + 2*w", 1), geometric_grid(0.2, 3.0, 17))
        assert abs(sweep.lambda_star_empirical - 0.7071) <= 1e-3

    def test_tail_shifts_the_minimum(self):
        # variance is 1/s^2 + s^4, minimized at (1/2)^(1/6): the closed form
        # degenerates (no linear term) while the measured optimum is finite
        sweep = variance_sweep(parse("1/w + w^2", 1), geometric_grid(0.3, 3.0, 17))
        assert sweep.lambda_star_closed == ZERO_JACOBIAN
        assert abs(sweep.lambda_star_empirical - 0.5 ** (1 / 6)) <= 1e-3

    def test_boundary_minimum_returned_unrefined(self):
        sweep = variance_sweep(parse("1/w", 1), [0.5, 1.0, 2.0])
        assert sweep.lambda_star_empirical == 2.0

    def test_needs_three_points(self):
        sweep = variance_sweep(parse("1/w + w", 1), [0.5, 2.0])
        with pytest.raises(ValueError):
            empirical_optimal_scale(sweep)


class TestDetectability:
    def test_pure_pole(self):
        report = detectability_check(parse("1/w", 1), [0.3, 0.7, 1.2])
        assert report.is_detectable
        assert report.expectation_drift <= 1e-10
        assert report.in_class

    def test_affine(self):
        report = detectability_check(parse("3 + w", 1), [0.5, 1.0])
        assert report.is_detectable
        assert report.max_variance == pytest.approx(1.0, abs=1e-10)

    def test_off_centre_pole_not_in_class(self):
        report = detectability_check(parse("1/(w-0.4)", 1), [0.5, 1.0])
        assert not report.is_detectable
        assert not report.in_class
        assert report.reason == "NotInClass"

    def test_pole_on_probed_torus_not_in_class(self):
        report = detectability_check(parse("1/(w-0.5)", 1), [0.5, 1.0])
        assert not report.is_detectable
        assert report.reason == "NotInClass"

    def test_analytic_rational_is_detectable(self):
        report = detectability_check(parse("1/(w-2)", 1), [0.5, 1.0])
        assert report.is_detectable
        assert report.in_class

    def test_needs_two_probes(self):
        with pytest.raises(ValueError):
            detectability_check(parse("w", 1), [1.0])


class TestGeometricGrid:
    def test_endpoints_and_midpoint(self):
        grid = geometric_grid(0.25, 4.0, 33)
        assert grid[0] == 0.25
        assert grid[-1] == 4.0
        assert grid[16] == pytest.approx(1.0, rel=1e-15)
        assert all(b > a for a, b in zip(grid, grid[1:]))

    def test_validation(self):
        with pytest.raises(ValueError):
            geometric_grid(1.0, 0.5, 9)
        with pytest.raises(ValueError):
            geometric_grid(0.5, 1.0, 2)


def test_model_symmetry_about_optimum():
    tr_eta, tr_jac = 3.0, 7.0
    star = (tr_eta / tr_jac) ** 0.25
    for lam in (0.3, 0.9, 2.4):
        mirrored = star**2 / lam
        v = tr_eta / lam**2 + lam**2 * tr_jac
        v_m = tr_eta / mirrored**2 + mirrored**2 * tr_jac
        assert v == pytest.approx(v_m, rel=1e-12)
