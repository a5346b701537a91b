# Copyright (c) 2025 Denis Darkin
# SPDX-License-Identifier: MIT

import numpy as np
import pytest
from numpy.testing import assert_allclose

from errors import GridCoverageError, NotHermitianError, NotPositiveError, PictureMismatchError
from lorentz.mass_shell import build_grid
from lorentz.spacetime import four_vector_from_tilde
from lorentz.spin_group import boost, rotation
from bundle.states import Picture, SpinorRule, alpha, gaussian_packet, grid_for_state, normalize, poincare_transform
from bundle.observables import expectation_pl
from bundle import reduced
from bundle.reduced import (
    ReducedKind,
    ReducedMatrix,
    check_coverage,
    covariance_report,
    covariance_residual,
    covariance_tolerance,
    covariance_verdict,
    noncovariance_witness,
    peres_rdm,
    pl_reduced,
    pulled_back_matrix,
    quadrature_budget,
    theta_matrix,
)

Z_BOOST = boost((0, 0, 1), 1.0)


def standard_packet(center=(0.5, 0.0, 0.0), sigma=0.5, rule=None):
    return gaussian_packet(center, sigma, rule, picture=Picture.STANDARD)


def witness_for(psi, Lam, n=32, **options):
    grid_a = grid_for_state(psi, n)
    psi = normalize(psi, grid_a)
    return noncovariance_witness(psi, Lam, grid_a, grid_for_state(poincare_transform(psi, Lam), n), **options)


def count_calls(monkeypatch, name):
    calls = []
    original = getattr(reduced, name)

    def counted(*args, **kwargs):
        calls.append(args)
        return original(*args, **kwargs)

    monkeypatch.setattr(reduced, name, counted)
    return calls


class TestReducedMatrix:

    def test_accessors(self):
        rho = ReducedMatrix(np.diag([3.0, 1.0]), 'peres_spin')
        assert rho.kind is ReducedKind.PERES_SPIN
        assert rho.trace == pytest.approx(4.0)
        assert_allclose(rho.eigenvalues(), [1.0, 3.0])
        assert_allclose(rho.normalized().matrix, np.diag([0.75, 0.25]))
        described = rho.to_dict()
        assert described['matrix'][0][0] == [3.0, 0.0]
        assert described['kind'] == 'peres_spin'

    def test_small_asymmetry_is_symmetrized(self):
        rho = ReducedMatrix(np.array([[1.0, 1e-13], [0.0, 1.0]]), 'pauli_lubansky')
        assert rho.matrix[0, 1] == rho.matrix[1, 0]

    @pytest.mark.parametrize("matrix, error", [
        ([[1.0, 1.0], [0.0, 1.0]], NotHermitianError),
        ([[1.0, 0.0], [0.0, -1.0]], NotPositiveError),
        ([[0.0, 0.0], [0.0, 0.0]], NotPositiveError),
    ])
    def test_invalid_matrices(self, matrix, error):
        with pytest.raises(error):
            ReducedMatrix(np.array(matrix, dtype=complex), 'peres_spin')


class TestPeresMatrix:

    def test_constant_qubit_is_pure(self):
        psi = standard_packet()
        grid = grid_for_state(psi, 16)
        rho = peres_rdm(normalize(psi, grid), grid)
        assert rho.trace == pytest.approx(1.0, rel=1e-12)
        assert_allclose(rho.matrix, np.diag([1.0, 0.0]), atol=1e-12)

    def test_isotropic_helicity_packet_is_maximally_mixed(self):
        psi = standard_packet((0.0, 0.0, 0.0), 0.5, SpinorRule.helicity())
        grid = grid_for_state(psi, 16)
        rho = peres_rdm(psi, grid).normalized()
        assert_allclose(rho.matrix, 0.5 * np.eye(2), atol=1e-12)

    def test_needs_standard_picture(self, transverse_packet, coarse_grid):
        with pytest.raises(PictureMismatchError):
            peres_rdm(transverse_packet, coarse_grid)


class TestPauliLubanskyMatrix:

    def test_needs_alternative_picture(self, transverse_packet, coarse_grid):
        with pytest.raises(PictureMismatchError):
            pl_reduced(alpha(transverse_packet), coarse_grid)
        with pytest.raises(PictureMismatchError):
            pulled_back_matrix(transverse_packet, coarse_grid)

    def test_normalized_option(self, transverse_packet, coarse_grid):
        assert pl_reduced(transverse_packet, coarse_grid, normalize=True).trace == pytest.approx(1.0)

    def test_theta_reproduces_the_expectation(self, coarse_grid):
        phi = normalize(gaussian_packet((0.5, 0.0, 0.0), 0.5, SpinorRule.constant((1.0, 1j))), coarse_grid)
        w = four_vector_from_tilde(theta_matrix(phi, coarse_grid), tol=1e-9)
        assert_allclose(w, expectation_pl(phi, coarse_grid), atol=1e-10)

    def test_pulled_back_from_qubit_vectors(self, transverse_packet, coarse_grid):
        phi = normalize(transverse_packet, coarse_grid)
        assert_allclose(pulled_back_matrix(alpha(phi), coarse_grid),
                        pl_reduced(phi, coarse_grid).matrix, atol=1e-10)

    @pytest.mark.parametrize("Lam", [Z_BOOST, boost((1, 1, 0), 0.6), rotation((1, 1, 1), 0.9)])
    def test_transforms_covariantly(self, transverse_packet, Lam):
        grid_a = grid_for_state(transverse_packet)
        phi = normalize(transverse_packet, grid_a)
        a = np.array([0.3, -0.2, 0.1, 0.5])
        grid_b = grid_for_state(poincare_transform(phi, Lam, a))
        assert covariance_residual(phi, Lam, a, grid_a, grid_b) < 1e-6
        report = covariance_report(phi, Lam, a, grid_a, grid_b)
        assert report.verdict == 'covariant'
        assert report.residual <= report.tolerance
        assert report.to_dict()['kind'] == 'pauli_lubansky'

    def test_under_resolved_grid_is_not_covariant(self, transverse_packet):
        grid_a = grid_for_state(transverse_packet, 12)
        phi = normalize(transverse_packet, grid_a)
        grid_b = grid_for_state(poincare_transform(phi, Z_BOOST), 12)
        report = covariance_report(phi, Z_BOOST, np.zeros(4), grid_a, grid_b)
        assert report.residual > report.tolerance
        assert report.verdict == 'unresolved'

    def test_reuses_the_base_residual(self, transverse_packet, monkeypatch):
        calls = count_calls(monkeypatch, 'pl_reduced')
        grid = grid_for_state(transverse_packet, 16)
        covariance_report(normalize(transverse_packet, grid), Z_BOOST, np.zeros(4), grid,
                          grid_for_state(poincare_transform(transverse_packet, Z_BOOST), 16))
        assert len(calls) == 4

    def test_translations_leave_sigma_unchanged(self, transverse_packet, coarse_grid):
        residual = covariance_residual(transverse_packet, np.eye(2), (1.0, 2.0, -0.5, 0.3),
                                       coarse_grid, coarse_grid)
        assert residual < 1e-14


class TestNoncovarianceWitness:

    def test_boost_shifts_the_spectrum(self):
        report = witness_for(standard_packet(), Z_BOOST)
        assert report.verdict == 'non-covariant'
        assert report.shift > 1e-3
        assert report.warnings == ()

    def test_rotation_keeps_the_spectrum(self):
        report = witness_for(standard_packet(), rotation((1, 1, 1), 0.9))
        assert report.verdict == 'covariant'
        assert report.shift <= report.tolerance == 1e-6

    def test_shift_grows_with_the_spread(self):
        shifts = [witness_for(standard_packet(sigma=s), Z_BOOST).shift for s in (0.2, 0.6)]
        assert shifts[0] < shifts[1]

    def test_warns_below_the_spread_floor(self):
        report = witness_for(standard_packet((0.0, 0.0, 0.0), 5e-4), Z_BOOST, n=8)
        assert report.sigma_over_m == pytest.approx(5e-4)
        assert len(report.warnings) == 1
        assert 'cannot detect' in report.warnings[0]
        assert report.to_dict()['warnings'] == list(report.warnings)

    def test_shift_below_the_threshold_is_inconclusive(self):
        report = witness_for(standard_packet(), Z_BOOST, shift_threshold=1.0)
        assert report.tolerance < report.shift < report.threshold
        assert report.verdict == 'inconclusive'

    def test_spread_floor_is_configurable(self):
        report = witness_for(standard_packet((0.0, 0.0, 0.0), 5e-4), Z_BOOST, n=8, spread_floor=1e-4)
        assert report.warnings == ()

    def test_reuses_the_base_spectra(self, monkeypatch):
        calls = count_calls(monkeypatch, 'peres_rdm')
        witness_for(standard_packet(), Z_BOOST, n=16)
        assert len(calls) == 4

    def test_needs_standard_picture(self, transverse_packet, coarse_grid):
        with pytest.raises(PictureMismatchError):
            noncovariance_witness(transverse_packet, Z_BOOST, coarse_grid, coarse_grid)


class TestBudgetsAndCoverage:

    def test_budget_is_floored(self):
        grid = build_grid(1.0, 1.0, 4)
        assert quadrature_budget(lambda g: np.zeros(3), grid) == 1e-12

    def test_budget_scales_the_refinement_change(self):
        grid = build_grid(1.0, 1.0, 4)
        budget = quadrature_budget(lambda g: 1.0 / g.n_per_axis, grid)
        assert budget == pytest.approx(10.0 * (1.0 / 4 - 1.0 / 8))

    def test_small_box_is_reported(self, transverse_packet):
        with pytest.raises(GridCoverageError, match="--pmax") as info:
            check_coverage(transverse_packet, build_grid(1.0, 1.0, 16), 'edge packet')
        assert 'edge packet' in str(info.value)
        assert info.value.tail_fraction > info.value.threshold

    def test_covering_box_passes(self, transverse_packet, coarse_grid):
        assert check_coverage(transverse_packet, coarse_grid) < 1e-6

    def test_covariance_checks_coverage(self, transverse_packet, coarse_grid):
        with pytest.raises(GridCoverageError, match="transformed state"):
            covariance_residual(transverse_packet, boost((0, 0, 1), 2.5), np.zeros(4),
                                coarse_grid, coarse_grid)


class TestVerdicts:

    @pytest.mark.parametrize("residual, budget, verdict", [
        (1e-7, 1e-3, 'covariant'),
        (1e-3, 1e-6, 'non-covariant'),
        (1e-3, 1e-2, 'unresolved'),
    ])
    def test_residual_is_held_to_the_tolerance(self, residual, budget, verdict):
        assert covariance_verdict(residual, budget, 1e-5) == verdict

    def test_rotations_get_the_tighter_bound(self):
        assert covariance_tolerance(rotation((1, 1, 1), 0.9)) == 1e-6
        assert covariance_tolerance(Z_BOOST) == 1e-5
        assert covariance_tolerance(Z_BOOST, 1e-4, 1e-8) == 1e-4
        assert covariance_tolerance(np.eye(2), 1e-4, 1e-8) == 1e-8
