# Copyright (c) 2025 Denis Darkin
# SPDX-License-Identifier: MIT

import numpy as np
import pytest
from numpy.testing import assert_allclose

from errors import NormalizationError, OrthogonalityError, PictureMismatchError
from lorentz.mass_shell import lift, random_on_shell
from lorentz.spacetime import PAULI, hermitian_defect, minkowski_product, under_tilde
from lorentz.spin_group import boost, covering_map, rotation, standard_boost
from bundle.states import SpinorRule, alpha, evaluate, gaussian_packet, grid_for_state, normalize, poincare_transform
from bundle.observables import (
    SpinDirection,
    expectation_momentum,
    expectation_nw,
    expectation_pl,
    fd_pauli_lubansky,
    generator_fd,
    newton_wigner_classical,
    nw_spin_conjugated,
    nw_spin_from_pl,
    nw_spin_operator,
    pl_operator,
    pl_operator_cross,
    pl_operator_explicit,
    qubit_pl_vector,
    spin_direction,
)

K = np.array([1.0, 0.0, 0.0, 0.0])


class TestSpinDirection:

    @pytest.mark.parametrize("chi, n", [
        ((1.0, 0.0), (0.0, 0.0, 1.0)),
        ((0.0, 1.0), (0.0, 0.0, -1.0)),
        ((1 / np.sqrt(2), 1 / np.sqrt(2)), (1.0, 0.0, 0.0)),
        ((1 / np.sqrt(2), 1j / np.sqrt(2)), (0.0, 1.0, 0.0)),
    ])
    def test_anchors(self, chi, n):
        assert_allclose(spin_direction(chi).n, n, atol=1e-15)

    def test_projector(self, rng):
        chi = rng.normal(size=2) + 1j * rng.normal(size=2)
        chi /= np.linalg.norm(chi)
        assert_allclose(spin_direction(chi).projector(), np.outer(chi, chi.conj()), atol=1e-14)

    def test_non_unit_input(self):
        with pytest.raises(NormalizationError):
            spin_direction((1.0, 1.0))
        with pytest.raises(NormalizationError):
            SpinDirection(np.array([0.0, 0.0, 2.0]))


class TestQubitVectors:

    @pytest.mark.parametrize("m", [1.0, 2.0])
    def test_rest_frame_anchor(self, m):
        assert_allclose(qubit_pl_vector([m, 0.0, 0.0, 0.0], [1.0, 0.0], m), [0.0, 0.0, 0.0, m / 2], atol=1e-15)

    def test_boosted_anchor(self, pstar):
        assert_allclose(qubit_pl_vector(pstar, [np.sqrt(2.0), 0.0]), [0.375, 0.0, 0.0, 0.625], atol=1e-14)

    def test_orthogonal_and_spacelike(self, rng):
        p = random_on_shell(rng, 300, 1.0)
        chi = rng.normal(size=(300, 2)) + 1j * rng.normal(size=(300, 2))
        chi /= np.linalg.norm(chi, axis=1, keepdims=True)
        w = qubit_pl_vector(p, np.einsum('nij,nj->ni', standard_boost(p), chi))
        assert_allclose(minkowski_product(p, w), 0.0, atol=1e-10)
        assert_allclose(minkowski_product(w, w), -0.25, atol=1e-10)

    def test_needs_h_normalized_qubit(self):
        with pytest.raises(NormalizationError, match="h-normalized"):
            qubit_pl_vector(K, [2.0, 0.0])

    def test_newton_wigner_anchor(self, pstar):
        assert_allclose(newton_wigner_classical(pstar, [0.75, 0.0, 0.0, 1.25]), [0.0, 0.0, 1.0], atol=1e-14)

    def test_newton_wigner_recovers_qubit_direction(self, rng):
        p = random_on_shell(rng, 100, 1.0)
        chi = rng.normal(size=(100, 2)) + 1j * rng.normal(size=(100, 2))
        chi /= np.linalg.norm(chi, axis=1, keepdims=True)
        s = newton_wigner_classical(p, qubit_pl_vector(p, np.einsum('nij,nj->ni', standard_boost(p), chi)))
        n = np.stack([spin_direction(c).n for c in chi])
        assert_allclose(s, 0.5 * n, atol=1e-10)

    def test_newton_wigner_rejects_non_orthogonal(self):
        with pytest.raises(OrthogonalityError):
            newton_wigner_classical(K, [1.0, 0.0, 0.0, 0.0])


class TestOperators:

    @pytest.mark.parametrize("mu", range(4))
    def test_pauli_lubansky_forms_agree(self, rng, mu):
        p = random_on_shell(rng, 200, 1.0)
        assert_allclose(pl_operator_explicit(mu)(p), pl_operator(mu)(p), atol=1e-12)
        assert_allclose(pl_operator_cross(mu)(p), pl_operator(mu)(p), atol=1e-12)

    @pytest.mark.parametrize("mu", range(4))
    def test_pauli_lubansky_is_h_self_adjoint(self, rng, mu):
        p = random_on_shell(rng, 200, 1.0)
        assert hermitian_defect(under_tilde(p) @ pl_operator(mu)(p)) < 1e-12

    def test_pauli_lubansky_at_rest(self):
        assert_allclose(pl_operator(0)(K), np.zeros((2, 2)), atol=1e-15)
        for j in (1, 2, 3):
            assert_allclose(pl_operator(j)(K), 0.5 * PAULI[j], atol=1e-15)

    def test_bad_index(self):
        with pytest.raises(ValueError, match="0..3"):
            pl_operator(4)

    def test_newton_wigner_forms_agree(self, rng):
        p = random_on_shell(rng, 200, 1.5)
        closed = nw_spin_operator(1.5)(p)
        assert closed.shape == (200, 3, 2, 2)
        assert_allclose(nw_spin_conjugated(p, 1.5), closed, atol=1e-11)
        assert_allclose(nw_spin_from_pl(p, 1.5), closed, atol=1e-11)
        assert_allclose(nw_spin_operator(1.0)(K), 0.5 * PAULI[1:], atol=1e-15)

    def test_apply_vector_operator(self, pstar):
        out = nw_spin_operator().apply(pstar, [1.0, 0.0])
        assert out.shape == (3, 2)


class TestExpectations:

    def test_sharp_rest_packet(self):
        packet = gaussian_packet((0.0, 0.0, 0.0), 0.02)
        grid = grid_for_state(packet)
        phi = normalize(packet, grid)
        assert_allclose(expectation_pl(phi, grid), [0.0, 0.0, 0.0, 0.5], atol=1e-3)
        assert_allclose(expectation_nw(phi, grid), [0.0, 0.0, 0.5], atol=1e-3)
        assert_allclose(expectation_momentum(phi, grid), [1.0, 0.0, 0.0, 0.0], atol=1e-3)

    def test_forms_agree(self, coarse_grid):
        phi = normalize(gaussian_packet((0.5, 0.0, 0.0), 0.5, SpinorRule.constant((1.0, 0.5j))), coarse_grid)
        assert_allclose(expectation_pl(phi, coarse_grid, form='direct'), expectation_pl(phi, coarse_grid), atol=1e-12)
        assert_allclose(expectation_nw(phi, coarse_grid, form='operator'), expectation_nw(phi, coarse_grid),
                        atol=1e-12)

    def test_expectation_is_orthogonal_to_momentum_for_sharp_packets(self):
        packet = gaussian_packet((0.0, 0.0, 0.75), 0.02)
        grid = grid_for_state(packet)
        phi = normalize(packet, grid)
        w = expectation_pl(phi, grid)
        assert abs(minkowski_product(expectation_momentum(phi, grid), w)) < 1e-3

    def test_boosts_act_as_four_vectors(self, transverse_packet):
        grid = grid_for_state(transverse_packet, 64)
        phi = normalize(transverse_packet, grid)
        Lam = rotation((1, 0, 0), 0.4) @ boost((0, 1, 1), 0.5)
        moved = poincare_transform(phi, Lam, (0.1, 0.2, 0.0, -0.3))
        expected = covering_map(Lam) @ expectation_pl(phi, grid)
        assert_allclose(expectation_pl(moved, grid_for_state(moved, 64)), expected, atol=1e-7)

    def test_picture_and_form_errors(self, transverse_packet, coarse_grid):
        with pytest.raises(PictureMismatchError):
            expectation_pl(alpha(transverse_packet), coarse_grid)
        with pytest.raises(PictureMismatchError):
            expectation_momentum(alpha(transverse_packet), coarse_grid)
        with pytest.raises(ValueError, match="Unknown form"):
            expectation_pl(transverse_packet, coarse_grid, form='trace')
        with pytest.raises(ValueError, match="Unknown form"):
            expectation_nw(transverse_packet, coarse_grid, form='direct')


class TestGenerators:

    @pytest.fixture
    def phi(self):
        return gaussian_packet((0.1, 0.2, 0.3), 1.0, SpinorRule.constant((1.0, 0.5j)))

    def test_energy_is_multiplicative(self, phi, pstar):
        assert_allclose(generator_fd(phi, 'P0', pstar), 1.25 * evaluate(phi, pstar), atol=1e-15)

    @pytest.mark.parametrize("pvec", [(0.0, 0.0, 0.4), (0.3, 0.0, 0.0), (0.2, -0.3, 0.4)])
    def test_pauli_lubansky_from_generators(self, phi, pvec):
        p = lift(np.array(pvec))
        exact = np.stack([pl_operator(mu).apply(p, evaluate(phi, p)) for mu in range(4)])
        assert_allclose(fd_pauli_lubansky(phi, p), exact, atol=1e-7)

    def test_spin_half_on_the_symmetry_axis(self):
        symmetric = gaussian_packet((0.0, 0.0, 0.3), 1.0)
        p = lift(np.array([0.0, 0.0, 0.5]))
        assert_allclose(generator_fd(symmetric, 'J3', p), 0.5 * evaluate(symmetric, p), atol=1e-7)

    def test_step_error_is_second_order(self, phi):
        p = lift(np.array([0.2, -0.3, 0.4]))
        exact = np.stack([pl_operator(mu).apply(p, evaluate(phi, p)) for mu in range(4)])
        errors = [np.max(np.abs(fd_pauli_lubansky(phi, p, eps) - exact)) for eps in (1e-3, 5e-4)]
        assert errors[0] / errors[1] == pytest.approx(4.0, rel=0.05)

    @pytest.mark.parametrize("eps", [1e-3, 2e-4])
    def test_spin_half_step_error(self, eps):
        # the central difference of exp(-i eps/2) gives sin(eps/2)/eps
        symmetric = gaussian_packet((0.0, 0.0, 0.3), 1.0)
        p = lift(np.array([0.0, 0.0, 0.5]))
        error = generator_fd(symmetric, 'J3', p, eps) - 0.5 * evaluate(symmetric, p)
        assert_allclose(error, -eps ** 2 / 48.0 * evaluate(symmetric, p), rtol=1e-3, atol=1e-15)

    @pytest.mark.parametrize("kind, eps, match", [
        ('X1', 1e-4, "Unknown generator"),
        ('J1', 1e-2, "step"),
        ('K2', 1e-8, "step"),
    ])
    def test_invalid_requests(self, phi, pstar, kind, eps, match):
        with pytest.raises(ValueError, match=match):
            generator_fd(phi, kind, pstar, eps)

    def test_needs_alternative_picture(self, phi, pstar):
        with pytest.raises(PictureMismatchError):
            generator_fd(alpha(phi), 'J1', pstar)
