# Copyright (c) 2025 Denis Darkin
# SPDX-License-Identifier: MIT

import numpy as np
import pytest
from numpy.testing import assert_allclose
from scipy.linalg import expm, sqrtm

from errors import (
    NotHermitianError,
    NotPositiveError,
    NotUnimodularError,
    NotUnitaryError,
    OffShellError,
)
from lorentz.mass_shell import random_on_shell
from lorentz.spacetime import (
    IDENTITY2,
    PAULI,
    angular_momentum_tensor,
    pauli_lubansky_classical,
    tilde,
    under_tilde,
)
from lorentz.spin_group import (
    BoostChoice,
    apply_lorentz,
    boost,
    boost_for,
    boost_z,
    check_sl2c,
    check_su2,
    covering_map,
    general_boost,
    lorentz_defect,
    matrix_sqrt_pos,
    random_sl2c,
    random_su2,
    rotation,
    rotation_to,
    sl2c_inverse,
    standard_boost,
    standard_boost_polar,
    transform_angular_momentum,
    unitarity_defect,
    wigner_rotation,
)

K = np.array([1.0, 0.0, 0.0, 0.0])


def n_tau(n):
    return np.einsum('j,jab->ab', np.asarray(n, dtype=complex), PAULI[1:])


class TestCoveringMap:

    def test_homomorphism(self, rng):
        A, B = random_sl2c(rng, 300), random_sl2c(rng, 300)
        assert_allclose(covering_map(A @ B), covering_map(A) @ covering_map(B), atol=1e-11)

    def test_image_is_proper_orthochronous(self, rng):
        assert lorentz_defect(covering_map(random_sl2c(rng, 300))) < 1e-11

    def test_kernel_is_plus_minus_identity(self, rng):
        A = random_sl2c(rng, 50)
        assert_allclose(covering_map(-A), covering_map(A), atol=1e-14)
        assert_allclose(covering_map(IDENTITY2), np.eye(4), atol=1e-15)

    def test_rotation_about_z(self):
        theta = 0.9
        c, s = np.cos(theta), np.sin(theta)
        expected = np.array([[1, 0, 0, 0], [0, c, -s, 0], [0, s, c, 0], [0, 0, 0, 1]])
        assert_allclose(covering_map(rotation((0, 0, 1), theta)), expected, atol=1e-15)

    def test_boost_along_z(self):
        u = 0.8
        L = covering_map(boost((0, 0, 1), u))
        assert L[0, 0] == pytest.approx(np.cosh(u))
        assert L[0, 3] == pytest.approx(np.sinh(u))
        assert L[1, 1] == pytest.approx(1.0)

    def test_rejects_non_unimodular(self):
        with pytest.raises(NotUnimodularError):
            covering_map(2.0 * IDENTITY2)


class TestOneParameterGroups:

    @pytest.mark.parametrize("axis", [(1, 0, 0), (0, 1, 0), (0, 0, 1), (1, 2, -2)])
    def test_rotation_matches_matrix_exponential(self, axis):
        n = np.asarray(axis, dtype=float) / np.linalg.norm(axis)
        assert_allclose(rotation(axis, 1.3), expm(-0.65j * n_tau(n)), atol=1e-14)
        assert unitarity_defect(rotation(axis, 1.3)) < 1e-14

    @pytest.mark.parametrize("axis", [(1, 0, 0), (0, 0, 1), (1, 1, 1)])
    def test_boost_matches_matrix_exponential(self, axis):
        n = np.asarray(axis, dtype=float) / np.linalg.norm(axis)
        assert_allclose(boost(axis, 0.7), expm(0.35 * n_tau(n)), atol=1e-14)

    def test_zero_axis_is_rejected(self):
        with pytest.raises(ValueError, match="nonzero"):
            rotation((0, 0, 0), 1.0)

    def test_boost_z_maps_rest_momentum(self):
        pmag = 0.75
        p = apply_lorentz(boost_z(pmag, 1.0), K)
        assert_allclose(p, [1.25, 0.0, 0.0, 0.75], atol=1e-15)

    @pytest.mark.parametrize("n", [(0, 0, 1), (0, 0, -1), (1, 0, 0), (0.48, -0.6, 0.64)])
    def test_rotation_to_takes_z_to_n(self, n):
        R = rotation_to(n)
        assert unitarity_defect(R) < 1e-14
        assert_allclose(apply_lorentz(R, [1.0, 0.0, 0.0, 1.0]), np.concatenate([[1.0], n]), atol=1e-14)


class TestMatrixSquareRoot:

    def test_matches_scipy_sqrtm(self, rng):
        for _ in range(20):
            X = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
            M = X @ X.conj().T + 0.1 * IDENTITY2
            assert_allclose(matrix_sqrt_pos(M), sqrtm(M), atol=1e-12)

    def test_rejects_indefinite(self):
        with pytest.raises(NotPositiveError):
            matrix_sqrt_pos(np.diag([1.0, -1.0]).astype(complex))

    def test_rejects_non_hermitian(self):
        with pytest.raises(NotHermitianError):
            matrix_sqrt_pos(np.array([[2.0, 1.0], [0.0, 2.0]], dtype=complex))


class TestStandardBoost:

    def test_anchor(self, pstar):
        assert_allclose(standard_boost(pstar, 1.0), np.diag([np.sqrt(2.0), 1.0 / np.sqrt(2.0)]), atol=1e-15)

    def test_square_and_inverse(self, rng):
        p = random_on_shell(rng, 500, 2.0, p_max=6.0)
        L = standard_boost(p, 2.0)
        assert_allclose(L @ L, tilde(p) / 2.0, atol=1e-12)
        assert_allclose(matrix_sqrt_pos(under_tilde(p) / 2.0) @ L, np.broadcast_to(IDENTITY2, L.shape), atol=1e-12)

    def test_maps_rest_to_p(self, rng):
        p = random_on_shell(rng, 200, 1.0)
        assert_allclose(apply_lorentz(standard_boost(p), np.broadcast_to(K, p.shape)), p, atol=1e-12)

    def test_polar_form_agrees(self, rng):
        p = random_on_shell(rng, 200, 1.0)
        assert_allclose(standard_boost_polar(p), standard_boost(p), atol=1e-12)

    def test_rest_momentum_gives_identity(self):
        assert_allclose(standard_boost(K), IDENTITY2, atol=1e-15)

    def test_off_shell_momentum_is_rejected(self):
        with pytest.raises(OffShellError) as info:
            standard_boost([1.0, 0.5, 0.0, 0.0], 1.0)
        assert info.value.mass == 1.0

    def test_general_boost_maps_rest_to_p(self, rng, pstar):
        B = random_su2(rng)
        assert_allclose(apply_lorentz(general_boost(pstar, B), K), pstar, atol=1e-14)

    def test_general_boost_needs_a_rotation(self, pstar):
        with pytest.raises(NotUnitaryError):
            general_boost(pstar, boost((1, 0, 0), 0.3))

    def test_helicity_choice_also_maps_rest_to_p(self, rng):
        p = random_on_shell(rng, 100, 1.0)
        L = boost_for(p, BoostChoice.HELICITY)
        assert_allclose(apply_lorentz(L, np.broadcast_to(K, p.shape)), p, atol=1e-12)


class TestWignerRotation:

    @pytest.mark.parametrize("choice", list(BoostChoice))
    def test_is_unitary(self, rng, choice):
        W = wigner_rotation(random_sl2c(rng, 500), random_on_shell(rng, 500, 1.0), choice)
        assert unitarity_defect(W) < 1e-11

    def test_rotations_are_their_own_wigner_rotation(self, rng):
        R = random_su2(rng, 200)
        p = random_on_shell(rng, 200, 1.0)
        assert_allclose(wigner_rotation(R, p), R, atol=1e-11)

    def test_standard_boost_at_rest_is_trivial(self, pstar):
        assert_allclose(wigner_rotation(standard_boost(pstar), K), IDENTITY2, atol=1e-14)

    def test_collinear_boost_is_trivial(self):
        # boost along the momentum: W = I for standard boosts
        p = np.array([np.sqrt(1.0 + 0.36), 0.0, 0.0, 0.6])
        assert_allclose(wigner_rotation(boost((0, 0, 1), 0.9), p), IDENTITY2, atol=1e-13)

    def test_transverse_boost_rotates_about_y(self):
        p = np.array([np.sqrt(1.25), 0.5, 0.0, 0.0])
        W = wigner_rotation(boost((0, 0, 1), 1.0), p)
        # rotation axis along y: no tau^1 or tau^3 component
        assert abs(np.trace(W @ PAULI[1])) < 1e-14
        assert abs(np.trace(W @ PAULI[3])) < 1e-14
        assert abs(np.trace(W @ PAULI[2])) > 1e-3


class TestGroupHelpers:

    def test_inverse(self, rng):
        A = random_sl2c(rng, 100)
        assert_allclose(sl2c_inverse(A) @ A, np.broadcast_to(IDENTITY2, A.shape), atol=1e-13)

    def test_check_sl2c_and_su2(self):
        assert check_sl2c(boost((0, 1, 0), 0.4)).shape == (2, 2)
        with pytest.raises(NotUnimodularError) as info:
            check_sl2c(np.diag([2.0, 2.0]))
        assert info.value.defect == pytest.approx(3.0)
        with pytest.raises(NotUnitaryError):
            check_su2(boost((0, 1, 0), 0.4))

    def test_random_sl2c_respects_rapidity_bound(self, rng):
        L = covering_map(random_sl2c(rng, 1000, max_rapidity=0.5))
        assert np.all(L[:, 0, 0] <= np.cosh(0.5) + 1e-12)

    def test_classical_pauli_lubansky_is_covariant(self, rng):
        p = random_on_shell(rng, 100, 1.0)
        j = np.stack([angular_momentum_tensor(s, b)
                      for s, b in zip(rng.normal(size=(100, 3)), rng.normal(size=(100, 3)))])
        L = covering_map(random_sl2c(rng, 100))
        moved = pauli_lubansky_classical(np.einsum('nij,nj->ni', L, p), transform_angular_momentum(L, j))
        assert_allclose(moved, np.einsum('nij,nj->ni', L, pauli_lubansky_classical(p, j)), atol=1e-11)
