#!/usr/bin/env python3
# Copyright (c) 2025 Denis Darkin
# SPDX-License-Identifier: MIT
"""
Minkowski four-vectors and their 2x2 Hermitian matrix images.

Conventions:
    - metric signature (+,-,-,-), natural units (hbar = c = 1)
    - four-vectors are real arrays of shape (..., 4), upper index x^mu
    - 2x2 complex matrices are arrays of shape (..., 2, 2)

All functions broadcast over leading axes so a whole momentum grid can be
pushed through in one call.
"""

from itertools import permutations
from typing import Sequence

import numpy as np

from errors import NotHermitianError

METRIC = np.diag([1.0, -1.0, -1.0, -1.0])

# tau^0 = I, tau^1..3 = Pauli matrices
PAULI = np.array([
    [[1, 0], [0, 1]],
    [[0, 1], [1, 0]],
    [[0, -1j], [1j, 0]],
    [[1, 0], [0, -1]],
], dtype=np.complex128)

IDENTITY2 = PAULI[0]

HERMITIAN_TOL = 1e-12

# Alias types, documentation only
FourVector = np.ndarray
Mat2C = np.ndarray
AngularMomentumTensor = np.ndarray


def as_four_vector(x) -> FourVector:
    """Coerce input to a float array whose last axis has length 4."""
    x = np.asarray(x, dtype=np.float64)
    if x.shape[-1:] != (4,):
        raise ValueError(f"Expected a four-vector (last axis 4), got shape {x.shape}")
    return x


def lower_index(x: FourVector) -> FourVector:
    """Return x_mu = eta_{mu nu} x^nu."""
    x = as_four_vector(x)
    return x * np.array([1.0, -1.0, -1.0, -1.0])


def minkowski_product(x: FourVector, y: FourVector) -> np.ndarray:
    """<x, y> = x^0 y^0 - x.y, broadcast over leading axes."""
    x = as_four_vector(x)
    y = as_four_vector(y)
    return x[..., 0] * y[..., 0] - np.sum(x[..., 1:] * y[..., 1:], axis=-1)


def tilde(x: FourVector) -> Mat2C:
    """x^0 I + x.tau; det(tilde(x)) = <x, x>."""
    x = as_four_vector(x)
    return np.einsum('...m,mij->...ij', x.astype(np.complex128), PAULI)


def under_tilde(x: FourVector) -> Mat2C:
    """x_mu tau^mu = x^0 I - x.tau."""
    return tilde(lower_index(x))


def hermitian_defect(M: Mat2C) -> float:
    """Largest entry of |M - M^H|."""
    M = np.asarray(M, dtype=np.complex128)
    if M.size == 0:
        return 0.0
    return float(np.max(np.abs(M - np.conj(np.swapaxes(M, -1, -2)))))


def four_vector_from_tilde(M: Mat2C, tol: float = HERMITIAN_TOL) -> FourVector:
    """
    Invert tilde(): x^0 = tr(M)/2, x^j = tr(M tau^j)/2.

    Raises:
        NotHermitianError: if M deviates from M^H by more than tol
    """
    M = np.asarray(M, dtype=np.complex128)
    if M.shape[-2:] != (2, 2):
        raise ValueError(f"Expected 2x2 matrices, got shape {M.shape}")

    asymmetry = hermitian_defect(M)
    scale = max(1.0, float(np.max(np.abs(M)))) if M.size else 1.0
    if asymmetry > tol * scale:
        raise NotHermitianError(asymmetry)

    # tr(M tau^mu) = sum_ij M_ij tau^mu_ji
    return 0.5 * np.einsum('...ij,mji->...m', M, PAULI).real


def levi_civita() -> np.ndarray:
    """
    Totally antisymmetric symbol eps^{nu alpha beta mu}.

    The overall sign is calibrated so that a particle at rest with spatial
    angular momentum j gets w = (0, m j).
    """
    eps = np.zeros((4, 4, 4, 4))
    for perm in permutations(range(4)):
        # parity by counting inversions
        inversions = sum(
            1 for i in range(4) for k in range(i + 1, 4) if perm[i] > perm[k]
        )
        eps[perm] = -1.0 if inversions % 2 else 1.0

    rest = np.array([1.0, 0.0, 0.0, 0.0])
    spin_z = angular_momentum_tensor([0.0, 0.0, 1.0])
    w3 = 0.5 * np.einsum('nabm,n,ab->m', eps, lower_index(rest), spin_z)[3]
    return eps if w3 > 0 else -eps


def angular_momentum_tensor(spin: Sequence[float],
                            boost: Sequence[float] = (0.0, 0.0, 0.0)) -> AngularMomentumTensor:
    """
    Lower-index antisymmetric tensor j_{alpha beta}.

    Args:
        spin: spatial angular momentum, j^{ik} = eps_{ikl} spin^l
        boost: boost part, j^{0i} = boost^i

    Returns:
        4x4 real array with j_{ab} = -j_{ba}
    """
    spin = np.asarray(spin, dtype=np.float64)
    boost = np.asarray(boost, dtype=np.float64)

    upper = np.zeros((4, 4))
    upper[0, 1:] = boost
    upper[1:, 0] = -boost
    upper[1, 2], upper[2, 3], upper[3, 1] = spin[2], spin[0], spin[1]
    upper[2, 1], upper[3, 2], upper[1, 3] = -spin[2], -spin[0], -spin[1]

    return METRIC @ upper @ METRIC


def pauli_lubansky_classical(p: FourVector, j: AngularMomentumTensor) -> FourVector:
    """w^mu = 1/2 eps^{nu alpha beta mu} p_nu j_{alpha beta}."""
    p = as_four_vector(p)
    j = np.asarray(j, dtype=np.float64)
    if not np.array_equal(j, -np.swapaxes(j, -1, -2)):
        raise ValueError("Angular momentum tensor must be antisymmetric")
    return 0.5 * np.einsum('nabm,...n,...ab->...m', _EPSILON, lower_index(p), j)


_EPSILON = levi_civita()
