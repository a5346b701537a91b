#!/usr/bin/env python3
# Copyright (c) 2025 Denis Darkin
# SPDX-License-Identifier: MIT
"""
SL(2,C) arithmetic: the covering map onto the proper orthochronous Lorentz
group, positive matrix square roots, standard and general boosts, and
Wigner rotations.

Group elements are plain complex arrays of shape (..., 2, 2); Lorentz
matrices are real arrays of shape (..., 4, 4).
"""

from enum import Enum
from typing import Optional, Sequence, Union

import numpy as np

from errors import (
    NotHermitianError,
    NotPositiveError,
    NotUnimodularError,
    NotUnitaryError,
    OffShellError,
)
from .spacetime import (
    IDENTITY2,
    METRIC,
    PAULI,
    as_four_vector,
    four_vector_from_tilde,
    hermitian_defect,
    minkowski_product,
    tilde,
)

# Tolerances: pure 2x2 algebra vs. after 4x4 compositions
ALGEBRA_TOL = 1e-12
COMPOSITION_TOL = 1e-11
ON_SHELL_TOL = 1e-10

SL2C = np.ndarray
LorentzMatrix = np.ndarray


class BoostChoice(str, Enum):
    """Convention for L(p), the SL(2,C) element taking k = (m,0,0,0) to p."""
    STANDARD = 'standard'   # L0(p) = sqrt(p~/m)
    HELICITY = 'helicity'   # L0(p) R(p_hat)


def _dagger(A: np.ndarray) -> np.ndarray:
    return np.conj(np.swapaxes(A, -1, -2))


def as_matrix(A) -> np.ndarray:
    A = np.asarray(A, dtype=np.complex128)
    if A.shape[-2:] != (2, 2):
        raise ValueError(f"Expected 2x2 matrices, got shape {A.shape}")
    return A


def det2(A: np.ndarray) -> np.ndarray:
    A = as_matrix(A)
    return A[..., 0, 0] * A[..., 1, 1] - A[..., 0, 1] * A[..., 1, 0]


def check_sl2c(A, tol: float = ALGEBRA_TOL) -> SL2C:
    """Return A as an array, raising NotUnimodularError if |det A - 1| > tol."""
    A = as_matrix(A)
    defect = float(np.max(np.abs(det2(A) - 1.0))) if A.size else 0.0
    if defect > tol:
        raise NotUnimodularError(defect)
    return A


def unitarity_defect(B) -> float:
    B = as_matrix(B)
    if B.size == 0:
        return 0.0
    gram = _dagger(B) @ B
    return float(max(np.max(np.abs(gram - IDENTITY2)), np.max(np.abs(det2(B) - 1.0))))


def check_su2(B, tol: float = ALGEBRA_TOL) -> SL2C:
    B = as_matrix(B)
    defect = unitarity_defect(B)
    if defect > tol:
        raise NotUnitaryError(defect)
    return B


def sl2c_inverse(A) -> SL2C:
    """Inverse of a unit-determinant 2x2 matrix: [[d, -b], [-c, a]]."""
    A = as_matrix(A)
    inv = np.empty_like(A)
    inv[..., 0, 0] = A[..., 1, 1]
    inv[..., 1, 1] = A[..., 0, 0]
    inv[..., 0, 1] = -A[..., 0, 1]
    inv[..., 1, 0] = -A[..., 1, 0]
    return inv


def covering_map(A) -> LorentzMatrix:
    """
    kappa(A), column mu given by four_vector_from_tilde(A tau^mu A^H).

    Raises:
        NotUnimodularError: if det A != 1
    """
    A = check_sl2c(A)
    conj = A[..., None, :, :] @ PAULI @ _dagger(A)[..., None, :, :]
    # entry [mu, nu] = tr(tau^mu kappa_nu)/2, with kappa_nu = A tau^nu A^H
    return 0.5 * np.einsum('...nij,mji->...mn', conj, PAULI).real


def apply_lorentz(A, x) -> np.ndarray:
    """Lorentz-transform x by the image of A: (Ax)~ = A x~ A^H."""
    A = as_matrix(A)
    x = as_four_vector(x)
    image = A @ tilde(x) @ _dagger(A)
    # A x~ A^H is Hermitian by construction; symmetrize away round-off
    image = 0.5 * (image + _dagger(image))
    return four_vector_from_tilde(image)


def lorentz_defect(L) -> float:
    """Max over |L^T eta L - eta|, |det L - 1| and max(0, 1 - L^0_0)."""
    L = np.asarray(L, dtype=np.float64)
    gram = np.swapaxes(L, -1, -2) @ METRIC @ L
    return float(max(
        np.max(np.abs(gram - METRIC)),
        np.max(np.abs(np.linalg.det(L) - 1.0)),
        np.max(np.maximum(0.0, 1.0 - L[..., 0, 0])),
    ))


def transform_angular_momentum(L, j) -> np.ndarray:
    """Push a lower-index tensor j_{ab} through the Lorentz matrix L."""
    L = np.asarray(L, dtype=np.float64)
    inv_t = METRIC @ L @ METRIC          # (L^{-1})^T for a Lorentz matrix
    out = inv_t @ np.asarray(j, dtype=np.float64) @ np.swapaxes(inv_t, -1, -2)
    return 0.5 * (out - np.swapaxes(out, -1, -2))


def matrix_sqrt_pos(M) -> np.ndarray:
    """
    Positive square root of a 2x2 Hermitian positive-definite matrix.

    Uses the closed form (M + sqrt(det M) I) / sqrt(tr M + 2 sqrt(det M)),
    which for M = p~ reproduces (p~ + m I) / sqrt(2(m + p^0)).

    Raises:
        NotHermitianError: if M is not Hermitian
        NotPositiveError: if M is not positive definite
    """
    M = as_matrix(M)
    asymmetry = hermitian_defect(M)
    if asymmetry > ALGEBRA_TOL * max(1.0, float(np.max(np.abs(M)))):
        raise NotHermitianError(asymmetry)

    det = det2(M).real
    trace = np.trace(M, axis1=-2, axis2=-1).real
    if np.any(det <= 0.0) or np.any(trace <= 0.0):
        raise NotPositiveError("Matrix square root requires a positive-definite matrix")

    root_det = np.sqrt(det)
    scale = np.sqrt(trace + 2.0 * root_det)
    return (M + root_det[..., None, None] * IDENTITY2) / scale[..., None, None]


def rotation(axis: Sequence[float], angle: Union[float, np.ndarray]) -> SL2C:
    """exp(-i angle/2 n.tau): rotation by angle about the unit axis n."""
    n = _unit_axis(axis)
    angle = np.asarray(angle, dtype=np.float64)
    half = 0.5 * angle[..., None, None]
    n_tau = np.einsum('j,jab->ab', n.astype(np.complex128), PAULI[1:])
    return np.cos(half) * IDENTITY2 - 1j * np.sin(half) * n_tau


def boost(axis: Sequence[float], rapidity: Union[float, np.ndarray]) -> SL2C:
    """exp(rapidity/2 n.tau): boost with the given rapidity along the unit axis n."""
    n = _unit_axis(axis)
    rapidity = np.asarray(rapidity, dtype=np.float64)
    half = 0.5 * rapidity[..., None, None]
    n_tau = np.einsum('j,jab->ab', n.astype(np.complex128), PAULI[1:])
    return np.cosh(half) * IDENTITY2 + np.sinh(half) * n_tau


def _unit_axis(axis: Sequence[float]) -> np.ndarray:
    n = np.asarray(axis, dtype=np.float64)
    norm = np.linalg.norm(n)
    if n.shape != (3,) or norm == 0.0:
        raise ValueError(f"Axis must be a nonzero 3-vector, got {axis!r}")
    return n / norm


def rotation_to(nhat) -> SL2C:
    """
    R(n_hat) = diag(e^{-i phi/2}, e^{i phi/2}) . [[cos t/2, -sin t/2], [sin t/2, cos t/2]]
    taking z_hat to n_hat, from the spherical angles (theta, phi) of n_hat.

    At n_hat = -z_hat the azimuth is fixed to phi = 0.

    Raises:
        ValueError: for zero or non-unit input
    """
    nhat = np.asarray(nhat, dtype=np.float64)
    norm = np.linalg.norm(nhat, axis=-1)
    if np.any(norm == 0.0):
        raise ValueError("rotation_to requires a nonzero direction")
    if np.any(np.abs(norm - 1.0) > ALGEBRA_TOL):
        raise ValueError(f"rotation_to requires a unit vector (|n| = {np.max(norm):.15g})")

    theta = np.arccos(np.clip(nhat[..., 2], -1.0, 1.0))
    phi = np.arctan2(nhat[..., 1], nhat[..., 0])
    # arctan2 of signed zeros can give +-pi at the poles
    phi = np.where(np.hypot(nhat[..., 0], nhat[..., 1]) == 0.0, 0.0, phi)

    c, s = np.cos(0.5 * theta), np.sin(0.5 * theta)
    e = np.exp(-0.5j * phi)
    out = np.empty(theta.shape + (2, 2), dtype=np.complex128)
    out[..., 0, 0] = e * c
    out[..., 0, 1] = -e * s
    out[..., 1, 0] = np.conj(e) * s
    out[..., 1, 1] = np.conj(e) * c
    return out


def boost_z(pmag, m: float = 1.0) -> SL2C:
    """B(|p|) = diag(sqrt((p0 + |p|)/m), sqrt((p0 - |p|)/m)), mapping k to (p0, 0, 0, |p|)."""
    if m <= 0:
        raise ValueError(f"Mass must be positive, got {m}")
    pmag = np.asarray(pmag, dtype=np.float64)
    if np.any(pmag < 0):
        raise ValueError("boost_z requires |p| >= 0")
    p0 = np.sqrt(m * m + pmag * pmag)
    out = np.zeros(pmag.shape + (2, 2), dtype=np.complex128)
    out[..., 0, 0] = np.sqrt((p0 + pmag) / m)
    # p0 - |p| = m^2 / (p0 + |p|) avoids cancellation at large |p|
    out[..., 1, 1] = np.sqrt(m / (p0 + pmag))
    return out


def on_shell_defect(p, m: float) -> float:
    """Max |<p,p> - m^2|; infinite if any p^0 <= 0."""
    p = as_four_vector(p)
    if p.size == 0:
        return 0.0
    if np.any(p[..., 0] <= 0.0):
        return float('inf')
    return float(np.max(np.abs(minkowski_product(p, p) - m * m)))


def check_on_shell(p, m: float) -> np.ndarray:
    """
    Raises:
        OffShellError: if any momentum misses the shell by more than
            1e-10 * max(m^2, (p^0)^2)
    """
    p = as_four_vector(p)
    if m <= 0:
        raise ValueError(f"Mass must be positive, got {m}")
    defect = on_shell_defect(p, m)
    scale = max(m * m, float(np.max(p[..., 0] ** 2))) if p.size else m * m
    if defect > ON_SHELL_TOL * scale:
        raise OffShellError(defect, m)
    return p


def standard_boost(p, m: float = 1.0) -> SL2C:
    """L0(p) = sqrt(p~/m), the unique positive boost with L0(p) k = p."""
    p = check_on_shell(p, m)
    return matrix_sqrt_pos(tilde(p) / m)


def standard_boost_polar(p, m: float = 1.0) -> SL2C:
    """L0(p) as the product R(p_hat) B(|p|) R(p_hat)^{-1}."""
    p = check_on_shell(p, m)
    R = helicity_rotation(p)
    return R @ boost_z(np.linalg.norm(p[..., 1:], axis=-1), m) @ _dagger(R)


def general_boost(p, B, m: float = 1.0) -> SL2C:
    """L(p) = L0(p) B for a rotation B in SU(2)."""
    B = check_su2(B)
    return standard_boost(p, m) @ B


def helicity_rotation(p) -> SL2C:
    """R(p_hat) for each momentum; the identity where |p| = 0."""
    p = as_four_vector(p)
    pvec = p[..., 1:]
    pmag = np.linalg.norm(pvec, axis=-1)
    zero = pmag == 0.0
    nhat = np.where(zero[..., None], np.array([0.0, 0.0, 1.0]),
                    pvec / np.where(zero, 1.0, pmag)[..., None])
    # renormalize to keep rotation_to's unit-vector check happy
    nhat = nhat / np.linalg.norm(nhat, axis=-1)[..., None]
    return rotation_to(nhat)


def boost_for(p, choice: BoostChoice = BoostChoice.STANDARD, m: float = 1.0) -> SL2C:
    """L(p) under the given convention."""
    choice = BoostChoice(choice)
    L0 = standard_boost(p, m)
    if choice is BoostChoice.STANDARD:
        return L0
    return L0 @ helicity_rotation(p)


def wigner_rotation(Lam, p, choice: BoostChoice = BoostChoice.STANDARD,
                    m: float = 1.0) -> SL2C:
    """W(Lam, p) = L(Lam p)^{-1} Lam L(p), an element of SU(2)."""
    Lam = check_sl2c(Lam)
    p = check_on_shell(p, m)
    image = apply_lorentz(Lam, p)
    return sl2c_inverse(boost_for(image, choice, m)) @ Lam @ boost_for(p, choice, m)


def random_su2(rng: np.random.Generator, size: Optional[int] = None) -> SL2C:
    """Haar-random SU(2) elements from normalized quaternions."""
    shape = () if size is None else (size,)
    q = rng.normal(size=shape + (4,))
    q /= np.linalg.norm(q, axis=-1, keepdims=True)
    out = np.empty(shape + (2, 2), dtype=np.complex128)
    out[..., 0, 0] = q[..., 0] + 1j * q[..., 3]
    out[..., 0, 1] = q[..., 2] + 1j * q[..., 1]
    out[..., 1, 0] = -q[..., 2] + 1j * q[..., 1]
    out[..., 1, 1] = q[..., 0] - 1j * q[..., 3]
    return out


def random_sl2c(rng: np.random.Generator, size: Optional[int] = None,
                max_rapidity: float = 1.0) -> SL2C:
    """Random boost (rapidity up to max_rapidity, random axis) times a Haar rotation."""
    shape = () if size is None else (size,)
    axes = rng.normal(size=shape + (3,))
    axes /= np.linalg.norm(axes, axis=-1, keepdims=True)
    rapidity = rng.uniform(0.0, max_rapidity, size=shape)
    n_tau = np.einsum('...j,jab->...ab', axes.astype(np.complex128), PAULI[1:])
    half = 0.5 * rapidity[..., None, None]
    B = np.cosh(half) * IDENTITY2 + np.sinh(half) * n_tau
    return B @ random_su2(rng, size)
