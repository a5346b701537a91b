#!/usr/bin/env python3
# Copyright (c) 2025 Denis Darkin
# SPDX-License-Identifier: MIT
"""
Spin observables at the qubit level and as multiplicative operators on H'.

Qubit level:
    - spin_direction: chi -> n with chi chi^H = (tau.n + I)/2
    - qubit_pl_vector: tilde(w) = m chi chi^H - tilde(p)/2 for an h-normalized chi
    - newton_wigner_classical: de-boost w with L0(p)^{-1}

Operator level (p -> 2x2 matrix rules, no derivatives):
    - pl_operator: W^mu = (tilde(p) tau^mu - p^mu I)/2
    - nw_spin_operator: Newton-Wigner spin in H', three equivalent closed forms

The derivative terms of J and K only show up in generator_fd, which
differentiates the transformation law numerically.
"""

import logging
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from errors import NormalizationError, OrthogonalityError, PictureMismatchError
from lorentz.mass_shell import MomentumGrid, integrate
from lorentz.spacetime import (
    IDENTITY2,
    PAULI,
    as_four_vector,
    four_vector_from_tilde,
    minkowski_product,
    tilde,
    under_tilde,
)
from lorentz.spin_group import (
    boost,
    check_on_shell,
    matrix_sqrt_pos,
    rotation,
    standard_boost,
)
from .states import Picture, Wavepacket, alpha, evaluate, poincare_transform

logger = logging.getLogger('SpinBundle.Observables')

UNIT_TOL = 1e-12
H_NORM_TOL = 1e-10
ORTHOGONALITY_TOL = 1e-10
FD_EPS_RANGE = (1e-6, 1e-3)
DEFAULT_FD_EPS = 1e-4

GENERATORS = ('J1', 'J2', 'J3', 'K1', 'K2', 'K3', 'P0', 'P1', 'P2', 'P3')

_AXES = np.eye(3)


@dataclass(frozen=True)
class SpinDirection:
    """Unit 3-vector n with (tau.n) chi = chi."""
    n: np.ndarray

    def __post_init__(self):
        n = np.asarray(self.n, dtype=np.float64)
        if abs(np.linalg.norm(n) - 1.0) > UNIT_TOL:
            raise NormalizationError(f"Spin direction must be a unit vector, got |n| = {np.linalg.norm(n)}")
        object.__setattr__(self, 'n', n)

    def projector(self) -> np.ndarray:
        """(tau.n + I)/2."""
        return 0.5 * (np.einsum('j,jab->ab', self.n.astype(np.complex128), PAULI[1:]) + IDENTITY2)


def spin_direction(chi) -> SpinDirection:
    """
    n = chi^H tau chi for a unit spinor.

    Raises:
        NormalizationError: if |chi| deviates from 1 by more than 1e-12
    """
    chi = np.asarray(chi, dtype=np.complex128).reshape(2)
    norm = np.linalg.norm(chi)
    if abs(norm - 1.0) > UNIT_TOL:
        raise NormalizationError(f"Spinor must have unit norm, got {norm:.15g}")
    n = np.einsum('a,jab,b->j', np.conj(chi), PAULI[1:], chi).real
    # exact for unit chi up to round-off
    return SpinDirection(n / np.linalg.norm(n))


def qubit_pl_vector(p, chi, m: float = 1.0) -> np.ndarray:
    """
    Pauli-Lubansky four-vector of a qubit chi in E' over p.

    Args:
        p: on-shell momentum (..., 4)
        chi: spinor (..., 2) with h-norm chi^H (p_/m) chi = 1
        m: particle mass

    Returns:
        w with tilde(w) = m chi chi^H - tilde(p)/2

    Raises:
        NormalizationError: if the h-norm misses 1 by more than 1e-10
    """
    p = check_on_shell(p, m)
    chi = np.asarray(chi, dtype=np.complex128)
    h_norm = np.einsum('...i,...ij,...j->...', np.conj(chi), under_tilde(p) / m, chi).real
    defect = float(np.max(np.abs(h_norm - 1.0)))
    if defect > H_NORM_TOL:
        raise NormalizationError(f"Qubit is not h-normalized (max |h(chi, chi) - 1| = {defect:.3e})")
    outer = np.einsum('...i,...j->...ij', chi, np.conj(chi))
    return four_vector_from_tilde(m * outer - 0.5 * tilde(p), tol=1e-10)


def newton_wigner_classical(p, w, m: float = 1.0) -> np.ndarray:
    """
    s = (w_vec - w^0 p_vec / (m + p^0)) / m, the rest-frame spin of w.

    Raises:
        OrthogonalityError: if |<p, w>| > 1e-10
    """
    p = check_on_shell(p, m)
    w = as_four_vector(w)
    overlap = float(np.max(np.abs(minkowski_product(p, w))))
    scale = max(1.0, float(np.max(np.abs(p))) * float(np.max(np.abs(w))))
    if overlap > ORTHOGONALITY_TOL * scale:
        raise OrthogonalityError(f"Pauli-Lubansky vector is not orthogonal to p (|<p,w>| = {overlap:.3e})")
    ratio = (w[..., 0] / (m + p[..., 0]))[..., None]
    return (w[..., 1:] - ratio * p[..., 1:]) / m


@dataclass(frozen=True)
class MultiplicativeOperator:
    """
    Operator acting on H' by pointwise multiplication with rule(p).

    rule maps momenta (..., 4) to (..., 2, 2), or to (..., 3, 2, 2) for a
    vector operator (components on the third-from-last axis).
    """
    name: str
    rule: Callable[[np.ndarray], np.ndarray]
    components: int = 1

    def __call__(self, p) -> np.ndarray:
        return self.rule(as_four_vector(p))

    def apply(self, p, spinors) -> np.ndarray:
        M = self(p)
        spinors = np.asarray(spinors, dtype=np.complex128)
        if self.components == 1:
            return np.einsum('...ij,...j->...i', M, spinors)
        return np.einsum('...kij,...j->...ki', M, spinors)


def _check_index(mu: int):
    if mu not in (0, 1, 2, 3):
        raise ValueError(f"Four-vector index must be 0..3, got {mu!r}")


def _pl_rule(mu: int):
    def rule(p):
        return 0.5 * (tilde(p) @ PAULI[mu] - p[..., mu, None, None] * IDENTITY2)
    return rule


def pl_operator(mu: int) -> MultiplicativeOperator:
    """W^mu = (tilde(p) tau^mu - p^mu I)/2."""
    _check_index(mu)
    return MultiplicativeOperator(f"W{mu}", _pl_rule(mu))


def pl_operator_explicit(mu: int) -> MultiplicativeOperator:
    """W^0 = -(p_ - p^0 I)/2 and W^j = (tau^j p_ + p^j I)/2."""
    _check_index(mu)

    def rule(p):
        if mu == 0:
            return -0.5 * (under_tilde(p) - p[..., 0, None, None] * IDENTITY2)
        return 0.5 * (PAULI[mu] @ under_tilde(p) + p[..., mu, None, None] * IDENTITY2)

    return MultiplicativeOperator(f"W{mu}_explicit", rule)


def pl_operator_cross(mu: int) -> MultiplicativeOperator:
    """W^0 = p.tau/2 and W = (p^0 tau - i p x tau)/2."""
    _check_index(mu)

    def rule(p):
        pvec = p[..., 1:].astype(np.complex128)
        if mu == 0:
            return 0.5 * np.einsum('...j,jab->...ab', pvec, PAULI[1:])
        j = mu - 1
        k, l = (j + 1) % 3, (j + 2) % 3
        # (p x tau)^j = p^k tau^l - p^l tau^k with (j, k, l) cyclic
        cross = pvec[..., k, None, None] * PAULI[l + 1] - pvec[..., l, None, None] * PAULI[k + 1]
        return 0.5 * (p[..., 0, None, None] * PAULI[mu] - 1j * cross)

    return MultiplicativeOperator(f"W{mu}_cross", rule)


def _nw_closed_form(p, m: float) -> np.ndarray:
    p_under = under_tilde(p)
    p0 = p[..., 0, None, None]
    taus = np.einsum('jab,...bc->...jac', PAULI[1:], p_under)
    shift = (p_under + m * IDENTITY2) / (m + p0)
    return (taus + p[..., 1:, None, None] * shift[..., None, :, :]) / (2.0 * m)


def nw_spin_operator(m: float = 1.0) -> MultiplicativeOperator:
    """S_NW(p) = (tau p_ + p (p_ + m I)/(m + p^0)) / (2m), a 3-component operator on H'."""
    return MultiplicativeOperator("S_NW", lambda p: _nw_closed_form(p, m), components=3)


def nw_spin_conjugated(p, m: float = 1.0) -> np.ndarray:
    """sqrt(p~/m) (tau/2) sqrt(p_/m), shape (..., 3, 2, 2)."""
    p = check_on_shell(p, m)
    left = standard_boost(p, m)
    right = matrix_sqrt_pos(under_tilde(p) / m)
    return np.einsum('...ab,jbc,...cd->...jad', left, 0.5 * PAULI[1:], right)


def nw_spin_from_pl(p, m: float = 1.0) -> np.ndarray:
    """(W - W^0 p/(m + p^0)) / m from the W^mu rules, shape (..., 3, 2, 2)."""
    p = as_four_vector(p)
    W0 = pl_operator(0)(p)
    ratio = (p[..., 1:] / (m + p[..., 0, None]))[..., None, None]
    spatial = np.stack([pl_operator(j)(p) for j in (1, 2, 3)], axis=-3)
    return (spatial - ratio * W0[..., None, :, :]) / m


def _require_alternative(phi: Wavepacket):
    if phi.picture is not Picture.ALTERNATIVE:
        raise PictureMismatchError("Expectation values here are taken in H' (alternative picture)")


def expectation_operator(phi: Wavepacket, op: MultiplicativeOperator, grid: MomentumGrid,
                         other: Optional[Wavepacket] = None) -> np.ndarray:
    """
    Matrix element integral of phi^H (p_/m) O(p) chi d mu, with chi = other or phi.

    Returns a complex scalar, or a complex 3-vector for vector operators.
    """
    _require_alternative(phi)
    if other is not None:
        _require_alternative(other)
    nodes = grid.nodes
    left = evaluate(phi, nodes)
    right = left if other is None else evaluate(other, nodes)
    bra = np.einsum('ni,nij->nj', np.conj(left), under_tilde(nodes) / phi.m)
    if op.components == 1:
        integrand = np.einsum('nj,njk,nk->n', bra, op(nodes), right)
    else:
        integrand = np.einsum('nj,najk,nk->na', bra, op(nodes), right)
    return integrate(grid, integrand)


def expectation_momentum(phi: Wavepacket, grid: MomentumGrid) -> np.ndarray:
    """<P^mu> = integral of p^mu h(phi, phi) d mu."""
    _require_alternative(phi)
    nodes = grid.nodes
    values = evaluate(phi, nodes)
    density = np.einsum('ni,nij,nj->n', np.conj(values), under_tilde(nodes) / phi.m, values).real
    return np.asarray(integrate(grid, nodes * density[:, None]), dtype=np.float64)


def expectation_pl(phi: Wavepacket, grid: MomentumGrid, form: str = 'reduced') -> np.ndarray:
    """
    <W^mu> in H'.

    form='reduced': m integral of phi^H (tau^mu/2) phi d mu - <P^mu>/2
    form='direct':  integral of phi^H (p_/m) W^mu(p) phi d mu
    """
    _require_alternative(phi)
    if form == 'direct':
        return np.array([expectation_operator(phi, pl_operator(mu), grid).real for mu in range(4)])
    if form != 'reduced':
        raise ValueError(f"Unknown form '{form}' (choose 'reduced' or 'direct')")
    values = evaluate(phi, grid.nodes)
    spin = np.einsum('ni,mij,nj->nm', np.conj(values), 0.5 * PAULI, values).real
    return phi.m * np.asarray(integrate(grid, spin)) - 0.5 * expectation_momentum(phi, grid)


def expectation_nw(phi: Wavepacket, grid: MomentumGrid, form: str = 'alpha') -> np.ndarray:
    """
    <S_NW> for phi in H'.

    form='alpha':    integral of [alpha phi]^H (tau/2) [alpha phi] d mu
    form='operator': integral of phi^H (p_/m) S_NW(p) phi d mu
    """
    _require_alternative(phi)
    if form == 'operator':
        return np.real(expectation_operator(phi, nw_spin_operator(phi.m), grid))
    if form != 'alpha':
        raise ValueError(f"Unknown form '{form}' (choose 'alpha' or 'operator')")
    values = evaluate(alpha(phi), grid.nodes)
    spin = np.einsum('ni,jik,nk->nj', np.conj(values), 0.5 * PAULI[1:], values).real
    return np.asarray(integrate(grid, spin))


def _one_parameter(kind: str, t: float) -> np.ndarray:
    axis = _AXES[int(kind[1]) - 1]
    if kind[0] == 'J':
        return rotation(axis, t)
    return boost(axis, t)


def generator_fd(phi: Wavepacket, kind: str, p, eps: float = DEFAULT_FD_EPS) -> np.ndarray:
    """
    [G phi](p) for a Poincare generator G, with U'(exp) = exp(-i t G).

    J^j and K^j are central differences i (U'(t=eps) - U'(t=-eps)) phi (p) / (2 eps)
    along R^j(t) and B^j(t). P^mu is multiplicative: p^mu phi(p).

    Raises:
        ValueError: unknown generator or eps outside [1e-6, 1e-3]
    """
    _require_alternative(phi)
    if kind not in GENERATORS:
        raise ValueError(f"Unknown generator '{kind}' (choose from {GENERATORS})")
    if not FD_EPS_RANGE[0] <= eps <= FD_EPS_RANGE[1]:
        raise ValueError(f"Finite-difference step must lie in {FD_EPS_RANGE}, got {eps}")
    p = check_on_shell(np.asarray(p, dtype=np.float64).reshape(4), phi.m)

    if kind[0] == 'P':
        return p[int(kind[1])] * evaluate(phi, p)

    forward = evaluate(poincare_transform(phi, _one_parameter(kind, eps)), p)
    backward = evaluate(poincare_transform(phi, _one_parameter(kind, -eps)), p)
    return 1j * (forward - backward) / (2.0 * eps)


def fd_pauli_lubansky(phi: Wavepacket, p, eps: float = DEFAULT_FD_EPS) -> np.ndarray:
    """
    [W^mu phi](p) assembled from finite-difference generators.

    W^0 = P.J and W = P^0 J - P x K; returns an array of shape (4, 2).
    """
    p = np.asarray(p, dtype=np.float64).reshape(4)
    J = np.stack([generator_fd(phi, f"J{j}", p, eps) for j in (1, 2, 3)])
    K = np.stack([generator_fd(phi, f"K{j}", p, eps) for j in (1, 2, 3)])
    pvec = p[1:]
    w0 = np.einsum('j,ja->a', pvec, J)
    spatial = p[0] * J - np.cross(pvec[:, None], K, axis=0)
    logger.debug(f"Finite-difference W at p = {p.tolist()} with eps = {eps:g}")
    return np.concatenate([w0[None, :], spatial])
