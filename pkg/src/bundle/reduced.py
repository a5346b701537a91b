#!/usr/bin/env python3
# Copyright (c) 2025 Denis Darkin
# SPDX-License-Identifier: MIT
"""
Reduced 2x2 spin matrices of single-particle states.

    - peres_rdm: integral of psi psi^H d mu in the standard picture; unit trace,
      but its spectrum is not preserved by boosts of spread-out packets
    - pl_reduced: integral of phi phi^H d mu in the alternative picture;
      transforms as sigma -> Lam sigma Lam^H
    - theta_matrix: m sigma - tilde(<p>)/2, whose four-vector is <W^mu>

Quadrature budgets are self-calibrating: the same quantity is recomputed on a
grid with twice the points per axis and the budget is ten times the change.
Verdicts hold residuals to the configured tolerances; the budget only tells
a real violation apart from an under-resolved grid.
"""

import logging
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Dict, List, Optional, Tuple

import numpy as np

from config import DEFAULT_TOLERANCES
from errors import (
    GridCoverageError,
    NotHermitianError,
    NotPositiveError,
    PictureMismatchError,
)
from lorentz.mass_shell import MomentumGrid, boundary_fraction, integrate, refined
from lorentz.spacetime import hermitian_defect, tilde
from lorentz.spin_group import ALGEBRA_TOL, boost_for, check_sl2c, unitarity_defect
from .observables import expectation_momentum, qubit_pl_vector
from .states import Picture, Wavepacket, evaluate, poincare_transform, state_digest

logger = logging.getLogger('SpinBundle.Reduced')

MATRIX_TOL = 1e-11
BUDGET_FLOOR = 1e-12
BUDGET_FACTOR = 10.0
COVERAGE_THRESHOLD = 1e-6


class ReducedKind(str, Enum):
    PERES_SPIN = 'peres_spin'
    PAULI_LUBANSKY = 'pauli_lubansky'


def _pairs(M: np.ndarray) -> List:
    """Complex entries as [re, im] pairs, row-major."""
    return [[[float(z.real), float(z.imag)] for z in row] for row in np.asarray(M)]


@dataclass(frozen=True, eq=False)
class ReducedMatrix:
    """
    A Hermitian positive semidefinite 2x2 matrix with positive trace.

    Raises:
        NotHermitianError: if |M - M^H| > 1e-11
        NotPositiveError: if an eigenvalue is below -1e-11 or the trace is not positive
    """
    matrix: np.ndarray
    kind: ReducedKind
    grid: Dict = field(default_factory=dict)
    source: str = ''

    def __post_init__(self):
        M = np.asarray(self.matrix, dtype=np.complex128).reshape(2, 2)
        scale = max(1.0, float(np.max(np.abs(M))))
        asymmetry = hermitian_defect(M)
        if asymmetry > MATRIX_TOL * scale:
            raise NotHermitianError(asymmetry)
        M = 0.5 * (M + M.conj().T)
        eigenvalues = np.linalg.eigvalsh(M)
        if eigenvalues[0] < -MATRIX_TOL * scale:
            raise NotPositiveError(f"Reduced matrix has a negative eigenvalue {eigenvalues[0]:.3e}")
        if not np.trace(M).real > 0.0:
            raise NotPositiveError("Reduced matrix must have positive trace")
        M.setflags(write=False)
        object.__setattr__(self, 'matrix', M)
        object.__setattr__(self, 'kind', ReducedKind(self.kind))

    @property
    def trace(self) -> float:
        return float(np.trace(self.matrix).real)

    def eigenvalues(self) -> np.ndarray:
        """Ascending eigenvalues."""
        return np.linalg.eigvalsh(self.matrix)

    def normalized(self) -> 'ReducedMatrix':
        return ReducedMatrix(self.matrix / self.trace, self.kind, self.grid, self.source)

    def to_dict(self) -> Dict:
        return {
            'kind': self.kind.value,
            'matrix': _pairs(self.matrix),
            'eigenvalues': [float(e) for e in self.eigenvalues()],
            'trace': self.trace,
            'grid': self.grid,
            'source': self.source,
        }


def _outer_integral(grid: MomentumGrid, values: np.ndarray) -> np.ndarray:
    return integrate(grid, np.einsum('ni,nj->nij', values, np.conj(values)))


def peres_rdm(psi: Wavepacket, grid: MomentumGrid) -> ReducedMatrix:
    """integral of psi(p) psi(p)^H d mu for psi in H."""
    if psi.picture is not Picture.STANDARD:
        raise PictureMismatchError("peres_rdm takes a standard-picture state")
    M = _outer_integral(grid, evaluate(psi, grid.nodes))
    return ReducedMatrix(M, ReducedKind.PERES_SPIN, grid.describe(), state_digest(psi))


def pl_reduced(phi: Wavepacket, grid: MomentumGrid, normalize: bool = False) -> ReducedMatrix:
    """sigma(phi) = integral of phi(p) phi(p)^H d mu for phi in H'; not unit-trace in general."""
    if phi.picture is not Picture.ALTERNATIVE:
        raise PictureMismatchError("pl_reduced takes an alternative-picture state")
    M = _outer_integral(grid, evaluate(phi, grid.nodes))
    sigma = ReducedMatrix(M, ReducedKind.PAULI_LUBANSKY, grid.describe(), state_digest(phi))
    return sigma.normalized() if normalize else sigma


def theta_matrix(phi: Wavepacket, grid: MomentumGrid) -> np.ndarray:
    """m sigma(phi) - tilde(<p>_phi)/2."""
    sigma = pl_reduced(phi, grid)
    return phi.m * sigma.matrix - 0.5 * tilde(expectation_momentum(phi, grid))


def pulled_back_matrix(psi: Wavepacket, grid: MomentumGrid) -> np.ndarray:
    """
    Rebuild sigma(alpha^{-1} psi) from qubit Pauli-Lubansky vectors.

    At each node psi(p) = f(p) chi(p) with |chi| = 1; chi is moved to E' by
    L(p), its w(p) is formed, and (tilde(w) + tilde(p)/2)/m is averaged
    with weight |f|^2.
    """
    if psi.picture is not Picture.STANDARD:
        raise PictureMismatchError("pulled_back_matrix takes a standard-picture state")
    nodes = grid.nodes
    values = evaluate(psi, nodes)
    weight = np.sum(np.abs(values) ** 2, axis=-1)
    alive = weight > 0.0
    chi = values[alive] / np.sqrt(weight[alive])[:, None]
    lifted = np.einsum('nij,nj->ni', boost_for(nodes[alive], psi.boost_choice, psi.m), chi)
    w = qubit_pl_vector(nodes[alive], lifted, psi.m)
    integrand = np.zeros((grid.size, 2, 2), dtype=np.complex128)
    integrand[alive] = weight[alive, None, None] * (tilde(w) + 0.5 * tilde(nodes[alive])) / psi.m
    return integrate(grid, integrand)


def refinement_budget(coarse, fine) -> float:
    """10 x max |coarse - fine|, floored at 1e-12."""
    change = float(np.max(np.abs(np.asarray(coarse) - np.asarray(fine))))
    return max(BUDGET_FACTOR * change, BUDGET_FLOOR)


def quadrature_budget(compute: Callable[..., np.ndarray], *grids: MomentumGrid) -> float:
    """refinement_budget of compute on grids and on the refined grids."""
    return refinement_budget(compute(*grids), compute(*[refined(g) for g in grids]))


def covariance_tolerance(Lam, tolerance: Optional[float] = None,
                         rotation_tolerance: Optional[float] = None) -> float:
    """The configured covariance bound, tightened to the rotation bound for SU(2)."""
    tolerance = DEFAULT_TOLERANCES['covariance'] if tolerance is None else tolerance
    if unitarity_defect(Lam) > ALGEBRA_TOL:
        return tolerance
    rotation = DEFAULT_TOLERANCES['rotation'] if rotation_tolerance is None else rotation_tolerance
    return min(tolerance, rotation)


def covariance_verdict(residual: float, budget: float, tolerance: float) -> str:
    """
    covariant      residual within tolerance
    non-covariant  residual above tolerance and resolved by the grid
    unresolved     residual above tolerance but inside the quadrature budget
    """
    if residual <= tolerance:
        return 'covariant'
    return 'non-covariant' if residual > budget else 'unresolved'


def check_coverage(psi: Wavepacket, grid: MomentumGrid, label: str = 'state',
                   threshold: float = COVERAGE_THRESHOLD) -> float:
    """
    Raises:
        GridCoverageError: if the outermost node layer carries more than
            threshold of the state's weight
    """
    density = np.sum(np.abs(evaluate(psi, grid.nodes)) ** 2, axis=-1)
    fraction = boundary_fraction(grid, density)
    logger.debug(f"Boundary weight fraction of {label}: {fraction:.3e}")
    if fraction > threshold:
        raise GridCoverageError(fraction, threshold, label)
    return fraction


@dataclass(frozen=True)
class CovarianceReport:
    kind: ReducedKind
    matrix_a: np.ndarray
    matrix_b: np.ndarray
    residual: float
    budget: float
    tolerance: float
    verdict: str
    equation: str = 'sigma_B = Lam sigma_A Lam^H'

    def to_dict(self) -> Dict:
        return {
            'kind': ReducedKind(self.kind).value,
            'equation': self.equation,
            'matrix': _pairs(self.matrix_b),
            'matrix_reference': _pairs(self.matrix_a),
            'eigenvalues': [float(e) for e in np.linalg.eigvalsh(self.matrix_b)],
            'residual': self.residual,
            'budget': self.budget,
            'tolerance': self.tolerance,
            'verdict': self.verdict,
        }


@dataclass(frozen=True)
class WitnessReport:
    eig_a: np.ndarray
    eig_b: np.ndarray
    shift: float
    budget: float
    verdict: str
    sigma_over_m: float
    threshold: float
    tolerance: float
    warnings: Tuple[str, ...] = ()

    def to_dict(self) -> Dict:
        return {
            'kind': ReducedKind.PERES_SPIN.value,
            'equation': 'eig(rho_B) = eig(rho_A)',
            'eig_a': [float(e) for e in self.eig_a],
            'eig_b': [float(e) for e in self.eig_b],
            'shift': self.shift,
            'budget': self.budget,
            'verdict': self.verdict,
            'sigma_over_m': self.sigma_over_m,
            'threshold': self.threshold,
            'tolerance': self.tolerance,
            'warnings': list(self.warnings),
        }


def _pl_residual(phi: Wavepacket, moved: Wavepacket, Lam: np.ndarray,
                 grid_a: MomentumGrid, grid_b: MomentumGrid) -> Tuple[np.ndarray, np.ndarray, float]:
    sigma_a = pl_reduced(phi, grid_a).matrix
    sigma_b = pl_reduced(moved, grid_b).matrix
    expected = Lam @ sigma_a @ Lam.conj().T
    return sigma_a, sigma_b, float(np.max(np.abs(sigma_b - expected)))


def covariance_residual(phi: Wavepacket, Lam, a, grid_a: MomentumGrid,
                        grid_b: MomentumGrid) -> float:
    """
    max |sigma(U'(Lam, a) phi) - Lam sigma(phi) Lam^H|.

    Raises:
        GridCoverageError: if either grid misses part of its state's support
    """
    Lam = check_sl2c(Lam)
    moved = poincare_transform(phi, Lam, a)
    check_coverage(phi, grid_a, 'reference state')
    check_coverage(moved, grid_b, 'transformed state')
    return _pl_residual(phi, moved, Lam, grid_a, grid_b)[2]


def covariance_report(phi: Wavepacket, Lam, a, grid_a: MomentumGrid, grid_b: MomentumGrid,
                      tolerance: Optional[float] = None,
                      rotation_tolerance: Optional[float] = None) -> CovarianceReport:
    """
    covariance_residual with its quadrature budget and a verdict.

    The verdict holds the residual to the covariance tolerance (the rotation
    tolerance for SU(2)); the budget only separates a real failure from an
    under-resolved grid.
    """
    Lam = check_sl2c(Lam)
    moved = poincare_transform(phi, Lam, a)
    check_coverage(phi, grid_a, 'reference state')
    check_coverage(moved, grid_b, 'transformed state')
    sigma_a, sigma_b, residual = _pl_residual(phi, moved, Lam, grid_a, grid_b)
    fine = _pl_residual(phi, moved, Lam, refined(grid_a), refined(grid_b))[2]
    budget = refinement_budget(residual, fine)
    bound = covariance_tolerance(Lam, tolerance, rotation_tolerance)
    verdict = covariance_verdict(residual, budget, bound)
    logger.debug(f"sigma covariance residual {residual:.3e} "
                 f"(tolerance {bound:.1e}, budget {budget:.3e}): {verdict}")
    return CovarianceReport(ReducedKind.PAULI_LUBANSKY, sigma_a, sigma_b, residual, budget,
                            bound, verdict)


def _spectra(psi: Wavepacket, moved: Wavepacket, grid_a: MomentumGrid,
             grid_b: MomentumGrid) -> Tuple[np.ndarray, np.ndarray]:
    eig_a = peres_rdm(psi, grid_a).normalized().eigenvalues()
    eig_b = peres_rdm(moved, grid_b).normalized().eigenvalues()
    return eig_a, eig_b


def noncovariance_witness(psi: Wavepacket, Lam, grid_a: MomentumGrid, grid_b: MomentumGrid,
                          spread_floor: Optional[float] = None,
                          shift_threshold: Optional[float] = None,
                          tolerance: Optional[float] = None,
                          rotation_tolerance: Optional[float] = None) -> WitnessReport:
    """
    Compare the Peres RDM spectrum before and after U(Lam).

    Any SU(2) frame-change rule rho_B = V rho_A V^H preserves the spectrum, so a
    shift above both the quadrature budget and shift_threshold rules all of
    them out. A shift within the covariance tolerance is 'covariant'; anything
    in between is 'inconclusive'.

    Raises:
        GridCoverageError: if either grid misses part of its state's support
    """
    if psi.picture is not Picture.STANDARD:
        raise PictureMismatchError("noncovariance_witness takes a standard-picture state")
    Lam = check_sl2c(Lam)
    spread_floor = DEFAULT_TOLERANCES['spread_floor'] if spread_floor is None else spread_floor
    threshold = DEFAULT_TOLERANCES['witness_shift'] if shift_threshold is None else shift_threshold
    bound = covariance_tolerance(Lam, tolerance, rotation_tolerance)
    warnings = []
    ratio = psi.sigma / psi.m
    if ratio < spread_floor:
        message = f"sigma/m = {ratio:.3e} is below {spread_floor:g}; the witness cannot detect mixing"
        logger.warning(message)
        warnings.append(message)

    moved = poincare_transform(psi, Lam)
    check_coverage(psi, grid_a, 'reference state')
    check_coverage(moved, grid_b, 'transformed state')

    eig_a, eig_b = _spectra(psi, moved, grid_a, grid_b)
    shift = float(np.max(np.abs(eig_a - eig_b)))
    fine_a, fine_b = _spectra(psi, moved, refined(grid_a), refined(grid_b))
    budget = refinement_budget(shift, np.max(np.abs(fine_a - fine_b)))
    if shift > budget and shift > threshold:
        verdict = 'non-covariant'
    elif shift <= bound:
        verdict = 'covariant'
    else:
        verdict = 'inconclusive'
    logger.debug(f"Peres spectral shift {shift:.3e} (threshold {threshold:.1e}, "
                 f"budget {budget:.3e}): {verdict}")
    return WitnessReport(eig_a, eig_b, shift, budget, verdict, ratio, threshold, bound,
                         tuple(warnings))
