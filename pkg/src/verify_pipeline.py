#!/usr/bin/env python3
# Copyright (c) 2025 Denis Darkin
# SPDX-License-Identifier: MIT
"""
SpinBundle - Verification Suite
Run the identity catalogue of the spin-bundle library with seeded randomness
and report each identity with its maximal residual.
"""

from pathlib import Path
import sys
import traceback
from typing import Callable, List, Tuple

import numpy as np

# Add src to path
sys.path.insert(0, str(Path(__file__).parent))

from pipeline_base import (
    Check,
    grid_for,
    log_pipeline_start,
    log_run_summary,
    parse_pipeline_args,
    setup_logging,
    write_report,
)
from config import ExperimentConfig
from errors import SpinBundleError
from lorentz.mass_shell import lift, random_on_shell, refined
from lorentz.spacetime import (
    IDENTITY2,
    PAULI,
    angular_momentum_tensor,
    four_vector_from_tilde,
    minkowski_product,
    pauli_lubansky_classical,
    tilde,
    under_tilde,
)
from lorentz.spin_group import (
    ALGEBRA_TOL,
    BoostChoice,
    apply_lorentz,
    boost,
    covering_map,
    det2,
    lorentz_defect,
    matrix_sqrt_pos,
    random_sl2c,
    random_su2,
    rotation,
    sl2c_inverse,
    standard_boost,
    standard_boost_polar,
    transform_angular_momentum,
    unitarity_defect,
    wigner_rotation,
)
from bundle.states import (
    BundlePoint,
    Picture,
    SpinorRule,
    Wavepacket,
    alpha,
    bundle_iso_L,
    equivalence_check,
    evaluate,
    gaussian_packet,
    grid_for_state,
    metric_g,
    metric_h,
    norm,
    normalize,
    observer_residual,
    poincare_transform,
)
from bundle.observables import (
    expectation_nw,
    expectation_operator,
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
from bundle.reduced import (
    covariance_residual,
    noncovariance_witness,
    peres_rdm,
    pl_reduced,
    pulled_back_matrix,
    theta_matrix,
)

# Below this the residual is round-off and n-doubling cannot shrink it
CONVERGENCE_FLOOR = 1e-10
POINTWISE_NODES = 25

PSTAR = np.array([1.25, 0.0, 0.0, 0.75])


def _max_abs(x) -> float:
    return float(np.max(np.abs(x)))


def _random_spinors(rng: np.random.Generator, size: int) -> np.ndarray:
    return rng.normal(size=(size, 2)) + 1j * rng.normal(size=(size, 2))


def _random_packets(rng: np.random.Generator, count: int, m: float,
                    constant_only: bool = False) -> List[Wavepacket]:
    """Amplitude-1 Gaussians; odd entries use helicity rules unless constant_only."""
    packets = []
    for i in range(count):
        center = m * rng.uniform(-0.5, 0.5, size=3)
        sigma = m * rng.uniform(0.3, 0.7)
        spinor = _random_spinors(rng, 1)[0]
        if i % 2 and not constant_only:
            rule = SpinorRule.helicity((1.0, 0.0))
            center = center + np.array([0.0, 0.0, 2.0 * m])
        else:
            rule = SpinorRule.constant(spinor)
        packets.append(gaussian_packet(center, sigma, rule, m=m))
    return packets


def check_covering_map(config: ExperimentConfig, rng: np.random.Generator) -> List[Check]:
    n = config.verify.samples
    tol = config.verify.tolerance_for('composition')
    A = random_sl2c(rng, n)
    B = random_sl2c(rng, n)
    kA, kB = covering_map(A), covering_map(B)
    detail = f"{n} random SL(2,C) pairs"
    return [
        Check.at_most('covering_homomorphism', 'kappa(AB) = kappa(A) kappa(B)',
                      _max_abs(covering_map(A @ B) - kA @ kB), tol, detail),
        Check.at_most('covering_lorentz', 'kappa(A)^T eta kappa(A) = eta, det = 1, orthochronous',
                      lorentz_defect(kA), tol, detail),
        Check.at_most('covering_kernel', 'kappa(-A) = kappa(A)',
                      _max_abs(covering_map(-A) - kA), tol, detail),
    ]


def check_tilde(config: ExperimentConfig, rng: np.random.Generator) -> List[Check]:
    n = config.verify.samples
    tol = config.verify.tolerance_for('algebra')
    x = 2.0 * rng.normal(size=(n, 4))
    square = minkowski_product(x, x)
    scale = max(1.0, _max_abs(square))
    return [
        Check.at_most('tilde_determinant', 'det(x~) = <x, x>',
                      _max_abs(det2(tilde(x)) - square) / scale, tol, 'relative'),
        Check.at_most('tilde_product', 'x~ x_ = <x, x> I',
                      _max_abs(tilde(x) @ under_tilde(x) - square[:, None, None] * IDENTITY2) / scale,
                      tol, 'relative'),
        Check.at_most('tilde_inverse', 'x^mu = tr(x~ tau^mu)/2',
                      _max_abs(four_vector_from_tilde(tilde(x)) - x), tol),
    ]


def check_square_roots(config: ExperimentConfig, rng: np.random.Generator) -> List[Check]:
    n = config.verify.samples
    m = config.mass
    tol = config.verify.tolerance_for('algebra')
    p = random_on_shell(rng, n, m, p_max=3.0 * m)
    L = standard_boost(p, m)
    k = np.broadcast_to([m, 0.0, 0.0, 0.0], p.shape)
    anchor = standard_boost(PSTAR, 1.0) - np.diag([np.sqrt(2.0), 1.0 / np.sqrt(2.0)])
    detail = f"{n} random on-shell momenta"
    return [
        Check.at_most('sqrt_square', 'sqrt(p~/m)^2 = p~/m', _max_abs(L @ L - tilde(p) / m), tol, detail),
        Check.at_most('sqrt_inverse', 'sqrt(p_/m) sqrt(p~/m) = I',
                      _max_abs(matrix_sqrt_pos(under_tilde(p) / m) @ L - IDENTITY2), tol, detail),
        Check.at_most('sqrt_polar', 'R(p_hat) B(|p|) R(p_hat)^-1 = sqrt(p~/m)',
                      _max_abs(standard_boost_polar(p, m) - L), tol, detail),
        Check.at_most('standard_boost_maps_rest', 'L0(p) k = p',
                      _max_abs(apply_lorentz(L, k) - p), config.verify.tolerance_for('composition'), detail),
        Check.at_most('standard_boost_anchor', 'L0(5/4, 0, 0, 3/4) = diag(sqrt 2, 1/sqrt 2)',
                      _max_abs(anchor), config.verify.tolerance_for('anchor')),
    ]


def check_wigner(config: ExperimentConfig, rng: np.random.Generator) -> List[Check]:
    n = config.verify.samples
    m = config.mass
    tol = config.verify.tolerance_for('composition')
    Lam = random_sl2c(rng, n)
    p = random_on_shell(rng, n, m, p_max=3.0 * m)
    checks = []
    for choice in BoostChoice:
        W = wigner_rotation(Lam, p, choice, m)
        checks.append(Check.at_most(f'wigner_unitary_{choice.value}', 'W(Lam, p) in SU(2)',
                                    unitarity_defect(W), tol, f"{n} samples"))
    R = random_su2(rng, n)
    checks.append(Check.at_most('wigner_of_rotation', 'W(R, p) = R for standard boosts',
                                _max_abs(wigner_rotation(R, p, BoostChoice.STANDARD, m) - R), tol))
    q = random_on_shell(rng, n, m, p_max=3.0 * m)
    k = np.broadcast_to([m, 0.0, 0.0, 0.0], q.shape)
    W = wigner_rotation(standard_boost(q, m), k, BoostChoice.STANDARD, m)
    checks.append(Check.at_most('wigner_standard_boost_at_rest', 'W(L0(q), k) = I',
                                _max_abs(W - IDENTITY2), tol))
    return checks


def check_bundle_metrics(config: ExperimentConfig, rng: np.random.Generator) -> List[Check]:
    n = config.verify.samples
    m = config.mass
    tol = config.verify.tolerance_for('pointwise')
    p = random_on_shell(rng, n, m, p_max=3.0 * m)
    v, w = _random_spinors(rng, n), _random_spinors(rng, n)
    x, y = BundlePoint(p, v, m=m), BundlePoint(p, w, m=m)
    checks = []
    for choice in BoostChoice:
        gap = metric_h(bundle_iso_L(x, choice), bundle_iso_L(y, choice)) - metric_g(x, y)
        checks.append(Check.at_most(f'bundle_isometry_{choice.value}', 'h(Lx, Ly) = g(x, y)',
                                    _max_abs(gap), tol, f"{n} samples"))
    hx = metric_h(BundlePoint(p, v, Picture.ALTERNATIVE, m), BundlePoint(p, v, Picture.ALTERNATIVE, m))
    checks.append(Check.at_most('h_positive', 'h(x, x) > 0', max(0.0, -float(np.min(hx.real))), 0.0))
    xa, ya = BundlePoint(p, v, Picture.ALTERNATIVE, m), BundlePoint(p, w, Picture.ALTERNATIVE, m)
    checks.append(Check.at_most('h_conjugate_symmetric', 'h(x, y) = conj h(y, x)',
                                _max_abs(metric_h(xa, ya) - np.conj(metric_h(ya, xa))), tol))
    return checks


def check_equivalence(config: ExperimentConfig, rng: np.random.Generator) -> List[Check]:
    m = config.mass
    packets = _random_packets(rng, config.verify.states, m)
    worst = {choice: 0.0 for choice in BoostChoice}
    for t in range(config.verify.transforms):
        phi = packets[t % len(packets)]
        grid = grid_for_state(phi, n_per_axis=8)
        Lam = random_sl2c(rng)
        a = rng.normal(size=4)
        for choice in BoostChoice:
            worst[choice] = max(worst[choice], equivalence_check(phi, Lam, a, grid, choice))

    norm_gap = 0.0
    inverse_gap = 0.0
    observer_gap = 0.0
    for phi in packets:
        grid = grid_for(phi, config.grid)
        norm_gap = max(norm_gap, abs(norm(alpha(phi), grid) - norm(phi, grid)))
        restored = np.einsum('nij,nj->ni', standard_boost(grid.nodes, m), evaluate(alpha(phi), grid.nodes))
        inverse_gap = max(inverse_gap, _max_abs(restored - evaluate(phi, grid.nodes)))
        nodes = random_on_shell(rng, POINTWISE_NODES, m, p_max=2.0 * m)
        for choice in BoostChoice:
            observer_gap = max(observer_gap, observer_residual(phi, nodes, choice))

    tol = config.verify.tolerance_for('equivalence')
    detail = f"{config.verify.transforms} random (Lam, a)"
    checks = [
        Check.at_most(f'equivalence_{choice.value}', 'alpha U\'(Lam, a) alpha^-1 = U(Lam, a)',
                      worst[choice], tol, detail)
        for choice in BoostChoice
    ]
    checks += [
        Check.at_most('alpha_unitary', '|alpha phi|_H = |phi|_H\'', norm_gap, tol),
        Check.at_most('alpha_inverse', 'L(p) [alpha phi](p) = phi(p)', inverse_gap,
                      config.verify.tolerance_for('pointwise')),
        Check.at_most('alpha_observer', '[alpha phi](p) = [U\'(L(p)^-1) phi](k)', observer_gap,
                      config.verify.tolerance_for('pointwise'), f"{POINTWISE_NODES} nodes per state"),
    ]
    return checks


def _h_pairing(phi: Wavepacket, chi: Wavepacket, nodes: np.ndarray) -> np.ndarray:
    """h(phi(p), chi(p)) at each node."""
    return np.einsum('ni,nij,nj->n', np.conj(evaluate(phi, nodes)), under_tilde(nodes) / phi.m,
                     evaluate(chi, nodes))


def check_transformation_law(config: ExperimentConfig, rng: np.random.Generator) -> List[Check]:
    m = config.mass
    tol = config.verify.tolerance_for('pointwise')
    packets = _random_packets(rng, max(2, config.verify.states), m)
    unitarity = phase = composition = 0.0
    for i in range(config.verify.transforms):
        phi, chi = packets[i % len(packets)], packets[(i + 1) % len(packets)]
        Lam, a = random_sl2c(rng), rng.normal(size=4)
        p = random_on_shell(rng, POINTWISE_NODES, m, p_max=2.0 * m)
        image = apply_lorentz(Lam, p)

        moved = _h_pairing(poincare_transform(phi, Lam, a), poincare_transform(chi, Lam, a), image)
        unitarity = max(unitarity, _max_abs(moved - _h_pairing(phi, chi, p)))

        shifted = poincare_transform(phi, IDENTITY2, a)
        phase = max(phase, _max_abs(np.abs(evaluate(shifted, p)) - np.abs(evaluate(phi, p))))

        Lam2, a2 = random_sl2c(rng), rng.normal(size=4)
        twice = poincare_transform(poincare_transform(phi, Lam, a), Lam2, a2)
        once = poincare_transform(phi, Lam2 @ Lam, a2 + apply_lorentz(Lam2, a))
        composition = max(composition, _max_abs(evaluate(twice, p) - evaluate(once, p)))

    return [
        Check.at_most('pointwise_unitarity', 'h([U\'phi](Lam p), [U\'chi](Lam p)) = h(phi(p), chi(p))',
                      unitarity, tol),
        Check.at_most('translation_phase', '|[U\'(I, a) phi](p)| = |phi(p)|', phase, tol),
        Check.at_most('representation', 'U\'(Lam2, a2) U\'(Lam1, a1) = U\'(Lam2 Lam1, a2 + Lam2 a1)',
                      composition, config.verify.tolerance_for('composition')),
    ]


def check_operator_identities(config: ExperimentConfig, rng: np.random.Generator) -> List[Check]:
    n = config.verify.samples
    m = config.mass
    tol = config.verify.tolerance_for('operator')
    p = random_on_shell(rng, n, m, p_max=3.0 * m)
    explicit = cross = 0.0
    for mu in range(4):
        reference = pl_operator(mu)(p)
        explicit = max(explicit, _max_abs(reference - pl_operator_explicit(mu)(p)))
        cross = max(cross, _max_abs(reference - pl_operator_cross(mu)(p)))

    closed = nw_spin_operator(m)(p)
    k = np.array([m, 0.0, 0.0, 0.0])
    at_rest = max(
        _max_abs(nw_spin_operator(m)(k) - 0.5 * PAULI[1:]),
        _max_abs(pl_operator(0)(k)),
        max(_max_abs(pl_operator(j)(k) - 0.5 * m * PAULI[j]) for j in (1, 2, 3)),
    )
    detail = f"{n} random on-shell momenta"
    return [
        Check.at_most('pl_operator_explicit', 'W^0 = -(p_ - p^0)/2, W = (tau p_ + p)/2', explicit, tol, detail),
        Check.at_most('pl_operator_cross', 'W = (p^0 tau - i p x tau)/2', cross, tol, detail),
        Check.at_most('nw_spin_conjugated', 'S_NW = sqrt(p~/m) (tau/2) sqrt(p_/m)',
                      _max_abs(closed - nw_spin_conjugated(p, m)), tol, detail),
        Check.at_most('nw_spin_from_pl', 'S_NW = (W - W^0 P/(m + P^0))/m',
                      _max_abs(closed - nw_spin_from_pl(p, m)), tol, detail),
        Check.at_most('operators_at_rest', 'W(k) = (0, m tau/2), S_NW(k) = tau/2', at_rest, tol),
    ]


def check_operator_hermiticity(config: ExperimentConfig, rng: np.random.Generator) -> List[Check]:
    m = config.mass
    packets = _random_packets(rng, 2, m, constant_only=True)
    phi, chi = packets
    grid = grid_for_state(phi, n_per_axis=16)
    operators = [pl_operator(mu) for mu in range(4)] + [nw_spin_operator(m)]
    worst = 0.0
    for op in operators:
        forward = expectation_operator(phi, op, grid, other=chi)
        backward = expectation_operator(chi, op, grid, other=phi)
        worst = max(worst, _max_abs(forward - np.conj(backward)))
    return [Check.at_most('operators_self_adjoint', '<phi, O chi>_H\' = conj <chi, O phi>_H\'',
                          worst, config.verify.tolerance_for('hermiticity'), 'W^mu and S_NW')]


def check_qubit_vectors(config: ExperimentConfig, rng: np.random.Generator) -> List[Check]:
    m = config.mass
    n = min(config.verify.samples, 2000)
    anchor_tol = config.verify.tolerance_for('anchor')
    k = np.array([m, 0.0, 0.0, 0.0])

    rest = qubit_pl_vector(k, [1.0, 0.0], m) - np.array([0.0, 0.0, 0.0, 0.5 * m])
    moving = qubit_pl_vector(PSTAR, [np.sqrt(2.0), 0.0], 1.0) - np.array([0.375, 0.0, 0.0, 0.625])
    nw_anchor = newton_wigner_classical(PSTAR, [0.75, 0.0, 0.0, 1.25], 1.0) - np.array([0.0, 0.0, 1.0])

    p = random_on_shell(rng, n, m, p_max=3.0 * m)
    chi = _random_spinors(rng, n)
    chi /= np.linalg.norm(chi, axis=-1, keepdims=True)
    lifted = np.einsum('nij,nj->ni', standard_boost(p, m), chi)
    w = qubit_pl_vector(p, lifted, m)
    s = newton_wigner_classical(p, w, m)
    deboosted = apply_lorentz(sl2c_inverse(standard_boost(p, m)), w)
    n_half = 0.5 * np.einsum('ni,jik,nk->nj', np.conj(chi), PAULI[1:], chi).real

    projector = 0.0
    for c in chi[:200]:
        direction = spin_direction(c)
        projector = max(projector, _max_abs(np.outer(c, np.conj(c)) - direction.projector()))

    tol = config.verify.tolerance_for('operator')
    orth = config.verify.tolerance_for('orthogonality')
    return [
        Check.at_most('qubit_pl_at_rest', 'w(k, |+>) = (0, 0, 0, m/2)', _max_abs(rest), anchor_tol),
        Check.at_most('qubit_pl_boosted', 'w(p*, L0(p*)|+>) = (3/8, 0, 0, 5/8)', _max_abs(moving), anchor_tol),
        Check.at_most('qubit_pl_orthogonal', '<p, w> = 0', _max_abs(minkowski_product(p, w)), orth),
        Check.at_most('qubit_pl_length', '<w, w> = -m^2/4',
                      _max_abs(minkowski_product(w, w) + 0.25 * m * m), orth),
        Check.at_most('nw_anchor', 's(p*, (3/4, 0, 0, 5/4)) = (0, 0, 1)', _max_abs(nw_anchor), anchor_tol),
        Check.at_most('nw_deboost', 'L0(p)^-1 w = (0, m s)',
                      max(_max_abs(deboosted[:, 1:] - m * s), _max_abs(deboosted[:, 0])), tol),
        Check.at_most('nw_of_qubit', 's(p, w(L0 chi)) = n(chi)/2', _max_abs(s - n_half), tol),
        Check.at_most('spin_direction_projector', 'chi chi^H = (tau.n + I)/2', projector, anchor_tol),
    ]


def check_classical_pl(config: ExperimentConfig, rng: np.random.Generator) -> List[Check]:
    m = config.mass
    n = min(config.verify.samples, 2000)
    tol = config.verify.tolerance_for('composition')
    p = random_on_shell(rng, n, m, p_max=3.0 * m)
    spins, boosts = rng.normal(size=(n, 3)), rng.normal(size=(n, 3))
    j = np.stack([angular_momentum_tensor(s, b) for s, b in zip(spins, boosts)])
    L = covering_map(random_sl2c(rng, n))

    w = pauli_lubansky_classical(p, j)
    moved = pauli_lubansky_classical(np.einsum('nij,nj->ni', L, p), transform_angular_momentum(L, j))
    k = np.broadcast_to([m, 0.0, 0.0, 0.0], p.shape)
    rest = pauli_lubansky_classical(k, j)
    return [
        Check.at_most('classical_pl_covariant', 'w(Lam p, Lam j) = Lam w(p, j)',
                      _max_abs(moved - np.einsum('nij,nj->ni', L, w)), tol, f"{n} samples"),
        Check.at_most('classical_pl_rest', 'w(k, j) = (0, m j)',
                      max(_max_abs(rest[:, 0]), _max_abs(rest[:, 1:] - m * spins)),
                      config.verify.tolerance_for('anchor')),
        Check.at_most('classical_pl_orthogonal', '<p, w> = 0',
                      _max_abs(minkowski_product(p, w)), config.verify.tolerance_for('orthogonality')),
    ]


def check_finite_differences(config: ExperimentConfig, rng: np.random.Generator) -> List[Check]:
    m = config.mass
    tol = config.verify.tolerance_for('finite_difference')
    phi = gaussian_packet(m * np.array([0.1, 0.2, 0.3]), m, SpinorRule.constant((1.0, 0.5j)), m=m)
    nodes = lift(m * np.array([
        [0.0, 0.0, 0.4],
        [0.3, 0.0, 0.0],
        [0.0, -0.5, 0.0],
        [0.2, -0.3, 0.4],
    ]), m)
    worst = 0.0
    for p in nodes:
        spinor = evaluate(phi, p)
        exact = np.stack([pl_operator(mu).apply(p, spinor) for mu in range(4)])
        worst = max(worst, _max_abs(fd_pauli_lubansky(phi, p) - exact))

    symmetric = gaussian_packet(m * np.array([0.0, 0.0, 0.3]), m, SpinorRule.constant(), m=m)
    p_axis = lift(m * np.array([0.0, 0.0, 0.5]), m)
    spin_half = _max_abs(generator_fd(symmetric, 'J3', p_axis) - 0.5 * evaluate(symmetric, p_axis))
    energy = _max_abs(generator_fd(phi, 'P0', nodes[0]) - nodes[0][0] * evaluate(phi, nodes[0]))
    return [
        Check.at_most('fd_pauli_lubansky', 'W^0 = P.J, W = P^0 J - P x K', worst, tol,
                      f"central differences, {len(nodes)} nodes"),
        Check.at_most('fd_spin_on_axis', 'J^3 phi = phi/2 on the axis of a |+> packet', spin_half, tol),
        Check.at_most('fd_energy', 'P^0 phi = p^0 phi', energy, config.verify.tolerance_for('pointwise')),
    ]


def _normalized_states(config: ExperimentConfig, rng: np.random.Generator) -> List[Tuple[str, Wavepacket]]:
    states = [(s.name, s.packet) for s in config.states]
    extra = _random_packets(rng, config.verify.states, config.mass, constant_only=True)
    states += [(f"random_{i}", packet) for i, packet in enumerate(extra)]
    return [(name, normalize(packet, grid_for(packet, config.grid))) for name, packet in states]


def check_expectations(config: ExperimentConfig, rng: np.random.Generator) -> List[Check]:
    theta_gap = direct_gap = nw_gap = pulled_gap = 0.0
    states = _normalized_states(config, rng)
    for name, phi in states:
        grid = grid_for(phi, config.grid)
        reduced = expectation_pl(phi, grid)
        theta_gap = max(theta_gap, _max_abs(four_vector_from_tilde(theta_matrix(phi, grid)) - reduced))
        direct_gap = max(direct_gap, _max_abs(expectation_pl(phi, grid, form='direct') - reduced))
        nw_gap = max(nw_gap, _max_abs(expectation_nw(phi, grid) - expectation_nw(phi, grid, form='operator')))
        psi = alpha(phi)
        pulled_gap = max(pulled_gap, _max_abs(pulled_back_matrix(psi, grid) - pl_reduced(phi, grid).matrix))

    constant = gaussian_packet((0.3, -0.2, 0.1), 0.5, picture=Picture.STANDARD, m=config.mass)
    grid = grid_for(constant, config.grid)
    rho = peres_rdm(normalize(constant, grid), grid)
    tol = config.verify.tolerance_for('expectation')
    detail = f"{len(states)} states"
    return [
        Check.at_most('theta_vs_expectation', 'four_vector(theta) = <W^mu>', theta_gap,
                      config.verify.tolerance_for('theta'), detail),
        Check.at_most('pl_expectation_forms', 'm <tau^mu/2> - <P^mu>/2 = <p_/m W^mu>', direct_gap, tol, detail),
        Check.at_most('nw_expectation_forms', '<alpha phi, tau/2 alpha phi> = <phi, S_NW phi>_H\'',
                      nw_gap, tol, detail),
        Check.at_most('pulled_back_sigma', 'avg of tilde(w) + tilde(p)/2 = m sigma(alpha^-1 psi)',
                      pulled_gap, tol, detail),
        Check.at_most('peres_constant_rule', 'rho = diag(1, 0) for chi = |+>',
                      _max_abs(rho.matrix - np.diag([1.0, 0.0])), tol),
    ]


def check_measure_invariance(config: ExperimentConfig, rng: np.random.Generator) -> List[Check]:
    phi = config.states[0].packet
    before = norm(phi, grid_for(phi, config.grid)) ** 2
    moves = [(t.to_sl2c(), t.a) for t in config.transformations] or [(boost((0.0, 0.0, 1.0), 0.5), (0.0,) * 4)]
    worst = 0.0
    for Lam, a in moves:
        moved = poincare_transform(phi, Lam, a)
        after = norm(moved, grid_for(moved, config.grid)) ** 2
        worst = max(worst, abs(after - before) / before)
    return [Check.at_most('measure_invariance', 'integral f(Lam^-1 p) d mu = integral f(p) d mu',
                          worst, config.verify.tolerance_for('measure'),
                          f"state '{config.states[0].name}', relative")]


def check_covariance(config: ExperimentConfig, rng: np.random.Generator) -> List[Check]:
    transforms = list(config.transformations)
    tol = config.verify.tolerance_for('covariance')
    worst = 0.0
    worst_rotation = 0.0
    converged = True
    rows = []
    for state in config.states:
        phi = normalize(state.packet, grid_for(state.packet, config.grid))
        grid_a = grid_for(phi, config.grid)
        for transform in transforms:
            Lam = transform.to_sl2c()
            grid_b = grid_for(poincare_transform(phi, Lam, transform.a), config.grid)
            coarse = covariance_residual(phi, Lam, transform.a, grid_a, grid_b)
            worst = max(worst, coarse)
            if unitarity_defect(Lam) <= ALGEBRA_TOL:
                worst_rotation = max(worst_rotation, coarse)
            if coarse > CONVERGENCE_FLOOR:
                fine = covariance_residual(phi, Lam, transform.a, refined(grid_a), refined(grid_b))
                if fine > coarse / 10.0:
                    converged = False
                    rows.append(f"{state.name}/{transform.label}: {coarse:.2e} -> {fine:.2e}")
    detail = f"{len(config.states)} states x {len(transforms)} transformations"
    return [
        Check.at_most('sigma_covariance', 'sigma_B = Lam sigma_A Lam^H', worst, tol, detail),
        Check.at_most('sigma_rotation_covariance', 'sigma_B = R sigma_A R^H for R in SU(2)',
                      worst_rotation, config.verify.tolerance_for('rotation')),
        Check.at_most('sigma_convergence', 'residual(2n) <= residual(n)/10', 0.0 if converged else 1.0,
                      0.0, '; '.join(rows) or 'all residuals at round-off or converging'),
    ]


def check_peres_witness(config: ExperimentConfig, rng: np.random.Generator) -> List[Check]:
    m = config.mass
    base = gaussian_packet(m * np.array([0.5, 0.0, 0.0]), 0.5 * m, picture=Picture.STANDARD, m=m)
    psi = normalize(base, grid_for(base, config.grid))
    grid_a = grid_for(psi, config.grid)
    threshold = config.verify.tolerance_for('witness_shift')
    witness_options = {
        'spread_floor': config.verify.tolerance_for('spread_floor'),
        'shift_threshold': threshold,
        'tolerance': config.verify.tolerance_for('covariance'),
        'rotation_tolerance': config.verify.tolerance_for('rotation'),
    }

    z_boost = boost((0.0, 0.0, 1.0), 1.0)
    grid_b = grid_for(poincare_transform(psi, z_boost), config.grid)
    witness = noncovariance_witness(psi, z_boost, grid_a, grid_b, **witness_options)

    phi = normalize(gaussian_packet(psi.center, psi.sigma, m=m), grid_a)
    sigma_residual = covariance_residual(phi, z_boost, np.zeros(4), grid_a,
                                         grid_for(poincare_transform(phi, z_boost), config.grid))

    turn = rotation((1.0, 1.0, 1.0), 0.9)
    rotated = noncovariance_witness(psi, turn, grid_a, grid_for(poincare_transform(psi, turn), config.grid),
                                    **witness_options)
    return [
        Check.at_least('peres_boost_shift', 'eig(rho_B) != eig(rho_A) under a boost', witness.shift,
                       max(threshold, witness.budget),
                       f"sigma/m = {witness.sigma_over_m:g}, budget {witness.budget:.2e}"),
        Check.at_most('peres_contrast_sigma', 'sigma_B = Lam sigma_A Lam^H in the same setting',
                      sigma_residual, config.verify.tolerance_for('covariance')),
        Check.at_most('peres_rotation_shift', 'eig(rho_B) = eig(rho_A) under a rotation',
                      rotated.shift, rotated.tolerance, f"budget {rotated.budget:.2e}"),
    ]


SUITES: List[Tuple[str, Callable[[ExperimentConfig, np.random.Generator], List[Check]]]] = [
    ("covering map", check_covering_map),
    ("tilde maps", check_tilde),
    ("square roots and boosts", check_square_roots),
    ("Wigner rotations", check_wigner),
    ("bundle metrics", check_bundle_metrics),
    ("picture equivalence", check_equivalence),
    ("transformation law", check_transformation_law),
    ("operator identities", check_operator_identities),
    ("operator hermiticity", check_operator_hermiticity),
    ("qubit spin vectors", check_qubit_vectors),
    ("classical Pauli-Lubansky vector", check_classical_pl),
    ("finite-difference generators", check_finite_differences),
    ("expectation values", check_expectations),
    ("measure invariance", check_measure_invariance),
    ("reduced-matrix covariance", check_covariance),
    ("Peres non-covariance", check_peres_witness),
]


def run(config: ExperimentConfig, logger) -> Tuple[dict, int]:
    """
    Run every suite; each draws from its own generator seeded by (seed, index)
    so results do not depend on suite order.

    Returns:
        (report, exit code): 0 if every check passed, 1 otherwise
    """
    checks: List[Check] = []
    for index, (title, suite) in enumerate(SUITES):
        logger.info(f"Running suite: {title}")
        rng = np.random.default_rng([config.seed, index])
        try:
            suite_checks = suite(config, rng)
        except SpinBundleError as e:
            logger.error(f"Suite '{title}' raised: {e}")
            logger.error(traceback.format_exc())
            suite_checks = [Check(title.replace(' ', '_'), 'suite raised an error',
                                  float('inf'), 0.0, False, str(e))]
        for check in suite_checks:
            status = 'PASS' if check.passed else 'FAIL'
            logger.info(f"  {status} {check.name}: {check.residual:.3e} (tolerance {check.tolerance:.1e})")
        checks.extend(suite_checks)

    log_run_summary(logger, checks)
    failed = sum(1 for c in checks if not c.passed)
    report = {
        'command': 'verify',
        'seed': config.seed,
        'config': config.to_dict(),
        'checks': [c.to_dict() for c in checks],
        'summary': {'total': len(checks), 'passed': len(checks) - failed, 'failed': failed},
        'status': 'pass' if failed == 0 else 'fail',
    }
    return report, 0 if failed == 0 else 1


def main():
    """Standalone verification run."""
    config = parse_pipeline_args('verify_pipeline.py')
    output_dir = Path(config.output).parent if config.output else None
    logger = setup_logging(output_dir, 'SpinBundle.Verify')
    log_pipeline_start(logger, "Verification Suite", config)
    report, code = run(config, logger)
    write_report(report, config.output, 'json', logger=logger)
    return code


if __name__ == "__main__":
    sys.exit(main())
