#!/usr/bin/env python3
# Copyright (c) 2025 Denis Darkin
# SPDX-License-Identifier: MIT
"""
SpinBundle - Expectation Values
Report <W^mu>, <S_NW>, <P^mu>, sigma and theta for each configured state,
the theta cross-check, and the four-vector law of <W^mu> under each
configured transformation.
"""

from pathlib import Path
import sys
from typing import Dict, Tuple

import numpy as np

# Add src to path
sys.path.insert(0, str(Path(__file__).parent))

from pipeline_base import (
    complex_pairs,
    grid_for,
    log_pipeline_start,
    parse_pipeline_args,
    setup_logging,
    write_report,
)
from config import ExperimentConfig, TransformConfig
from errors import ConfigError
from lorentz.mass_shell import refined
from lorentz.spacetime import four_vector_from_tilde
from lorentz.spin_group import covering_map
from bundle.states import Wavepacket, normalize, poincare_transform
from bundle.observables import expectation_momentum, expectation_nw, expectation_pl
from bundle.reduced import (
    check_coverage,
    covariance_tolerance,
    covariance_verdict,
    pl_reduced,
    refinement_budget,
    theta_matrix,
)


def _floats(values) -> list:
    return [float(v) for v in np.asarray(values).reshape(-1)]


def transformed_expectation(phi: Wavepacket, transform: TransformConfig,
                            config: ExperimentConfig) -> Dict:
    """<W^mu> of U'(Lam, a) phi against kappa(Lam) <W^mu>_phi."""
    Lam = transform.to_sl2c()
    moved = poincare_transform(phi, Lam, transform.a)
    grid_a = grid_for(phi, config.grid)
    grid_b = grid_for(moved, config.grid)
    check_coverage(moved, grid_b, 'transformed state')

    def both_sides(ga, gb):
        expected = covering_map(Lam) @ expectation_pl(phi, ga)
        return expectation_pl(moved, gb), expected

    w_moved, expected = both_sides(grid_a, grid_b)
    fine_moved, fine_expected = both_sides(refined(grid_a), refined(grid_b))
    value = float(np.max(np.abs(w_moved - expected)))
    budget = refinement_budget(value, np.max(np.abs(fine_moved - fine_expected)))
    tolerance = covariance_tolerance(Lam, config.verify.tolerance_for('covariance'),
                                     config.verify.tolerance_for('rotation'))
    return {
        'transformation': transform.label,
        'equation': '<W^mu>_(U\'phi) = Lam^mu_nu <W^nu>_phi',
        'pauli_lubansky': _floats(w_moved),
        'expected': _floats(expected),
        'residual': value,
        'budget': budget,
        'tolerance': tolerance,
        'verdict': covariance_verdict(value, budget, tolerance),
    }


def state_record(name: str, packet: Wavepacket, config: ExperimentConfig) -> Dict:
    """Expectation values of one normalized state in H'."""
    grid = grid_for(packet, config.grid)
    phi = normalize(packet, grid)
    check_coverage(phi, grid, name)

    w = expectation_pl(phi, grid)
    sigma = pl_reduced(phi, grid)
    theta = theta_matrix(phi, grid)
    theta_vector = four_vector_from_tilde(theta, tol=config.verify.tolerance_for('theta'))
    theta_residual = float(np.max(np.abs(theta_vector - w)))

    return {
        'state': name,
        'descriptor': phi.to_dict(),
        'grid': grid.describe(),
        'momentum': _floats(expectation_momentum(phi, grid)),
        'pauli_lubansky': _floats(w),
        'pauli_lubansky_direct': _floats(expectation_pl(phi, grid, form='direct')),
        'newton_wigner': _floats(expectation_nw(phi, grid)),
        'sigma': sigma.to_dict(),
        'theta': complex_pairs(theta),
        'theta_four_vector': _floats(theta_vector),
        'theta_check': {
            'equation': 'four_vector(m sigma - tilde(<P>)/2) = <W^mu>',
            'residual': theta_residual,
            'tolerance': config.verify.tolerance_for('theta'),
            'status': 'pass' if theta_residual <= config.verify.tolerance_for('theta') else 'fail',
        },
        'transformed': [transformed_expectation(phi, t, config) for t in config.transformations],
    }


def run(config: ExperimentConfig, logger) -> Tuple[dict, int]:
    """
    Returns:
        (report, exit code): 1 if a theta cross-check or a four-vector law fails

    Raises:
        ConfigError: if no state is configured
    """
    if not config.states:
        raise ConfigError("expectation needs at least one entry in 'states'")

    records = []
    failures = 0
    for state in config.states:
        logger.info(f"State: {state.name}")
        record = state_record(state.name, state.packet, config)
        w = ', '.join(f"{c:.6f}" for c in record['pauli_lubansky'])
        s = ', '.join(f"{c:.6f}" for c in record['newton_wigner'])
        logger.info(f"  <W> = ({w}), <S_NW> = ({s})")
        logger.info(f"  theta cross-check residual {record['theta_check']['residual']:.3e}")
        failures += record['theta_check']['status'] != 'pass'
        for entry in record['transformed']:
            logger.debug(f"  {entry['transformation']}: residual {entry['residual']:.3e}")
            if entry['verdict'] != 'covariant':
                logger.warning(f"  <W^mu> of {state.name} under {entry['transformation']} misses the "
                               f"four-vector law: {entry['residual']:.3e} > tolerance {entry['tolerance']:.1e} "
                               f"({entry['verdict']}, budget {entry['budget']:.3e})")
                failures += 1
        records.append(record)

    logger.info("=" * 70)
    logger.info(f"Expectation values complete: {len(records)} states, {failures} failures")
    report = {
        'command': 'expectation',
        'seed': config.seed,
        'config': config.to_dict(),
        'states': records,
        'status': 'pass' if failures == 0 else 'fail',
    }
    return report, 0 if failures == 0 else 1


def main():
    """Standalone expectation report."""
    config = parse_pipeline_args('expectation_pipeline.py')
    output_dir = Path(config.output).parent if config.output else None
    logger = setup_logging(output_dir, 'SpinBundle.Expectation')
    log_pipeline_start(logger, "Expectation Values", config)
    try:
        report, code = run(config, logger)
    except ConfigError as e:
        logger.error(f"Configuration error: {e}")
        return 2
    write_report(report, config.output, 'json', logger=logger)
    return code


if __name__ == "__main__":
    sys.exit(main())
