#!/usr/bin/env python3
# Copyright (c) 2025 Denis Darkin
# SPDX-License-Identifier: MIT
"""
SpinBundle - Covariance Table
For every configured state and transformation, compare the Pauli-Lubansky
reduced matrix (covariant) with the Peres spin reduced density matrix
(spectrum shifts under boosts).
"""

from dataclasses import replace
from pathlib import Path
import sys
from typing import Dict, List, Tuple

import numpy as np

# Add src to path
sys.path.insert(0, str(Path(__file__).parent))

from pipeline_base import (
    grid_for,
    log_pipeline_start,
    parse_pipeline_args,
    setup_logging,
    write_report,
)
from config import ExperimentConfig, TransformConfig
from errors import ConfigError
from bundle.states import Wavepacket, alpha, normalize, poincare_transform
from bundle.reduced import covariance_report, noncovariance_witness


def covariance_row(name: str, packet: Wavepacket, transform: TransformConfig,
                   config: ExperimentConfig) -> Dict:
    """
    One table row: sigma residual against Lam sigma Lam^H and the Peres
    spectral shift for the same packet and transformation.

    Raises:
        GridCoverageError: if a grid misses part of a state's support
    """
    grid_a = grid_for(packet, config.grid)
    phi = normalize(packet, grid_a)
    Lam = transform.to_sl2c()
    grid_b = grid_for(poincare_transform(phi, Lam, transform.a), config.grid)
    tolerance = config.verify.tolerance_for('covariance')
    rotation_tolerance = config.verify.tolerance_for('rotation')
    sigma = covariance_report(phi, Lam, transform.a, grid_a, grid_b, tolerance, rotation_tolerance)

    # translations only contribute a phase, so the witness uses Lam alone
    psi = alpha(phi)
    witness = noncovariance_witness(psi, Lam, grid_for(psi, config.grid),
                                    grid_for(poincare_transform(psi, Lam), config.grid),
                                    spread_floor=config.verify.tolerance_for('spread_floor'),
                                    shift_threshold=config.verify.tolerance_for('witness_shift'),
                                    tolerance=tolerance, rotation_tolerance=rotation_tolerance)

    return {
        'state': name,
        'sigma': phi.sigma,
        'sigma_over_m': witness.sigma_over_m,
        'transformation': transform.label,
        'sigma_equation': sigma.equation,
        'sigma_residual': sigma.residual,
        'sigma_budget': sigma.budget,
        'sigma_tolerance': sigma.tolerance,
        'sigma_verdict': sigma.verdict,
        'sigma_matrix': sigma.to_dict()['matrix'],
        'peres_equation': witness.to_dict()['equation'],
        'peres_eig_a': [float(e) for e in witness.eig_a],
        'peres_eig_b': [float(e) for e in witness.eig_b],
        'peres_shift': witness.shift,
        'peres_budget': witness.budget,
        'peres_threshold': witness.threshold,
        'peres_verdict': witness.verdict,
        'warnings': list(witness.warnings),
    }


def _workload(config: ExperimentConfig) -> List[Tuple[str, Wavepacket]]:
    """Configured states, then the first state at each new sweep width."""
    work = [(s.name, s.packet) for s in config.states]
    if config.covariance.sigma_sweep and config.states:
        first = config.states[0]
        widths = [first.packet.sigma]
        for width in config.covariance.sigma_sweep:
            if np.any(np.isclose(width, widths, rtol=1e-12, atol=0.0)):
                continue
            widths.append(width)
            work.append((f"{first.name}@sigma={width:g}", replace(first.packet, sigma=width)))
    return work


def run(config: ExperimentConfig, logger) -> Tuple[dict, int]:
    """
    Returns:
        (report, exit code): 1 if any sigma row is not covariant within tolerance

    Raises:
        ConfigError: if no transformation is configured
    """
    if not config.transformations:
        raise ConfigError("covariance needs at least one entry in 'transformations'")

    rows = []
    for name, packet in _workload(config):
        logger.info(f"State: {name} (sigma {packet.sigma:g})")
        for transform in config.transformations:
            row = covariance_row(name, packet, transform, config)
            logger.info(f"  {transform.label}: sigma residual {row['sigma_residual']:.3e} "
                        f"({row['sigma_verdict']}), Peres shift {row['peres_shift']:.3e} "
                        f"({row['peres_verdict']})")
            rows.append(row)

    failed = [r for r in rows if r['sigma_verdict'] != 'covariant']
    logger.info("=" * 70)
    logger.info(f"Covariance table complete: {len(rows) - len(failed)}/{len(rows)} sigma rows covariant")
    for row in failed:
        logger.warning(f"{row['sigma_verdict'].upper()} sigma for {row['state']} under {row['transformation']}: "
                       f"{row['sigma_residual']:.3e} > tolerance {row['sigma_tolerance']:.1e} "
                       f"(budget {row['sigma_budget']:.3e})")

    report = {
        'command': 'covariance',
        'seed': config.seed,
        'config': config.to_dict(),
        'rows': rows,
        'summary': {'total': len(rows), 'sigma_covariant': len(rows) - len(failed),
                    'peres_non_covariant': sum(1 for r in rows if r['peres_verdict'] == 'non-covariant')},
        'status': 'pass' if not failed else 'fail',
    }
    return report, 0 if not failed else 1


def main():
    """Standalone covariance table."""
    config = parse_pipeline_args('covariance_pipeline.py')
    output_dir = Path(config.output).parent if config.output else None
    logger = setup_logging(output_dir, 'SpinBundle.Covariance')
    log_pipeline_start(logger, "Covariance Table", config)
    try:
        report, code = run(config, logger)
    except ConfigError as e:
        logger.error(f"Configuration error: {e}")
        return 2
    write_report(report, config.output, config.format, logger=logger)
    return code


if __name__ == "__main__":
    sys.exit(main())
