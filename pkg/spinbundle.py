#!/usr/bin/env python3
# Copyright (c) 2025 Denis Darkin
# SPDX-License-Identifier: MIT
"""
SpinBundle - Lorentz covariance numerics for massive spin-1/2 particles

Usage:
    python spinbundle.py {verify,covariance,expectation} [options]

Examples:
    python spinbundle.py verify
    python spinbundle.py verify --seed 7 --out results/verify.json
    python spinbundle.py covariance --config configs/default.json --format csv --out results/cov.csv
    python spinbundle.py expectation --grid-n 48 --pmax 6

Why SpinBundle?
    - Two bundle pictures of a spin-1/2 particle with an explicit unitary map between them
    - Pauli-Lubansky reduced matrix that transforms covariantly
    - Peres spin density matrix whose spectrum shifts under boosts, side by side

Requirements:
    - Python 3.8+
    - numpy, scipy
"""

import sys
import argparse
import traceback
from pathlib import Path

# Add src to path
sys.path.insert(0, str(Path(__file__).parent / 'src'))

from pipeline_base import log_pipeline_start, setup_logging, write_report
from config import OUTPUT_FORMATS, apply_overrides, load_config
from errors import ConfigError
import covariance_pipeline
import expectation_pipeline
import verify_pipeline

COMMANDS = {
    'verify': (verify_pipeline, "Verification Suite", 'SpinBundle.Verify'),
    'covariance': (covariance_pipeline, "Covariance Table", 'SpinBundle.Covariance'),
    'expectation': (expectation_pipeline, "Expectation Values", 'SpinBundle.Expectation'),
}

# Rows of these reports are tables; the others only render as JSON
CSV_ROWS = {'covariance': 'rows', 'verify': 'checks'}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog='spinbundle',
        description="SpinBundle - Lorentz covariance numerics for massive spin-1/2 particles",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Examples:
    python spinbundle.py verify
    python spinbundle.py covariance --format csv --out results/cov.csv
    python spinbundle.py expectation --config configs/default.json

Exit codes:
    0  all checks within budget
    1  at least one check failed
    2  configuration or runtime error
        """
    )

    parser.add_argument(
        'command',
        choices=sorted(COMMANDS),
        help='verify: identity catalogue; covariance: sigma vs Peres table; '
             'expectation: <W>, <S_NW>, sigma, theta per state'
    )

    parser.add_argument(
        '--config',
        type=Path,
        default=None,
        help='JSON configuration file (default: built-in configuration)'
    )

    parser.add_argument(
        '--out',
        default=None,
        help='Report path (default: stdout); logs go to <dir of path>/logs'
    )

    parser.add_argument(
        '--seed',
        type=int,
        default=None,
        help='Random seed for the verification suites'
    )

    parser.add_argument(
        '--grid-n',
        type=int,
        default=None,
        help='Quadrature points per momentum axis'
    )

    parser.add_argument(
        '--pmax',
        type=float,
        default=None,
        help='Half-width of a fixed origin-centred momentum box (default: follow each state)'
    )

    parser.add_argument(
        '--spread-floor',
        type=float,
        default=None,
        help='sigma/m below which the Peres witness warns that it cannot resolve mixing'
    )

    parser.add_argument(
        '--format',
        choices=OUTPUT_FORMATS,
        default=None,
        help='Report format (csv applies to the covariance and verify tables)'
    )

    parser.add_argument(
        '--debug',
        action='store_true',
        help='Log at DEBUG level'
    )

    return parser


def main(argv=None) -> int:
    """Main entry point."""
    args = build_parser().parse_args(argv)
    module, title, logger_name = COMMANDS[args.command]

    output_dir = Path(args.out).parent if args.out else None
    logger = setup_logging(output_dir, logger_name, debug=args.debug)

    try:
        config = apply_overrides(load_config(args.config), seed=args.seed, grid_n=args.grid_n,
                                 p_max=args.pmax, output=args.out, fmt=args.format,
                                 spread_floor=args.spread_floor)
        log_pipeline_start(logger, title, config)
        report, code = module.run(config, logger)
    except ConfigError as e:
        logger.error(f"Configuration error: {e}")
        return 2
    except Exception as e:
        logger.error(f"{args.command} failed: {e}")
        logger.error(traceback.format_exc())
        return 2

    fmt = config.format if args.command in CSV_ROWS else 'json'
    write_report(report, config.output, fmt, rows_key=CSV_ROWS.get(args.command, 'rows'), logger=logger)
    return code


if __name__ == '__main__':
    sys.exit(main())
