#!/usr/bin/env python3
# Copyright (c) 2025 Denis Darkin
# SPDX-License-Identifier: MIT
"""
Shared utilities for the spin-bundle command pipelines.
Common functions used by the verify, covariance and expectation pipelines.
"""

import csv
import io
import json
import logging
import sys
from dataclasses import dataclass
from datetime import datetime
from pathlib import Path
from typing import Dict, Iterable, List, Optional

import numpy as np

from bundle.states import Wavepacket, grid_for_state
from config import ExperimentConfig, GridConfig, apply_overrides, load_config
from errors import ConfigError
from lorentz.mass_shell import MomentumGrid, build_grid


def setup_logging(output_dir: Optional[Path], logger_name: str,
                  debug: bool = False) -> logging.Logger:
    """
    Set up logging configuration with UTF-8 encoding.

    Console messages go to stderr so stdout stays free for the report.

    Args:
        output_dir: Base output directory for logs (None: console only)
        logger_name: Name for the logger (e.g., 'SpinBundle.Verify')
        debug: Log at DEBUG instead of INFO

    Returns:
        Configured logger instance
    """
    handlers = [logging.StreamHandler(sys.stderr)]
    if output_dir is not None:
        log_dir = Path(output_dir) / 'logs'
        log_dir.mkdir(parents=True, exist_ok=True)

        timestamp = datetime.now().strftime('%Y%m%d_%H%M%S')
        log_file = log_dir / f'{logger_name.lower().replace(".", "_")}_{timestamp}.log'
        handlers.insert(0, logging.FileHandler(log_file, encoding='utf-8'))

    logging.basicConfig(
        level=logging.DEBUG if debug else logging.INFO,
        format='%(asctime)s - %(name)s - %(levelname)s - %(message)s',
        handlers=handlers,
        force=True,
    )

    return logging.getLogger(logger_name)


def parse_pipeline_args(script_name: str) -> ExperimentConfig:
    """
    Parse command line arguments for standalone pipeline scripts.

    Args:
        script_name: Name of the script for usage message

    Returns:
        Experiment configuration (defaults, optional JSON file, optional output path)

    Raises:
        SystemExit: If arguments are invalid
    """
    if len(sys.argv) > 3 or any(arg in ('-h', '--help') for arg in sys.argv[1:]):
        print(f"Usage: python {script_name} [config.json] [output]")
        print(f"Example: python {script_name} configs/default.json results/{Path(script_name).stem}.json")
        sys.exit(1)

    config_path = Path(sys.argv[1]) if len(sys.argv) > 1 else None
    output = sys.argv[2] if len(sys.argv) > 2 else None
    try:
        return apply_overrides(load_config(config_path), output=output)
    except ConfigError as e:
        print(f"Configuration error: {e}", file=sys.stderr)
        sys.exit(2)


@dataclass(frozen=True)
class Check:
    """One verification row: a residual against its tolerance."""
    name: str
    equation: str
    residual: float
    tolerance: float
    passed: bool
    detail: str = ''

    @classmethod
    def at_most(cls, name: str, equation: str, residual: float, tolerance: float,
                detail: str = '') -> 'Check':
        residual = float(residual)
        return cls(name, equation, residual, tolerance, residual <= tolerance, detail)

    @classmethod
    def at_least(cls, name: str, equation: str, value: float, threshold: float,
                 detail: str = '') -> 'Check':
        value = float(value)
        return cls(name, equation, value, threshold, value > threshold, detail)

    def to_dict(self) -> Dict:
        return {
            'name': self.name,
            'equation': self.equation,
            # None when a suite raised before producing a residual
            'residual': self.residual if np.isfinite(self.residual) else None,
            'tolerance': self.tolerance,
            'status': 'pass' if self.passed else 'fail',
            'detail': self.detail,
        }


def grid_for(packet: Wavepacket, grid_config: GridConfig,
             n_per_axis: Optional[int] = None) -> MomentumGrid:
    """
    Fixed origin-centred cube when p_max is configured, else a box that
    follows the packet's (possibly boosted) support.
    """
    n = grid_config.n_per_axis if n_per_axis is None else n_per_axis
    if grid_config.p_max is not None:
        return build_grid(packet.m, grid_config.p_max, n, grid_config.rule)
    return grid_for_state(packet, n, grid_config.rule, grid_config.sigma_multiple)


def log_pipeline_start(logger: logging.Logger, pipeline_name: str,
                       config: ExperimentConfig):
    """
    Log the start of a pipeline execution.

    Args:
        logger: Logger instance
        pipeline_name: Name of the pipeline (e.g., "Verification Suite")
        config: Experiment configuration in effect
    """
    logger.info(f"SpinBundle - {pipeline_name}")
    logger.info("=" * 70)
    logger.info(f"Mass: {config.mass:g}, seed: {config.seed}")
    p_max = 'auto' if config.grid.p_max is None else f"{config.grid.p_max:g}"
    logger.info(f"Grid: {config.grid.n_per_axis}^3 {config.grid.rule}, P_max {p_max}")
    logger.info(f"States: {len(config.states)}, transformations: {len(config.transformations)}")
    logger.info(f"Output: {config.output or 'stdout'}")


def log_run_summary(logger: logging.Logger, checks: List[Check]):
    """
    Log the final pass/fail summary, listing failing checks.

    Args:
        logger: Logger instance
        checks: All checks of the run
    """
    failed = [c for c in checks if not c.passed]
    logger.info("=" * 70)
    logger.info(f"Run complete: {len(checks) - len(failed)}/{len(checks)} checks passed")
    for check in failed:
        logger.warning(f"FAILED {check.name} [{check.equation}]: "
                       f"{check.residual:.3e} vs tolerance {check.tolerance:.1e}")


def complex_pairs(values) -> list:
    """Nested lists of [re, im] pairs for any complex array."""
    values = np.asarray(values, dtype=np.complex128)
    if values.ndim == 0:
        return [float(values.real), float(values.imag)]
    return [complex_pairs(v) for v in values]


def _rows_to_csv(rows: Iterable[Dict]) -> str:
    rows = list(rows)
    if not rows:
        return ''
    buffer = io.StringIO()
    writer = csv.DictWriter(buffer, fieldnames=list(rows[0].keys()),
                            extrasaction='ignore', lineterminator='\n')
    writer.writeheader()
    for row in rows:
        writer.writerow({k: json.dumps(v) if isinstance(v, (list, dict)) else v
                         for k, v in row.items()})
    return buffer.getvalue()


def render_report(report: Dict, fmt: str = 'json', rows_key: str = 'rows') -> str:
    """Deterministic text for a report: JSON, or CSV of report[rows_key]."""
    if fmt == 'csv':
        return _rows_to_csv(report.get(rows_key, []))
    return json.dumps(report, indent=2, ensure_ascii=False) + '\n'


def write_report(report: Dict, output: Optional[str], fmt: str = 'json',
                 rows_key: str = 'rows', logger: Optional[logging.Logger] = None):
    """
    Write the report to output (a file path) or stdout.

    Args:
        report: JSON-ready report dictionary
        output: File path, or None for stdout
        fmt: 'json' or 'csv'
        rows_key: Table inside the report used for CSV output
        logger: Logger instance for reporting
    """
    text = render_report(report, fmt, rows_key)
    if output is None:
        sys.stdout.write(text)
        sys.stdout.flush()
        return
    path = Path(output)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, 'w', encoding='utf-8', newline='') as f:
        f.write(text)
    if logger:
        logger.info(f"Report written to {path}")
