#!/usr/bin/env python3
# Copyright (c) 2025 Denis Darkin
# SPDX-License-Identifier: MIT
"""
Experiment configuration: one JSON file per run.

Layering is built-in defaults <- config file <- command-line flags. Every
field is validated on load; failures raise ConfigError naming the field.
"""

import json
import logging
from dataclasses import asdict, dataclass, field, replace
from pathlib import Path
from typing import Any, Dict, Optional, Tuple

import numpy as np

from errors import ConfigError, SpinBundleError
from bundle.states import Picture, Wavepacket
from lorentz.mass_shell import DEFAULT_POINTS_PER_AXIS, QUADRATURE_RULES
from lorentz.spin_group import SL2C, boost, rotation

logger = logging.getLogger('SpinBundle.Config')

OUTPUT_FORMATS = ('json', 'csv')

DEFAULT_TOLERANCES = {
    'algebra': 1e-12,
    'composition': 1e-11,
    'anchor': 1e-13,
    'equivalence': 1e-10,
    'pointwise': 1e-12,
    'operator': 1e-11,
    'finite_difference': 1e-7,
    'expectation': 1e-10,
    'orthogonality': 1e-10,
    'hermiticity': 1e-9,
    'theta': 1e-9,
    'measure': 1e-6,
    'covariance': 1e-5,
    'rotation': 1e-6,
    'witness_shift': 1e-3,
    'spread_floor': 1e-3,
}


@dataclass(frozen=True)
class GridConfig:
    """p_max None sizes each grid from its state's support."""
    p_max: Optional[float] = None
    n_per_axis: int = DEFAULT_POINTS_PER_AXIS
    rule: str = 'gauss-legendre'
    sigma_multiple: float = 8.0


@dataclass(frozen=True)
class StateConfig:
    name: str
    packet: Wavepacket

    def to_dict(self) -> Dict:
        return {'name': self.name, **self.packet.to_dict()}


@dataclass(frozen=True)
class TransformConfig:
    """A rotation (angle) or boost (rapidity) about a unit axis, then a translation a."""
    type: str
    axis: Tuple[float, float, float]
    amount: float
    a: Tuple[float, float, float, float] = (0.0, 0.0, 0.0, 0.0)

    @property
    def label(self) -> str:
        axis = ','.join(f"{c:g}" for c in self.axis)
        return f"{self.type}[{axis}]({self.amount:g})"

    def to_sl2c(self) -> SL2C:
        if self.type == 'rotation':
            return rotation(self.axis, self.amount)
        return boost(self.axis, self.amount)

    def to_dict(self) -> Dict:
        return {'type': self.type, 'axis': list(self.axis),
                'angle_or_rapidity': self.amount, 'a': list(self.a)}


@dataclass(frozen=True)
class VerifyConfig:
    samples: int = 10000
    transforms: int = 20
    states: int = 10
    tolerance: Optional[float] = None
    tolerances: Dict[str, float] = field(default_factory=dict)

    def tolerance_for(self, key: str) -> float:
        """Global override first, then per-check value, then the default."""
        if self.tolerance is not None:
            return self.tolerance
        return self.tolerances.get(key, DEFAULT_TOLERANCES[key])


@dataclass(frozen=True)
class CovarianceConfig:
    sigma_sweep: Tuple[float, ...] = ()


@dataclass(frozen=True)
class ExperimentConfig:
    mass: float = 1.0
    grid: GridConfig = field(default_factory=GridConfig)
    states: Tuple[StateConfig, ...] = ()
    transformations: Tuple[TransformConfig, ...] = ()
    verify: VerifyConfig = field(default_factory=VerifyConfig)
    covariance: CovarianceConfig = field(default_factory=CovarianceConfig)
    output: Optional[str] = None
    format: str = 'json'
    seed: int = 20240531

    def to_dict(self) -> Dict:
        return {
            'mass': self.mass,
            'grid': asdict(self.grid),
            'states': [s.to_dict() for s in self.states],
            'transformations': [t.to_dict() for t in self.transformations],
            'verify': {
                'samples': self.verify.samples,
                'transforms': self.verify.transforms,
                'states': self.verify.states,
                'tolerance': self.verify.tolerance,
                'tolerances': dict(sorted(self.verify.tolerances.items())),
            },
            'covariance': {'sigma_sweep': list(self.covariance.sigma_sweep)},
            'output': self.output,
            'format': self.format,
            'seed': self.seed,
        }


DEFAULT_CONFIG: Dict[str, Any] = {
    'mass': 1.0,
    'grid': {'p_max': None, 'n_per_axis': DEFAULT_POINTS_PER_AXIS, 'rule': 'gauss-legendre', 'sigma_multiple': 8.0},
    'states': [
        {'name': 'rest_up', 'center': [0.0, 0.0, 0.0], 'sigma': 0.5,
         'spinor_rule': {'kind': 'constant', 'spinor': [[1.0, 0.0], [0.0, 0.0]]}},
        {'name': 'transverse_up', 'center': [0.5, 0.0, 0.0], 'sigma': 0.5,
         'spinor_rule': {'kind': 'constant', 'spinor': [[1.0, 0.0], [0.0, 0.0]]}},
        {'name': 'moving_helicity', 'center': [0.0, 0.3, 2.2], 'sigma': 0.35,
         'spinor_rule': {'kind': 'helicity', 'spinor': [[1.0, 0.0], [0.0, 0.0]]}},
    ],
    'transformations': [
        {'type': 'rotation', 'axis': [0.0, 0.0, 1.0], 'angle_or_rapidity': 0.7,
         'a': [0.0, 0.0, 0.0, 0.0]},
        {'type': 'rotation', 'axis': [1.0, 1.0, 0.0], 'angle_or_rapidity': 1.3,
         'a': [0.5, 0.1, 0.0, -0.2]},
        {'type': 'boost', 'axis': [0.0, 0.0, 1.0], 'angle_or_rapidity': 0.5,
         'a': [0.0, 0.0, 0.0, 0.0]},
        {'type': 'boost', 'axis': [0.0, 0.0, 1.0], 'angle_or_rapidity': 1.0,
         'a': [0.0, 0.0, 0.0, 0.0]},
        {'type': 'boost', 'axis': [1.0, 0.0, 0.0], 'angle_or_rapidity': 1.0,
         'a': [0.3, 0.0, 0.2, 0.0]},
    ],
    'verify': {'samples': 10000, 'transforms': 20, 'states': 10,
               'tolerance': None, 'tolerances': {}},
    'covariance': {'sigma_sweep': [0.1, 0.25, 0.5]},
    'output': None,
    'format': 'json',
    'seed': 20240531,
}


def _number(data: Dict, key: str, where: str, positive: bool = False) -> float:
    value = data.get(key)
    if isinstance(value, bool) or not isinstance(value, (int, float)) or not np.isfinite(value):
        raise ConfigError(f"{where}.{key} must be a finite number, got {value!r}")
    if positive and value <= 0:
        raise ConfigError(f"{where}.{key} must be positive, got {value!r}")
    return float(value)


def _integer(data: Dict, key: str, where: str, minimum: int) -> int:
    value = data.get(key)
    if isinstance(value, bool) or not isinstance(value, int) or value < minimum:
        raise ConfigError(f"{where}.{key} must be an integer >= {minimum}, got {value!r}")
    return value


def _vector(value, length: int, where: str) -> Tuple[float, ...]:
    try:
        vec = tuple(float(c) for c in value)
    except (TypeError, ValueError):
        raise ConfigError(f"{where} must be a list of {length} numbers, got {value!r}")
    if len(vec) != length or not all(np.isfinite(vec)):
        raise ConfigError(f"{where} must be a list of {length} finite numbers, got {value!r}")
    return vec


def _parse_grid(data: Dict) -> GridConfig:
    where = 'grid'
    p_max = data.get('p_max')
    if p_max is not None:
        p_max = _number(data, 'p_max', where, positive=True)
    rule = data.get('rule', 'gauss-legendre')
    if rule not in QUADRATURE_RULES:
        raise ConfigError(f"grid.rule must be one of {QUADRATURE_RULES}, got {rule!r}")
    return GridConfig(
        p_max=p_max,
        n_per_axis=_integer(data, 'n_per_axis', where, 2),
        rule=rule,
        sigma_multiple=_number(data, 'sigma_multiple', where, positive=True),
    )


def _parse_state(data: Dict, index: int, mass: float) -> StateConfig:
    where = f"states[{index}]"
    if not isinstance(data, dict):
        raise ConfigError(f"{where} must be an object")
    name = str(data.get('name', f"state_{index}"))
    payload = dict(data)
    payload.pop('name', None)
    payload.setdefault('m', mass)
    payload['center'] = list(_vector(payload.get('center'), 3, f"{where}.center"))
    _number(payload, 'sigma', where, positive=True)
    if payload.get('picture', Picture.ALTERNATIVE.value) != Picture.ALTERNATIVE.value:
        raise ConfigError(f"{where}.picture: configured states are given in the alternative picture")
    try:
        packet = Wavepacket.from_dict(payload)
    except SpinBundleError as e:
        raise ConfigError(f"{where}: {e}")
    return StateConfig(name, packet)


def _parse_transform(data: Dict, index: int) -> TransformConfig:
    where = f"transformations[{index}]"
    if not isinstance(data, dict):
        raise ConfigError(f"{where} must be an object")
    kind = data.get('type')
    if kind not in ('rotation', 'boost'):
        raise ConfigError(f"{where}.type must be 'rotation' or 'boost', got {kind!r}")
    axis = _vector(data.get('axis'), 3, f"{where}.axis")
    length = float(np.linalg.norm(axis))
    if length == 0.0:
        raise ConfigError(f"{where}.axis must be nonzero")
    axis = tuple(c / length for c in axis)

    amount_key = next((k for k in ('angle_or_rapidity', 'angle', 'rapidity') if k in data), None)
    if amount_key is None:
        raise ConfigError(f"{where} needs 'angle_or_rapidity'")
    amount = _number(data, amount_key, where)
    a = _vector(data.get('a', (0.0, 0.0, 0.0, 0.0)), 4, f"{where}.a")
    return TransformConfig(kind, axis, amount, a)


def _parse_verify(data: Dict) -> VerifyConfig:
    where = 'verify'
    tolerance = data.get('tolerance')
    if tolerance is not None:
        tolerance = _number(data, 'tolerance', where, positive=True)
    tolerances = data.get('tolerances') or {}
    if not isinstance(tolerances, dict):
        raise ConfigError("verify.tolerances must be an object")
    unknown = sorted(set(tolerances) - set(DEFAULT_TOLERANCES))
    if unknown:
        raise ConfigError(f"verify.tolerances has unknown keys {unknown}; "
                          f"known keys are {sorted(DEFAULT_TOLERANCES)}")
    parsed = {k: _number(tolerances, k, 'verify.tolerances', positive=True) for k in tolerances}
    return VerifyConfig(
        samples=_integer(data, 'samples', where, 1),
        transforms=_integer(data, 'transforms', where, 1),
        states=_integer(data, 'states', where, 1),
        tolerance=tolerance,
        tolerances=parsed,
    )


def _merge(base: Dict, override: Dict) -> Dict:
    """Recursive dict merge; lists and scalars from override replace base."""
    merged = dict(base)
    for key, value in override.items():
        if isinstance(value, dict) and isinstance(merged.get(key), dict):
            merged[key] = _merge(merged[key], value)
        else:
            merged[key] = value
    return merged


def config_from_dict(data: Dict) -> ExperimentConfig:
    """
    Validate a config mapping layered over DEFAULT_CONFIG.

    Raises:
        ConfigError: on any invalid or unknown top-level field
    """
    if not isinstance(data, dict):
        raise ConfigError("Configuration must be a JSON object")
    unknown = sorted(set(data) - set(DEFAULT_CONFIG))
    if unknown:
        raise ConfigError(f"Unknown configuration keys: {unknown}")
    data = _merge(DEFAULT_CONFIG, data)

    mass = _number(data, 'mass', 'config', positive=True)
    if not isinstance(data['states'], list) or not data['states']:
        raise ConfigError("states must be a non-empty list")
    if not isinstance(data['transformations'], list):
        raise ConfigError("transformations must be a list")
    sweep = data['covariance'].get('sigma_sweep') or []
    if not isinstance(sweep, list):
        raise ConfigError("covariance.sigma_sweep must be a list of widths")
    sweep = tuple(_number({'w': w}, 'w', 'covariance.sigma_sweep', positive=True) for w in sweep)

    fmt = data.get('format', 'json')
    if fmt not in OUTPUT_FORMATS:
        raise ConfigError(f"format must be one of {OUTPUT_FORMATS}, got {fmt!r}")
    seed = data.get('seed')
    if isinstance(seed, bool) or not isinstance(seed, int) or seed < 0:
        raise ConfigError(f"seed must be a non-negative integer, got {seed!r}")
    output = data.get('output')

    return ExperimentConfig(
        mass=mass,
        grid=_parse_grid(data['grid']),
        states=tuple(_parse_state(s, i, mass) for i, s in enumerate(data['states'])),
        transformations=tuple(_parse_transform(t, i) for i, t in enumerate(data['transformations'])),
        verify=_parse_verify(data['verify']),
        covariance=CovarianceConfig(sweep),
        output=None if output is None else str(output),
        format=fmt,
        seed=seed,
    )


def load_config(path: Optional[Path] = None) -> ExperimentConfig:
    """
    Built-in defaults, optionally overlaid with a JSON file.

    Raises:
        ConfigError: if the file is missing, not JSON, or fails validation
    """
    if path is None:
        return config_from_dict({})
    path = Path(path)
    try:
        with open(path, 'r', encoding='utf-8') as f:
            data = json.load(f)
    except FileNotFoundError:
        raise ConfigError(f"Config file not found: {path}")
    except json.JSONDecodeError as e:
        raise ConfigError(f"Config file {path} is not valid JSON: {e}")
    logger.debug(f"Loaded configuration from {path}")
    return config_from_dict(data)


def apply_overrides(config: ExperimentConfig, seed: Optional[int] = None,
                    grid_n: Optional[int] = None, p_max: Optional[float] = None,
                    output: Optional[str] = None, fmt: Optional[str] = None,
                    spread_floor: Optional[float] = None) -> ExperimentConfig:
    """Command-line flags on top of the file."""
    grid = config.grid
    if grid_n is not None:
        if grid_n < 2:
            raise ConfigError(f"--grid-n must be >= 2, got {grid_n}")
        grid = replace(grid, n_per_axis=grid_n)
    if p_max is not None:
        if not p_max > 0:
            raise ConfigError(f"--pmax must be positive, got {p_max}")
        grid = replace(grid, p_max=p_max)
    verify = config.verify
    if spread_floor is not None:
        if not spread_floor > 0:
            raise ConfigError(f"--spread-floor must be positive, got {spread_floor}")
        verify = replace(verify, tolerances={**verify.tolerances, 'spread_floor': spread_floor})
    if seed is not None and seed < 0:
        raise ConfigError(f"--seed must be non-negative, got {seed}")
    if fmt is not None and fmt not in OUTPUT_FORMATS:
        raise ConfigError(f"--format must be one of {OUTPUT_FORMATS}, got {fmt!r}")
    return replace(
        config,
        grid=grid,
        verify=verify,
        seed=config.seed if seed is None else seed,
        output=config.output if output is None else output,
        format=config.format if fmt is None else fmt,
    )
