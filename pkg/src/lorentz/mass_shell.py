#!/usr/bin/env python3
# Copyright (c) 2025 Denis Darkin
# SPDX-License-Identifier: MIT
"""
The mass shell X = {p : p^0 > 0, p^2 = m^2}, its lift from R^3 and the
Lorentz-invariant measure d^3p / ((2 pi)^3 p^0), discretized as
tensor-product quadrature grids.
"""

import logging
from dataclasses import dataclass, field
from typing import Dict, Optional, Sequence, Union

import numpy as np
from scipy.special import roots_legendre

from errors import GridError
from .spin_group import ON_SHELL_TOL, on_shell_defect

logger = logging.getLogger('SpinBundle.MassShell')

DEFAULT_POINTS_PER_AXIS = 48
QUADRATURE_RULES = ('gauss-legendre', 'trapezoid')
MEASURE_NORMALIZATION = (2.0 * np.pi) ** 3


def lift(pvec, m: float = 1.0) -> np.ndarray:
    """(p0, p) with p0 = sqrt(m^2 + |p|^2)."""
    if m <= 0:
        raise ValueError(f"Mass must be positive, got {m}")
    pvec = np.asarray(pvec, dtype=np.float64)
    if pvec.shape[-1:] != (3,):
        raise ValueError(f"Expected 3-momenta (last axis 3), got shape {pvec.shape}")
    p0 = np.sqrt(m * m + np.sum(pvec * pvec, axis=-1))
    return np.concatenate([p0[..., None], pvec], axis=-1)


@dataclass(frozen=True)
class MassShell:
    """Hyperboloid of mass m."""
    m: float = 1.0

    def __post_init__(self):
        if not self.m > 0:
            raise ValueError(f"Mass must be positive, got {self.m}")

    def lift(self, pvec) -> np.ndarray:
        return lift(pvec, self.m)

    def contains(self, p, tol: float = ON_SHELL_TOL) -> bool:
        return on_shell_defect(p, self.m) <= tol * self.m * self.m


def random_on_shell(rng: np.random.Generator, size: int, m: float = 1.0,
                    p_max: float = 3.0) -> np.ndarray:
    """On-shell momenta with 3-momenta uniform in the ball |p| <= p_max."""
    direction = rng.normal(size=(size, 3))
    direction /= np.linalg.norm(direction, axis=-1, keepdims=True)
    radius = p_max * rng.uniform(0.0, 1.0, size=size) ** (1.0 / 3.0)
    return lift(direction * radius[:, None], m)


def _axis_rule(rule: str, n: int):
    """Nodes and weights on [-1, 1]."""
    if rule == 'gauss-legendre':
        x, w = roots_legendre(n)
    elif rule == 'trapezoid':
        x = np.linspace(-1.0, 1.0, n)
        w = np.full(n, 2.0 / (n - 1))
        w[0] *= 0.5
        w[-1] *= 0.5
    else:
        raise GridError(f"Unknown quadrature rule '{rule}' (choose from {QUADRATURE_RULES})")
    return np.asarray(x, dtype=np.float64), np.asarray(w, dtype=np.float64)


@dataclass(frozen=True, eq=False)
class MomentumGrid:
    """
    Quadrature nodes on the mass shell with invariant-measure weights.

    nodes[i] is an on-shell four-vector; weights[i] already includes the
    1/((2 pi)^3 p^0) density, so sum_i weights[i] f(nodes[i]) approximates
    the integral of f against d mu.
    """
    m: float
    nodes: np.ndarray
    weights: np.ndarray
    p_max: float
    n_per_axis: int
    rule: str = 'gauss-legendre'
    center: np.ndarray = field(default_factory=lambda: np.zeros(3))
    half_widths: np.ndarray = field(default_factory=lambda: np.ones(3))
    boundary: Optional[np.ndarray] = None

    def __post_init__(self):
        defect = on_shell_defect(self.nodes, self.m)
        if defect > ON_SHELL_TOL * self.m * self.m:
            raise GridError(f"Grid nodes are off shell (defect {defect:.3e})")
        if not np.all(self.weights > 0.0):
            raise GridError("Grid weights must be strictly positive")
        if len(self.weights) != len(self.nodes):
            raise GridError("nodes and weights must have the same length")
        for arr in (self.nodes, self.weights, self.center, self.half_widths):
            arr.setflags(write=False)
        if self.boundary is not None:
            self.boundary.setflags(write=False)

    @property
    def size(self) -> int:
        return len(self.weights)

    def describe(self) -> Dict:
        """JSON-ready descriptor (used as grid provenance in reports)."""
        return {
            'm': self.m,
            'p_max': self.p_max,
            'n_per_axis': self.n_per_axis,
            'rule': self.rule,
            'center': [float(c) for c in self.center],
            'half_widths': [float(h) for h in self.half_widths],
        }


def build_grid(m: float = 1.0, p_max: Union[float, Sequence[float]] = 6.0,
               n_per_axis: int = DEFAULT_POINTS_PER_AXIS, rule: str = 'gauss-legendre',
               center: Optional[Sequence[float]] = None) -> MomentumGrid:
    """
    Tensor-product grid over the box center + [-P_max, P_max]^3 lifted to the shell.

    Args:
        m: particle mass
        p_max: half-width of the box, scalar or one value per axis
        n_per_axis: points per axis (>= 2)
        rule: 'gauss-legendre' (default) or 'trapezoid'
        center: box center in 3-momentum space (default origin)

    Returns:
        MomentumGrid with weight_i = (cartesian weight) / ((2 pi)^3 p0_i)

    Raises:
        GridError: invalid sizes or rule
    """
    if m <= 0:
        raise GridError(f"Mass must be positive, got {m}")
    if int(n_per_axis) != n_per_axis or n_per_axis < 2:
        raise GridError(f"n_per_axis must be an integer >= 2, got {n_per_axis}")
    half_widths = np.broadcast_to(np.asarray(p_max, dtype=np.float64), (3,)).copy()
    if not np.all(np.isfinite(half_widths)) or np.any(half_widths <= 0.0):
        raise GridError(f"P_max must be positive and finite, got {p_max}")
    center = np.zeros(3) if center is None else np.asarray(center, dtype=np.float64).copy()
    if center.shape != (3,):
        raise GridError(f"Grid center must be a 3-vector, got {center!r}")

    n = int(n_per_axis)
    x, w = _axis_rule(rule, n)

    axes = [center[k] + half_widths[k] * x for k in range(3)]
    axis_weights = [half_widths[k] * w for k in range(3)]
    px, py, pz = np.meshgrid(*axes, indexing='ij')
    wx, wy, wz = np.meshgrid(*axis_weights, indexing='ij')

    nodes = lift(np.stack([px, py, pz], axis=-1).reshape(-1, 3), m)
    cartesian = (wx * wy * wz).reshape(-1)
    weights = cartesian / (MEASURE_NORMALIZATION * nodes[:, 0])

    index = np.arange(n)
    edge = (index == 0) | (index == n - 1)
    ex, ey, ez = np.meshgrid(edge, edge, edge, indexing='ij')
    boundary = (ex | ey | ez).reshape(-1)

    logger.debug(f"Built {rule} grid: {n}^3 = {len(weights)} nodes, "
                 f"center {center.tolist()}, half-widths {half_widths.tolist()}")

    return MomentumGrid(
        m=float(m),
        nodes=nodes,
        weights=weights,
        p_max=float(np.max(half_widths)),
        n_per_axis=n,
        rule=rule,
        center=center,
        half_widths=half_widths,
        boundary=boundary,
    )


def refined(grid: MomentumGrid, factor: int = 2) -> MomentumGrid:
    """Same box and rule with factor * n_per_axis points per axis."""
    return build_grid(grid.m, grid.half_widths, grid.n_per_axis * factor,
                      grid.rule, grid.center)


def integrate(grid: MomentumGrid, samples) -> Union[float, complex, np.ndarray]:
    """
    sum_i w_i f(p_i) for node-aligned samples of shape (N, ...).

    Raises:
        GridError: if the sample count does not match the grid
    """
    samples = np.asarray(samples)
    if samples.ndim == 0 or samples.shape[0] != grid.size:
        raise GridError(f"Expected {grid.size} node samples, got shape {samples.shape}")
    result = np.einsum('i,i...->...', grid.weights, samples)
    return result[()] if result.ndim == 0 else result


def boundary_fraction(grid: MomentumGrid, density) -> float:
    """Share of sum_i w_i |density_i| carried by the outermost node layer."""
    density = np.abs(np.asarray(density))
    if density.shape[0] != grid.size:
        raise GridError(f"Expected {grid.size} node samples, got shape {density.shape}")
    if density.ndim > 1:
        density = density.reshape(grid.size, -1).sum(axis=1)
    weighted = grid.weights * density
    total = float(np.sum(weighted))
    if total == 0.0 or grid.boundary is None:
        return 0.0
    return float(np.sum(weighted[grid.boundary])) / total
