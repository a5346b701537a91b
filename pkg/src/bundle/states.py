#!/usr/bin/env python3
# Copyright (c) 2025 Denis Darkin
# SPDX-License-Identifier: MIT
"""
Single-particle wavepackets as sections of the trivial bundle X x C^2.

Two pictures share the same underlying bundle:
    - STANDARD (bundle E, metric g = v^H w): the usual L^2 (x) C^2 space, whose
      spinor labels depend on a choice of boosts L(p)
    - ALTERNATIVE (bundle E', metric h = v^H (p_/m) w): free of that choice,
      with transformation law [U'(Lam, a) phi](p) = e^{-i p.a} Lam phi(Lam^{-1} p)

A Wavepacket is an analytic descriptor (Gaussian profile, spinor rule) plus
an accumulated Poincare transformation. It is never stored as grid samples:
evaluation at Lam^{-1} p is done in closed form.
"""

import hashlib
import json
import logging
from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Callable, Dict, Optional, Sequence

import numpy as np

from errors import (
    ConfigError,
    NormalizationError,
    PictureMismatchError,
    SpinBundleError,
)
from lorentz.mass_shell import DEFAULT_POINTS_PER_AXIS, MomentumGrid, build_grid, integrate, lift
from lorentz.spacetime import IDENTITY2, as_four_vector, minkowski_product, under_tilde
from lorentz.spin_group import (
    BoostChoice,
    apply_lorentz,
    boost_for,
    check_on_shell,
    check_sl2c,
    helicity_rotation,
    sl2c_inverse,
    wigner_rotation,
)

logger = logging.getLogger('SpinBundle.States')

BASE_POINT_TOL = 1e-12


class Picture(str, Enum):
    STANDARD = 'standard'
    ALTERNATIVE = 'alternative'


class SpinorKind(str, Enum):
    CONSTANT = 'constant'
    HELICITY = 'helicity'
    CUSTOM = 'custom'


def _unit_spinor(spinor) -> np.ndarray:
    chi = np.asarray(spinor, dtype=np.complex128).reshape(2)
    norm = np.linalg.norm(chi)
    if norm == 0.0:
        raise NormalizationError("Spinor must be nonzero")
    return chi / norm


@dataclass(frozen=True, eq=False)
class SpinorRule:
    """
    p -> chi(p), the qubit carried at each momentum.

    constant: chi(p) = chi0
    helicity: chi(p) = R(p_hat) chi0 (chi0 = |+> gives the helicity-up qubit)
    custom:   chi(p) = function(pvec), any closed form returning (N, 2) arrays
    """
    kind: SpinorKind = SpinorKind.CONSTANT
    spinor: np.ndarray = field(default_factory=lambda: np.array([1.0 + 0j, 0j]))
    function: Optional[Callable[[np.ndarray], np.ndarray]] = None

    def __post_init__(self):
        object.__setattr__(self, 'kind', SpinorKind(self.kind))
        object.__setattr__(self, 'spinor', _unit_spinor(self.spinor))
        self.spinor.setflags(write=False)
        if self.kind is SpinorKind.CUSTOM and self.function is None:
            raise ValueError("Custom spinor rules need a function")

    @classmethod
    def constant(cls, spinor=(1.0, 0.0)) -> 'SpinorRule':
        return cls(SpinorKind.CONSTANT, np.asarray(spinor))

    @classmethod
    def helicity(cls, spinor=(1.0, 0.0)) -> 'SpinorRule':
        return cls(SpinorKind.HELICITY, np.asarray(spinor))

    @classmethod
    def custom(cls, function: Callable[[np.ndarray], np.ndarray]) -> 'SpinorRule':
        return cls(SpinorKind.CUSTOM, np.array([1.0 + 0j, 0j]), function)

    def __call__(self, pvec: np.ndarray) -> np.ndarray:
        pvec = np.asarray(pvec, dtype=np.float64)
        if self.kind is SpinorKind.CONSTANT:
            return np.broadcast_to(self.spinor, pvec.shape[:-1] + (2,))
        if self.kind is SpinorKind.HELICITY:
            p = np.concatenate([np.ones(pvec.shape[:-1] + (1,)), pvec], axis=-1)
            return helicity_rotation(p) @ self.spinor
        return np.asarray(self.function(pvec), dtype=np.complex128)

    def to_dict(self) -> Dict:
        if self.kind is SpinorKind.CUSTOM:
            raise SpinBundleError("Custom spinor rules cannot be serialized")
        return {
            'kind': self.kind.value,
            'spinor': [[float(c.real), float(c.imag)] for c in self.spinor],
        }

    @classmethod
    def from_dict(cls, data: Dict) -> 'SpinorRule':
        kind = data.get('kind', 'constant')
        if kind not in (SpinorKind.CONSTANT.value, SpinorKind.HELICITY.value):
            raise ConfigError(f"spinor_rule.kind must be 'constant' or 'helicity', got {kind!r}")
        spinor = data.get('spinor', [[1.0, 0.0], [0.0, 0.0]])
        try:
            chi = np.array([complex(re, im) for re, im in spinor])
            return cls(SpinorKind(kind), chi)
        except (TypeError, ValueError) as e:
            raise ConfigError(f"spinor_rule.spinor must be two [re, im] pairs: {e}")


@dataclass(frozen=True, eq=False)
class BundlePoint:
    """(p, v) in E or (p, v)' in E'."""
    p: np.ndarray
    v: np.ndarray
    picture: Picture = Picture.STANDARD
    m: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, 'p', check_on_shell(self.p, self.m))
        object.__setattr__(self, 'v', np.asarray(self.v, dtype=np.complex128))
        object.__setattr__(self, 'picture', Picture(self.picture))


def _same_fiber(a: BundlePoint, b: BundlePoint, picture: Picture):
    if a.picture is not picture or b.picture is not picture:
        raise PictureMismatchError(
            f"Metric needs two {picture.value} points, got {a.picture.value} and {b.picture.value}")
    if a.m != b.m or np.max(np.abs(a.p - b.p)) > BASE_POINT_TOL * max(1.0, float(np.max(np.abs(a.p)))):
        raise PictureMismatchError("Bundle points lie over different base points")


def metric_g(a: BundlePoint, b: BundlePoint) -> complex:
    """g((p, v), (p, w)) = v^H w."""
    _same_fiber(a, b, Picture.STANDARD)
    return np.einsum('...i,...i->...', np.conj(a.v), b.v)[()]


def metric_h(a: BundlePoint, b: BundlePoint) -> complex:
    """h((p, v)', (p, w)') = v^H (p_/m) w."""
    _same_fiber(a, b, Picture.ALTERNATIVE)
    weight = under_tilde(a.p) / a.m
    return np.einsum('...i,...ij,...j->...', np.conj(a.v), weight, b.v)[()]


def bundle_iso_L(x: BundlePoint, choice: BoostChoice = BoostChoice.STANDARD) -> BundlePoint:
    """(p, v) in E -> (p, L(p) v)' in E'; an isometry from g to h."""
    if x.picture is not Picture.STANDARD:
        raise PictureMismatchError("bundle_iso_L maps points of E (standard picture)")
    v = np.einsum('...ij,...j->...i', boost_for(x.p, choice, x.m), x.v)
    return BundlePoint(x.p, v, Picture.ALTERNATIVE, x.m)


@dataclass(frozen=True, eq=False)
class Wavepacket:
    """
    Gaussian wavepacket, optionally Poincare-transformed.

    The base section is
        s0(q) = amplitude * exp(-|q - center|^2 / (4 sigma^2)) * L(q)^dressing chi(q)
    so |s0|^2 has standard deviation sigma along each momentum axis. The
    dressing exponent (-1, 0, +1) records applications of alpha / alpha^{-1}
    to the base descriptor under boost_choice.
    """
    center: np.ndarray
    sigma: float
    spinor_rule: SpinorRule = field(default_factory=SpinorRule)
    picture: Picture = Picture.ALTERNATIVE
    m: float = 1.0
    boost_choice: BoostChoice = BoostChoice.STANDARD
    amplitude: float = 1.0
    lam: np.ndarray = field(default_factory=lambda: IDENTITY2.copy())
    a: np.ndarray = field(default_factory=lambda: np.zeros(4))
    dressing: int = 0

    def __post_init__(self):
        center = np.asarray(self.center, dtype=np.float64).reshape(3).copy()
        lam = check_sl2c(np.asarray(self.lam, dtype=np.complex128).reshape(2, 2)).copy()
        a = as_four_vector(self.a).reshape(4).copy()
        for arr in (center, lam, a):
            arr.setflags(write=False)
        object.__setattr__(self, 'center', center)
        object.__setattr__(self, 'lam', lam)
        object.__setattr__(self, 'a', a)
        object.__setattr__(self, 'picture', Picture(self.picture))
        object.__setattr__(self, 'boost_choice', BoostChoice(self.boost_choice))
        if not self.sigma > 0:
            raise ValueError(f"Wavepacket width must be positive, got {self.sigma}")
        if not self.m > 0:
            raise ValueError(f"Mass must be positive, got {self.m}")
        if self.dressing not in (-1, 0, 1):
            raise ValueError(f"dressing must be -1, 0 or 1, got {self.dressing}")

    @property
    def is_transformed(self) -> bool:
        return not (np.array_equal(self.lam, IDENTITY2) and not np.any(self.a))

    def to_dict(self) -> Dict:
        return {
            'm': self.m,
            'center': [float(c) for c in self.center],
            'sigma': self.sigma,
            'spinor_rule': self.spinor_rule.to_dict(),
            'lambda': [[float(z.real), float(z.imag)] for z in self.lam.reshape(-1)],
            'a': [float(c) for c in self.a],
            'picture': self.picture.value,
            'boost_choice': self.boost_choice.value,
            'amplitude': self.amplitude,
            'dressing': self.dressing,
        }

    @classmethod
    def from_dict(cls, data: Dict) -> 'Wavepacket':
        try:
            lam = data.get('lambda')
            lam = IDENTITY2.copy() if lam is None else \
                np.array([complex(re, im) for re, im in lam]).reshape(2, 2)
            return cls(
                center=data['center'],
                sigma=float(data['sigma']),
                spinor_rule=SpinorRule.from_dict(data.get('spinor_rule', {})),
                picture=Picture(data.get('picture', Picture.ALTERNATIVE.value)),
                m=float(data.get('m', 1.0)),
                boost_choice=BoostChoice(data.get('boost_choice', BoostChoice.STANDARD.value)),
                amplitude=float(data.get('amplitude', 1.0)),
                lam=lam,
                a=data.get('a', [0.0, 0.0, 0.0, 0.0]),
                dressing=int(data.get('dressing', 0)),
            )
        except ConfigError:
            raise
        except (KeyError, TypeError, ValueError) as e:
            raise ConfigError(f"Invalid wavepacket descriptor: {e}")


def gaussian_packet(center: Sequence[float] = (0.0, 0.0, 0.0), sigma: float = 0.5,
                    spinor_rule: Optional[SpinorRule] = None,
                    picture: Picture = Picture.ALTERNATIVE, m: float = 1.0,
                    boost_choice: BoostChoice = BoostChoice.STANDARD) -> Wavepacket:
    """Untransformed Gaussian packet with unit peak amplitude."""
    return Wavepacket(
        center=np.asarray(center, dtype=np.float64),
        sigma=float(sigma),
        spinor_rule=spinor_rule or SpinorRule.constant(),
        picture=picture,
        m=m,
        boost_choice=boost_choice,
    )


def state_digest(psi: Wavepacket) -> str:
    """Short content hash of a descriptor (provenance tag in reports)."""
    try:
        payload = json.dumps(psi.to_dict(), sort_keys=True)
    except SpinBundleError:
        payload = f"custom:{getattr(psi.spinor_rule.function, '__name__', 'anonymous')}"
    return hashlib.md5(payload.encode('utf-8')).hexdigest()[:12]


def profile(psi: Wavepacket, pvec: np.ndarray) -> np.ndarray:
    """Scalar Gaussian amplitude at 3-momenta pvec."""
    d = np.asarray(pvec, dtype=np.float64) - psi.center
    return psi.amplitude * np.exp(-np.sum(d * d, axis=-1) / (4.0 * psi.sigma ** 2))


def base_section(psi: Wavepacket, q: np.ndarray) -> np.ndarray:
    """s0(q) for on-shell q (shape (..., 4)), before the accumulated transform."""
    spinor = profile(psi, q[..., 1:])[..., None] * psi.spinor_rule(q[..., 1:])
    if psi.dressing == 0:
        return spinor
    L = boost_for(q, psi.boost_choice, psi.m)
    if psi.dressing < 0:
        L = sl2c_inverse(L)
    return np.einsum('...ij,...j->...i', L, spinor)


def evaluate(psi: Wavepacket, p) -> np.ndarray:
    """
    psi(p) for on-shell momenta p of shape (..., 4).

    ALTERNATIVE: e^{-i p.a} Lam s0(Lam^{-1} p)
    STANDARD:    e^{-i p.a} W(Lam, Lam^{-1} p) s0(Lam^{-1} p)
    """
    p = check_on_shell(p, psi.m)
    if np.array_equal(psi.lam, IDENTITY2):
        values = base_section(psi, p)
    else:
        q = lift(apply_lorentz(sl2c_inverse(psi.lam), p)[..., 1:], psi.m)
        base = base_section(psi, q)
        if psi.picture is Picture.ALTERNATIVE:
            rotor = psi.lam
        else:
            rotor = wigner_rotation(psi.lam, q, psi.boost_choice, psi.m)
        values = np.einsum('...ij,...j->...i', rotor, base)

    if np.any(psi.a):
        values = np.exp(-1j * minkowski_product(p, psi.a))[..., None] * values
    return values


def _check_compatible(phi: Wavepacket, chi: Wavepacket):
    if phi.picture is not chi.picture:
        raise PictureMismatchError(
            f"Cannot pair a {phi.picture.value} state with a {chi.picture.value} state")
    if phi.m != chi.m:
        raise PictureMismatchError(f"Mass mismatch: {phi.m} vs {chi.m}")
    if phi.picture is Picture.STANDARD and phi.boost_choice is not chi.boost_choice:
        raise PictureMismatchError(
            f"Standard-picture states use different boosts: "
            f"{phi.boost_choice.value} vs {chi.boost_choice.value}")


def fiber_products(phi: Wavepacket, chi: Wavepacket, grid: MomentumGrid) -> np.ndarray:
    """Node-wise metric(phi(p), chi(p)) in the states' common picture."""
    _check_compatible(phi, chi)
    left = evaluate(phi, grid.nodes)
    right = left if chi is phi else evaluate(chi, grid.nodes)
    if phi.picture is Picture.STANDARD:
        return np.einsum('ni,ni->n', np.conj(left), right)
    weight = under_tilde(grid.nodes) / phi.m
    return np.einsum('ni,nij,nj->n', np.conj(left), weight, right)


def inner_product(phi: Wavepacket, chi: Wavepacket, grid: MomentumGrid) -> complex:
    """integral of metric(phi(p), chi(p)) d mu(p)."""
    return complex(integrate(grid, fiber_products(phi, chi, grid)))


def norm(psi: Wavepacket, grid: MomentumGrid) -> float:
    return float(np.sqrt(inner_product(psi, psi, grid).real))


def normalize(psi: Wavepacket, grid: MomentumGrid) -> Wavepacket:
    """Rescale the amplitude so the squared norm on grid is 1."""
    current = norm(psi, grid)
    if current == 0.0:
        raise NormalizationError("Cannot normalize a state with zero norm on this grid")
    logger.debug(f"Normalizing state {state_digest(psi)}: norm {current:.12g} on "
                 f"{grid.n_per_axis}^3 grid")
    return replace(psi, amplitude=psi.amplitude / current)


def poincare_transform(psi: Wavepacket, Lam, a=(0.0, 0.0, 0.0, 0.0)) -> Wavepacket:
    """Compose (Lam, a) after the accumulated transform: (Lam Lam1, a + Lam a1)."""
    Lam = check_sl2c(Lam)
    a = as_four_vector(a)
    new_a = a + apply_lorentz(Lam, psi.a) if np.any(psi.a) else a.copy()
    return replace(psi, lam=Lam @ psi.lam, a=new_a)


def alpha(phi: Wavepacket, choice: Optional[BoostChoice] = None) -> Wavepacket:
    """
    H' -> H, p -> L(p)^{-1} phi(p); for the standard boost this is sqrt(p_/m) phi(p).

    The accumulated transform carries over unchanged since U = alpha U' alpha^{-1}.
    """
    if phi.picture is not Picture.ALTERNATIVE:
        raise PictureMismatchError("alpha maps alternative-picture states")
    choice = phi.boost_choice if choice is None else BoostChoice(choice)
    if phi.dressing != 0 and choice is not phi.boost_choice:
        raise PictureMismatchError(
            f"State is dressed with {phi.boost_choice.value} boosts, cannot apply {choice.value}")
    return replace(phi, picture=Picture.STANDARD, boost_choice=choice,
                   dressing=phi.dressing - 1)


def alpha_inv(psi: Wavepacket) -> Wavepacket:
    """H -> H', p -> L(p) psi(p)."""
    if psi.picture is not Picture.STANDARD:
        raise PictureMismatchError("alpha_inv maps standard-picture states")
    return replace(psi, picture=Picture.ALTERNATIVE, dressing=psi.dressing + 1)


def alpha_pointwise(p, spinors, choice: BoostChoice = BoostChoice.STANDARD,
                    m: float = 1.0) -> np.ndarray:
    """L(p)^{-1} v at each node, without going through a descriptor."""
    return np.einsum('...ij,...j->...i', sl2c_inverse(boost_for(p, choice, m)), spinors)


def equivalence_check(phi: Wavepacket, Lam, a, grid: MomentumGrid,
                      choice: BoostChoice = BoostChoice.STANDARD) -> float:
    """
    max over nodes of |[alpha U'(Lam, a) alpha^{-1}] psi - U(Lam, a) psi| with psi = alpha(phi).

    The left side applies L(p)^{-1} to the E' transformation law; the right
    side evaluates the E law with its explicit Wigner factor.
    """
    if phi.picture is not Picture.ALTERNATIVE:
        raise PictureMismatchError("equivalence_check takes an alternative-picture state")
    psi = alpha(phi, choice)
    nodes = grid.nodes
    lhs = alpha_pointwise(nodes, evaluate(poincare_transform(phi, Lam, a), nodes), choice, phi.m)
    rhs = evaluate(poincare_transform(psi, Lam, a), nodes)
    return float(np.max(np.abs(lhs - rhs)))


def observer_residual(phi: Wavepacket, nodes, choice: BoostChoice = BoostChoice.STANDARD) -> float:
    """max over nodes of |[alpha phi](p) - [U'(L(p)^{-1}) phi](k)|."""
    nodes = check_on_shell(np.atleast_2d(nodes), phi.m)
    k = np.array([phi.m, 0.0, 0.0, 0.0])
    direct = evaluate(alpha(phi, choice), nodes)
    worst = 0.0
    for p, value in zip(nodes, direct):
        observer = poincare_transform(phi, sl2c_inverse(boost_for(p, choice, phi.m)))
        worst = max(worst, float(np.max(np.abs(evaluate(observer, k) - value))))
    return worst


def _sphere(count: int) -> np.ndarray:
    """Fibonacci lattice of unit vectors."""
    k = np.arange(count) + 0.5
    z = 1.0 - 2.0 * k / count
    azimuth = np.pi * (3.0 - np.sqrt(5.0)) * k
    r = np.sqrt(1.0 - z * z)
    return np.stack([r * np.cos(azimuth), r * np.sin(azimuth), z], axis=-1)


def grid_for_state(psi: Wavepacket, n_per_axis: int = DEFAULT_POINTS_PER_AXIS,
                   rule: str = 'gauss-legendre', sigma_multiple: float = 8.0,
                   sphere_points: int = 4000) -> MomentumGrid:
    """
    Grid whose box covers the support of psi.

    The base ball center +- sigma_multiple*sigma is pushed through the
    accumulated Lorentz transform; the bounding box of the image of its
    surface is the bounding box of the image of the ball. Rotations therefore
    keep the untransformed half width.
    """
    half = sigma_multiple * psi.sigma
    if np.array_equal(psi.lam, IDENTITY2):
        return build_grid(psi.m, half, n_per_axis, rule, psi.center)

    surface = psi.center + half * _sphere(sphere_points)
    image = apply_lorentz(psi.lam, lift(surface, psi.m))[:, 1:]
    lo, hi = image.min(axis=0), image.max(axis=0)
    # 1% margin for the surface sampling
    half_widths = 0.5 * (hi - lo) * 1.01
    return build_grid(psi.m, half_widths, n_per_axis, rule, 0.5 * (hi + lo))
