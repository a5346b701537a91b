#!/usr/bin/env python3
# Copyright (c) 2025 Denis Darkin
# SPDX-License-Identifier: MIT
"""
Exception hierarchy shared by the library modules and the command pipelines.
"""

from typing import Optional


class SpinBundleError(ValueError):
    """Base class for all domain errors."""


class NotHermitianError(SpinBundleError):
    """A matrix expected to be Hermitian is not."""

    def __init__(self, asymmetry: float, message: Optional[str] = None):
        self.asymmetry = float(asymmetry)
        super().__init__(message or f"Matrix is not Hermitian (max |M - M^H| = {self.asymmetry:.3e})")


class NotUnimodularError(SpinBundleError):
    """A matrix expected to lie in SL(2,C) has det != 1."""

    def __init__(self, defect: float):
        self.defect = float(defect)
        super().__init__(f"Matrix is not in SL(2,C) (max |det - 1| = {self.defect:.3e})")


class NotUnitaryError(SpinBundleError):
    """A matrix expected to lie in SU(2) is not unitary."""

    def __init__(self, defect: float):
        self.defect = float(defect)
        super().__init__(f"Matrix is not in SU(2) (max |B^H B - I| = {self.defect:.3e})")


class OffShellError(SpinBundleError):
    """A momentum is not on the mass shell."""

    def __init__(self, defect: float, mass: float):
        self.defect = float(defect)
        self.mass = float(mass)
        super().__init__(f"Momentum is off the m={mass:g} mass shell (max defect {self.defect:.3e})")


class NotPositiveError(SpinBundleError):
    """A matrix expected to be positive definite is not."""


class NormalizationError(SpinBundleError):
    """A spinor or state violates its normalization precondition."""


class OrthogonalityError(SpinBundleError):
    """A Pauli-Lubansky vector is not Minkowski-orthogonal to its momentum."""


class PictureMismatchError(SpinBundleError):
    """Operands live in different bundles / Hilbert spaces."""


class GridError(SpinBundleError):
    """Invalid quadrature grid parameters or misaligned samples."""


class GridCoverageError(SpinBundleError):
    """A state carries too much weight on the outermost layer of a grid."""

    def __init__(self, tail_fraction: float, threshold: float, label: str = "state"):
        self.tail_fraction = float(tail_fraction)
        self.threshold = float(threshold)
        super().__init__(
            f"Grid does not cover the support of the {label}: boundary weight fraction "
            f"{self.tail_fraction:.3e} exceeds {self.threshold:.1e} (increase P_max / --pmax)"
        )


class ConfigError(SpinBundleError):
    """Experiment configuration failed to parse or validate."""
