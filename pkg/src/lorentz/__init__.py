#!/usr/bin/env python3
# Copyright (c) 2025 Denis Darkin
# SPDX-License-Identifier: MIT
"""
Lorentz Geometry Module.

Kinematics underneath the spin-1/2 bundle descriptions.

Available modules:
    - spacetime: four-vectors, tilde maps, classical Pauli-Lubansky vector
    - spin_group: SL(2,C) covering map, boosts, Wigner rotations
    - mass_shell: mass shell lift and invariant-measure quadrature grids
"""

__all__ = [
    "spacetime",
    "spin_group",
    "mass_shell",
]
