#!/usr/bin/env python3
# Copyright (c) 2025 Denis Darkin
# SPDX-License-Identifier: MIT
"""
Spin Bundle Module.

Wavepackets over the mass shell and the spin quantities read off them.

Available modules:
    - states: wavepackets in the standard and alternative pictures, alpha map
    - observables: qubit Pauli-Lubansky vector, Newton-Wigner spin, expectations
    - reduced: Peres and Pauli-Lubansky reduced matrices, covariance diagnostics
"""

__all__ = [
    "states",
    "observables",
    "reduced",
]
