#!/usr/bin/env python3
# Copyright (c) 2025 Denis Darkin
# SPDX-License-Identifier: MIT
"""
SpinBundle - Lorentz covariance numerics for massive spin-1/2 particles.

This package compares two descriptions of a spin-1/2 particle: the usual
boost-dependent picture, and a boost-free picture with an explicit unitary
map between them. In the boost-free picture a Pauli-Lubansky reduced matrix
transforms covariantly, while the Peres spin density matrix does not.

Modules:
    - lorentz: four-vectors, SL(2,C) and the mass shell quadrature
    - bundle: wavepackets, spin observables, reduced matrices
    - config: layered JSON configuration
    - errors: exception hierarchy
    - pipeline_base: shared utilities for the command pipelines
    - verify_pipeline: identity catalogue with residuals
    - covariance_pipeline: sigma vs Peres covariance table
    - expectation_pipeline: <W>, <S_NW>, sigma, theta per state
"""

__version__ = "1.1.0"
__author__ = "Denis Darkin"
__license__ = "MIT"

__all__ = [
    "lorentz",
    "bundle",
    "config",
    "errors",
    "pipeline_base",
    "verify_pipeline",
    "covariance_pipeline",
    "expectation_pipeline",
]
