# Copyright (c) 2025 Denis Darkin
# SPDX-License-Identifier: MIT
"""Shared fixtures: import paths, seeded generators, reference momenta."""

import json
import sys
from pathlib import Path

import numpy as np
import pytest

ROOT = Path(__file__).resolve().parent.parent
sys.path.insert(0, str(ROOT / 'src'))
sys.path.insert(0, str(ROOT))

from bundle.states import gaussian_packet, grid_for_state  # noqa: E402


@pytest.fixture
def rng():
    return np.random.default_rng(20240531)


@pytest.fixture
def pstar():
    """(5/4, 0, 0, 3/4): |p| = 3/4 at m = 1, rapidity ln 2."""
    return np.array([1.25, 0.0, 0.0, 0.75])


@pytest.fixture
def rest_packet():
    return gaussian_packet((0.0, 0.0, 0.0), 0.5)


@pytest.fixture
def transverse_packet():
    return gaussian_packet((0.5, 0.0, 0.0), 0.5)


@pytest.fixture
def coarse_grid(transverse_packet):
    return grid_for_state(transverse_packet, n_per_axis=16)


@pytest.fixture
def small_config(tmp_path):
    """A quick configuration: one state, one boost, few random samples."""
    data = {
        'states': [
            {'name': 'rest_up', 'center': [0.0, 0.0, 0.0], 'sigma': 0.5,
             'spinor_rule': {'kind': 'constant', 'spinor': [[1.0, 0.0], [0.0, 0.0]]}},
        ],
        'transformations': [
            {'type': 'boost', 'axis': [0.0, 0.0, 1.0], 'angle_or_rapidity': 0.5},
        ],
        'verify': {'samples': 500, 'transforms': 4, 'states': 2},
        'covariance': {'sigma_sweep': []},
    }
    path = tmp_path / 'small.json'
    path.write_text(json.dumps(data, indent=2), encoding='utf-8')
    return path
