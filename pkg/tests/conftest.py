# Copyright 2026 The wg-fem Authors  (see the AUTHORS file)
# SPDX-License-Identifier: GPL-3.0+

import numpy as np
import pytest
from hypothesis import strategies as st

from wg_fem.solvers import SolverConfig

UNIT_RIGHT_TRIANGLE = np.array([[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]])


def signed_area(coords):
    d1 = coords[1] - coords[0]
    d2 = coords[2] - coords[0]
    return 0.5 * (d1[0] * d2[1] - d1[1] * d2[0])


@st.composite
def triangles(draw):
    """Counterclockwise triangles with bounded edge ratio and angles"""
    coordinate = st.floats(min_value=-1.0, max_value=1.0, allow_nan=False)
    length = st.floats(min_value=0.3, max_value=1.2, allow_nan=False)
    origin = np.array([draw(coordinate), draw(coordinate)])
    direction = draw(st.floats(min_value=0.0, max_value=2 * np.pi, allow_nan=False))
    opening = draw(st.floats(min_value=0.35, max_value=np.pi - 0.35, allow_nan=False))
    first, second = draw(length), draw(length)
    return np.array([
        origin,
        origin + first * np.array([np.cos(direction), np.sin(direction)]),
        origin + second * np.array([np.cos(direction + opening), np.sin(direction + opening)]),
    ])


@st.composite
def boxes(draw, dim):
    side = st.floats(min_value=0.1, max_value=3.0, allow_nan=False)
    corner = st.floats(min_value=-2.0, max_value=2.0, allow_nan=False)
    lower = np.array([draw(corner) for _ in range(dim)])
    sides = np.array([draw(side) for _ in range(dim)])
    if dim == 2:
        offsets = np.array([[0, 0], [1, 0], [1, 1], [0, 1]], dtype=float)
    else:
        offsets = np.array([[(l & 1), (l >> 1) & 1, (l >> 2) & 1] for l in range(8)], dtype=float)
    return lower + offsets * sides


def random_triangles(count, seed=0, min_area=0.05):
    rng = np.random.default_rng(seed)
    found = []
    while len(found) < count:
        coords = rng.uniform(-1.0, 1.0, size=(3, 2))
        area = signed_area(coords)
        if area < 0:
            coords = coords[[0, 2, 1]]
            area = -area
        diameter = np.linalg.norm(coords - coords[[1, 2, 0]], axis=1).max()
        if area >= min_area and area >= 0.1 * diameter ** 2:
            found.append(coords)
    return np.array(found)


@pytest.fixture
def oracle_config():
    return SolverConfig(method="lu", tolerance=1e-10)


@pytest.fixture
def iterative_config():
    return SolverConfig(method="auto", tolerance=1e-12, dense_threshold=0)
