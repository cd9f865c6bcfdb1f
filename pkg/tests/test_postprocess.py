# Copyright 2026 The wg-fem Authors  (see the AUTHORS file)
# SPDX-License-Identifier: GPL-3.0+

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from wg_fem.element import Approach
from wg_fem.mesh import uniform_box3d, uniform_rectangular, uniform_triangular
from wg_fem.postprocess import (
    METRICS,
    ErrorReport,
    LevelRecord,
    error_norms,
    fit_rate,
    pairwise_rates,
    project_exact,
)


def record(level, h, value, **norms):
    values = {metric: value for metric in METRICS}
    values.update(norms)
    return LevelRecord(level=level, h=h, n_cells=level + 1, n_dofs=level + 2, norms=values)


@settings(max_examples=50, deadline=None)
@given(
    st.floats(min_value=0.0, max_value=4.0, allow_nan=False),
    st.floats(min_value=1e-3, max_value=1e3, allow_nan=False),
    st.integers(min_value=2, max_value=6),
)
def test_fit_rate_recovers_a_power_law(rate, constant, count):
    levels = [(2.0 ** -k, constant * 2.0 ** (-k * rate)) for k in range(1, count + 1)]

    assert fit_rate(levels) == pytest.approx(rate, abs=1e-9)


def test_pairwise_rates():
    levels = [(0.5, 1.0), (0.25, 0.25), (0.125, 0.125)]

    assert pairwise_rates(levels) == pytest.approx([2.0, 1.0])


@pytest.mark.parametrize("levels", [
    [(0.5, 1.0)],
    [(0.5, 1.0), (0.25, 0.0)],
    [(0.5, 1.0), (0.0, 0.5)],
    [(0.5, 1.0), (0.25, float("nan"))],
])
def test_rates_need_valid_data(levels):
    with pytest.raises(ValueError):
        fit_rate(levels)


def test_report_rates():
    report = ErrorReport(case="x")
    assert report.rates() == {}

    report.add(record(0, 0.5, 1.0))
    report.add(record(1, 0.25, 0.25))

    rates = report.rates()
    assert set(rates) == set(METRICS)
    assert rates["grad_e"] == pytest.approx(2.0)
    assert report.series("e0") == [(0.5, 1.0), (0.25, 0.25)]
    assert report.pairwise()["eb"] == pytest.approx([2.0])


def test_report_rate_is_none_for_a_vanishing_error():
    report = ErrorReport(case="x")
    report.add(record(0, 0.5, 1.0, e0=0.0))
    report.add(record(1, 0.25, 0.5, e0=0.0))

    rates = report.rates()
    assert rates["e0"] is None
    assert rates["u0_err"] == pytest.approx(1.0)


def test_projection_of_a_constant():
    mesh = uniform_box3d(2)

    q0, qb = project_exact(lambda p: np.full(p.shape[:-1], 2.5), mesh)

    np.testing.assert_allclose(q0, 2.5)
    np.testing.assert_allclose(qb, 2.5)


@pytest.mark.parametrize("make_mesh", [lambda: uniform_triangular(3), lambda: uniform_rectangular(3)])
def test_projection_has_zero_error(make_mesh):
    mesh = make_mesh()

    def u(points):
        return np.sin(points[..., 0]) * np.cos(points[..., 1])

    def grad_u(points):
        return np.stack([
            np.cos(points[..., 0]) * np.cos(points[..., 1]),
            -np.sin(points[..., 0]) * np.sin(points[..., 1]),
        ], axis=-1)

    q0, qb = project_exact(u, mesh)
    norms = error_norms(mesh, q0, qb, u, grad_u)

    assert set(norms) == set(METRICS)
    for metric in ("grad_e", "e0", "eb", "e0_max"):
        assert norms[metric] == pytest.approx(0.0, abs=1e-13)
    assert norms["u0_err"] > 0.0


@pytest.mark.parametrize("approach", list(Approach))
def test_gradient_error_vanishes_for_linear_functions(approach):
    mesh = uniform_triangular(4)
    slope = np.array([0.5, -2.0])

    def u(points):
        return 1.0 + points @ slope

    q0, qb = project_exact(u, mesh)
    norms = error_norms(mesh, q0, qb, u, lambda p: np.broadcast_to(slope, p.shape), approach)

    assert norms["grad_err"] == pytest.approx(0.0, abs=1e-12)


def test_error_norms_of_a_shifted_solution():
    mesh = uniform_triangular(2)

    def u(points):
        return np.zeros(points.shape[:-1])

    def grad_u(points):
        return np.zeros(points.shape)

    norms = error_norms(mesh, np.full(mesh.n_cells, 0.5), np.full(mesh.n_faces, 0.5), u, grad_u)

    assert norms["e0"] == pytest.approx(0.5)
    assert norms["u0_err"] == pytest.approx(0.5)
    assert norms["e0_max"] == pytest.approx(0.5)
    assert norms["grad_e"] == pytest.approx(0.0, abs=1e-13)
    expected_eb = 0.5 * np.sqrt(np.sum(mesh.face_sizes * mesh.face_measures))
    assert norms["eb"] == pytest.approx(expected_eb)


@pytest.mark.parametrize("errors, expected", [
    ([7.14e-01, 3.56e-01, 1.78e-01, 8.90e-02, 4.45e-02], 1.0012),
    ([6.40e-03, 2.20e-03, 7.62e-04, 2.65e-04, 9.33e-05], 1.5251),
], ids=["laplace-gradient", "corner-e0"])
def test_fit_rate_on_published_columns(errors, expected):
    levels = list(zip([1 / 8, 1 / 16, 1 / 32, 1 / 64, 1 / 128], errors))

    assert fit_rate(levels) == pytest.approx(expected, abs=2e-3)


def zero(points):
    return np.zeros(points.shape[:-1])


def zero_gradient(points):
    return np.zeros(points.shape)


@pytest.mark.parametrize("make_mesh", [lambda: uniform_triangular(3), lambda: uniform_rectangular(3)])
@pytest.mark.parametrize("seed", [0, 1, 2])
def test_metrics_are_seminorms_of_the_discrete_error(make_mesh, seed):
    mesh = make_mesh()
    rng = np.random.default_rng(seed)
    first = rng.normal(size=mesh.n_cells), rng.normal(size=mesh.n_faces)
    second = rng.normal(size=mesh.n_cells), rng.normal(size=mesh.n_faces)

    a = error_norms(mesh, *first, zero, zero_gradient)
    b = error_norms(mesh, *second, zero, zero_gradient)
    scaled = error_norms(mesh, -2.5 * first[0], -2.5 * first[1], zero, zero_gradient)
    total = error_norms(mesh, first[0] + second[0], first[1] + second[1], zero, zero_gradient)

    for metric in METRICS:
        assert scaled[metric] == pytest.approx(2.5 * a[metric], rel=1e-12), metric
        assert total[metric] <= a[metric] + b[metric] + 1e-12, metric


def test_face_error_is_weighted_by_the_cell_size():
    mesh = uniform_triangular(4)

    def u(points):
        return np.sin(points[..., 0]) + points[..., 1] ** 2

    def grad_u(points):
        return np.stack([np.cos(points[..., 0]), 2.0 * points[..., 1]], axis=-1)

    q0, qb = project_exact(u, mesh)
    face = int(mesh.interior_faces[3])
    ub = qb.copy()
    ub[face] += 0.2

    norms = error_norms(mesh, q0, ub, u, grad_u)

    expected = 0.2 * np.sqrt(mesh.face_sizes[face] * mesh.face_measures[face])
    assert norms["eb"] == pytest.approx(expected, rel=1e-12)
    assert norms["e0"] == pytest.approx(0.0, abs=1e-14)
    assert norms["grad_e"] > 0.0
