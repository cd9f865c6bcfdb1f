# Copyright 2026 The wg-fem Authors  (see the AUTHORS file)
# SPDX-License-Identifier: GPL-3.0+

import numpy as np
import pytest

from wg_fem import assembly
from wg_fem.assembly import (
    DirichletMode,
    ProblemSpec,
    assemble,
    build_dofmap,
    dirichlet_values,
    local_matrices,
)
from wg_fem.element import Approach, Coefficients, identity_diffusion
from wg_fem.exceptions import AssemblyError
from wg_fem.mesh import uniform_box3d, uniform_rectangular, uniform_triangular
from wg_fem.postprocess import project_exact
from wg_fem.solvers import solve

MESHES = [
    ("triangles", lambda: uniform_triangular(4)),
    ("rectangles", lambda: uniform_rectangular(4)),
    ("boxes", lambda: uniform_box3d(2)),
]


def constant(value):
    return lambda points: np.full(points.shape[:-1], float(value))


def laplace(dim, solution, **kwargs):
    return ProblemSpec(
        coefficients=Coefficients(identity_diffusion(dim)),
        source=constant(0.0),
        dirichlet=solution,
        **kwargs,
    )


def solve_full(mesh, spec, config, approach=Approach.II):
    system = assemble(mesh, spec, approach)
    x, _ = solve(system, config)
    return system, system.split(system.expand(x))


@pytest.mark.parametrize("name, make_mesh", MESHES)
def test_constants_are_reproduced_with_convection_and_reaction(name, make_mesh, oracle_config):
    mesh = make_mesh()
    dim = mesh.dim
    spec = ProblemSpec(
        coefficients=Coefficients(
            diffusion=identity_diffusion(dim),
            convection=lambda p: np.broadcast_to(np.arange(1.0, dim + 1.0), p.shape),
            reaction=constant(2.0),
        ),
        source=constant(2.0 * 3.5),
        dirichlet=constant(3.5),
    )

    _, (u0, ub) = solve_full(mesh, spec, oracle_config)

    np.testing.assert_allclose(u0, 3.5, rtol=1e-9)
    np.testing.assert_allclose(ub, 3.5, rtol=1e-9)


@pytest.mark.parametrize("name, make_mesh", MESHES)
@pytest.mark.parametrize("approach", list(Approach))
def test_linear_solutions_are_the_projections(name, make_mesh, approach, oracle_config):
    mesh = make_mesh()
    slope = np.arange(1.0, mesh.dim + 1.0)

    def u(points):
        return 0.5 + points @ slope

    _, (u0, ub) = solve_full(mesh, laplace(mesh.dim, u), oracle_config, approach)
    q0, qb = project_exact(u, mesh)

    np.testing.assert_allclose(u0, q0, atol=1e-9)
    np.testing.assert_allclose(ub, qb, atol=1e-9)


def test_robin_constants(oracle_config):
    mesh = uniform_triangular(4)
    spec = laplace(
        2,
        constant(-1.25),
        robin_alpha=constant(1.0),
        robin_data=lambda points, normals: np.full(points.shape[:-1], -1.25),
        dirichlet_tags=("xmin", "ymin", "ymax"),
        robin_tags=("xmax",),
    )

    system, (u0, ub) = solve_full(mesh, spec, oracle_config)

    assert system.dofmap.robin_faces.size == 4
    np.testing.assert_allclose(u0, -1.25, rtol=1e-9)
    np.testing.assert_allclose(ub, -1.25, rtol=1e-9)


def test_pure_robin_linear_solution(oracle_config):
    mesh = uniform_rectangular(3)
    slope = np.array([2.0, -1.0])

    def u(points):
        return 1.0 + points @ slope

    spec = ProblemSpec(
        coefficients=Coefficients(identity_diffusion(2)),
        source=constant(0.0),
        robin_alpha=constant(2.0),
        robin_data=lambda points, normals: normals @ slope + 2.0 * u(points),
        dirichlet_tags=(),
        robin_tags=("xmin", "xmax", "ymin", "ymax"),
    )

    _, (u0, ub) = solve_full(mesh, spec, oracle_config)
    q0, qb = project_exact(u, mesh)

    np.testing.assert_allclose(u0, q0, atol=1e-9)
    np.testing.assert_allclose(ub, qb, atol=1e-9)


def test_dofmap_layout():
    mesh = uniform_triangular(2)
    dofmap = build_dofmap(mesh, laplace(2, constant(0.0)))

    assert dofmap.n_dofs == mesh.n_cells + mesh.n_faces
    assert dofmap.n_free == dofmap.n_dofs - mesh.boundary_faces.size
    assert dofmap.face_dof(0) == mesh.n_cells
    assert dofmap.cell_dof(3) == 3
    dofs = dofmap.cell_dofs(mesh)
    assert dofs.shape == (mesh.n_cells, 4)
    np.testing.assert_array_equal(dofs[:, 1:], mesh.n_cells + mesh.cell_faces)
    assert np.all(dofmap.free_index[dofmap.constrained] == -1)


def test_unassigned_boundary_faces():
    mesh = uniform_triangular(2)

    with pytest.raises(AssemblyError, match="neither"):
        assemble(mesh, laplace(2, constant(0.0), dirichlet_tags=("xmin", "xmax")))


def test_overlapping_boundary_parts():
    with pytest.raises(AssemblyError, match="overlap"):
        laplace(2, constant(0.0), robin_tags=("xmin",))


def test_missing_dirichlet_data():
    spec = ProblemSpec(coefficients=Coefficients(identity_diffusion(2)), source=constant(0.0))

    with pytest.raises(AssemblyError):
        build_dofmap(uniform_triangular(1), spec)


def test_negative_robin_coefficient():
    spec = laplace(
        2,
        constant(0.0),
        robin_alpha=constant(-1.0),
        dirichlet_tags=("xmin", "ymin", "ymax"),
        robin_tags=("xmax",),
    )

    with pytest.raises(AssemblyError):
        assemble(uniform_triangular(2), spec)


def test_non_finite_source():
    spec = ProblemSpec(
        coefficients=Coefficients(identity_diffusion(2)),
        source=lambda p: 1.0 / (p[..., 0] - p[..., 0]),
        dirichlet=constant(0.0),
    )

    with np.errstate(divide="ignore", invalid="ignore"):
        with pytest.raises(AssemblyError, match="Non-finite"):
            assemble(uniform_triangular(2), spec)


def test_dirichlet_modes():
    mesh = uniform_triangular(1)
    spec = laplace(2, lambda p: p[..., 0] ** 2)
    bottom = mesh.faces_with_tags(["ymin"])

    nodal = dirichlet_values(spec, mesh, DirichletMode.NODAL, faces=bottom)
    projected = dirichlet_values(spec, mesh, DirichletMode.L2, faces=bottom)

    np.testing.assert_allclose(nodal, [0.25])
    np.testing.assert_allclose(projected, [1 / 3])


def test_symmetry_flag():
    mesh = uniform_triangular(3)
    symmetric = assemble(mesh, laplace(2, constant(0.0)))
    spec = ProblemSpec(
        coefficients=Coefficients(identity_diffusion(2), convection=lambda p: np.ones(p.shape)),
        source=constant(0.0),
        dirichlet=constant(0.0),
    )
    convected = assemble(mesh, spec)

    assert symmetric.symmetric
    assert abs(symmetric.matrix - symmetric.matrix.T).max() < 1e-12
    assert not convected.symmetric
    assert abs(convected.matrix - convected.matrix.T).max() > 1e-3


def test_assembly_does_not_depend_on_workers(monkeypatch):
    monkeypatch.setattr(assembly, "CHUNK_SIZE", 7)
    mesh = uniform_triangular(5)
    spec = laplace(2, lambda p: np.sin(p[..., 0]) + p[..., 1])

    serial = assemble(mesh, spec, workers=1)
    threaded = assemble(mesh, spec, workers=4)

    np.testing.assert_array_equal(serial.matrix.indptr, threaded.matrix.indptr)
    np.testing.assert_array_equal(serial.matrix.indices, threaded.matrix.indices)
    np.testing.assert_array_equal(serial.matrix.data, threaded.matrix.data)
    np.testing.assert_array_equal(serial.rhs, threaded.rhs)


def test_local_matrices_shape():
    mesh = uniform_box3d(2)

    matrices = local_matrices(mesh, Coefficients(identity_diffusion(3)))

    assert matrices.shape == (8, 7, 7)


def test_reduced_system_satisfies_the_full_equations(oracle_config):
    mesh = uniform_triangular(4)
    spec = ProblemSpec(
        coefficients=Coefficients(identity_diffusion(2)),
        source=lambda p: np.sin(np.pi * p[..., 0]) * np.sin(np.pi * p[..., 1]),
        dirichlet=lambda p: p[..., 0] * p[..., 1],
    )
    system = assemble(mesh, spec)
    x, _ = solve(system, oracle_config)
    full = system.expand(x)

    residual = system.full_rhs - system.full_matrix @ full
    np.testing.assert_allclose(residual[system.dofmap.free], 0.0, atol=1e-9)
    assert system.relative_residual(x) < 1e-9


def test_two_cells_scatter_by_hand():
    mesh = uniform_triangular(1)
    system = assemble(mesh, laplace(2, constant(0.0)))
    local = local_matrices(mesh, Coefficients(identity_diffusion(2)))

    expected = np.zeros((7, 7))
    for cell in range(2):
        dofs = [cell] + [2 + face for face in mesh.cell_faces[cell]]
        for a, row in enumerate(dofs):
            for b, col in enumerate(dofs):
                expected[row, col] += local[cell, a, b]

    np.testing.assert_allclose(system.full_matrix.toarray(), expected, atol=1e-14)
    shared = int(mesh.interior_faces[0])
    first = list(mesh.cell_faces[0]).index(shared) + 1
    second = list(mesh.cell_faces[1]).index(shared) + 1
    assert expected[2 + shared, 2 + shared] == pytest.approx(local[0, first, first] + local[1, second, second])
    assert expected[0, 1] == 0.0
    assert system.n_free == 2 + 1


def test_robin_without_alpha_is_neumann(oracle_config):
    mesh = uniform_triangular(4)
    slope = np.array([1.0, 0.5])

    def u(points):
        return 1.0 + points @ slope

    def flux(points, normals):
        return normals @ slope

    parts = dict(dirichlet_tags=("xmin", "ymin", "ymax"), robin_tags=("xmax",), robin_data=flux)
    neumann = assemble(mesh, laplace(2, u, **parts))
    robin = assemble(mesh, laplace(2, u, robin_alpha=constant(0.0), **parts))

    np.testing.assert_allclose(robin.matrix.toarray(), neumann.matrix.toarray(), atol=1e-14)
    np.testing.assert_allclose(robin.rhs, neumann.rhs, atol=1e-14)

    x, _ = solve(robin, oracle_config)
    u0, ub = robin.split(robin.expand(x))
    q0, qb = project_exact(u, mesh)
    np.testing.assert_allclose(u0, q0, atol=1e-9)
    np.testing.assert_allclose(ub, qb, atol=1e-9)
