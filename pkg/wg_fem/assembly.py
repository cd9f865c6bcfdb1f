# -*- coding: utf-8 -*-
# Copyright 2026 The wg-fem Authors  (see the AUTHORS file)
# SPDX-License-Identifier: GPL-3.0+

import enum
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np
from scipy import sparse

from .element import Approach, Coefficients, compute_kernels
from .exceptions import AssemblyError
from .quadrature import DEFAULT_ORDER, integrate_cells, map_to_faces

logger = logging.getLogger(__name__)

BOUNDARY_TAGS = ("xmin", "xmax", "ymin", "ymax", "zmin", "zmax")
CHUNK_SIZE = 4096


class DirichletMode(enum.Enum):
    NODAL = "nodal"
    L2 = "l2"


@dataclass(frozen=True)
class ProblemSpec:
    """-div(A grad u) + beta . grad u + gamma u = f with Dirichlet/Robin data.

    Boundary parts are selected by face tags. The Robin data g^R is called
    with the quadrature points and the outward unit normals of the face.
    """

    coefficients: Coefficients
    source: object
    dirichlet: object = None
    robin_alpha: object = None
    robin_data: object = None
    dirichlet_tags: tuple = BOUNDARY_TAGS
    robin_tags: tuple = ()
    dirichlet_mode: DirichletMode = DirichletMode.L2

    def __post_init__(self):
        overlap = set(self.dirichlet_tags) & set(self.robin_tags)
        if overlap:
            raise AssemblyError(f"Boundary parts overlap on {sorted(overlap)}")
        object.__setattr__(self, "dirichlet_mode", DirichletMode(self.dirichlet_mode))

    @property
    def symmetric(self):
        return self.coefficients.symmetric


@dataclass(frozen=True, eq=False)
class DofMap:
    """Cell dofs come first (dof = cell), then face dofs (dof = n_cells + face)"""

    n_cells: int
    n_faces: int
    dirichlet_faces: np.ndarray
    robin_faces: np.ndarray
    free: np.ndarray
    constrained: np.ndarray
    free_index: np.ndarray

    @property
    def n_dofs(self):
        return self.n_cells + self.n_faces

    @property
    def n_free(self):
        return self.free.shape[0]

    def cell_dof(self, cell):
        return cell

    def face_dof(self, face):
        return self.n_cells + face

    def cell_dofs(self, mesh):
        """Global dofs of every cell in local order [v0, vb_0, ..., vb_nfc-1]"""
        return np.column_stack([np.arange(mesh.n_cells), self.n_cells + mesh.cell_faces])


def build_dofmap(mesh, spec):
    tags = mesh.boundary_tags
    dirichlet = np.isin(tags, list(spec.dirichlet_tags))
    robin = np.isin(tags, list(spec.robin_tags))
    missing = ~(dirichlet | robin)
    if missing.any():
        names = sorted(set(tags[missing].tolist()))
        raise AssemblyError(f"Boundary faces tagged {names} belong to neither the Dirichlet nor the Robin part")

    dirichlet_faces = mesh.boundary_faces[dirichlet]
    if dirichlet_faces.size and spec.dirichlet is None:
        raise AssemblyError("Dirichlet faces present but no Dirichlet data given")

    n_dofs = mesh.n_cells + mesh.n_faces
    constrained = mesh.n_cells + dirichlet_faces
    is_free = np.ones(n_dofs, dtype=bool)
    is_free[constrained] = False
    free = np.flatnonzero(is_free)
    free_index = np.full(n_dofs, -1, dtype=np.int64)
    free_index[free] = np.arange(free.size)
    return DofMap(
        n_cells=mesh.n_cells,
        n_faces=mesh.n_faces,
        dirichlet_faces=dirichlet_faces,
        robin_faces=mesh.boundary_faces[robin],
        free=free,
        constrained=constrained,
        free_index=free_index,
    )


def _face_average(mesh, func, faces, order):
    points, weights = map_to_faces(mesh.vertices[mesh.faces[faces]], order)
    values = np.broadcast_to(np.asarray(func(points), dtype=float), weights.shape)
    return np.einsum("fq,fq->f", weights, values) / mesh.face_measures[faces]


def dirichlet_values(spec, mesh, mode=None, faces=None, order=DEFAULT_ORDER):
    """Face constants of the discrete Dirichlet data

    Args:
        spec: The ProblemSpec holding g^D
        mesh: The mesh
        mode: NODAL evaluates g^D at the face midpoint, L2 averages it over the face
        faces: Faces to evaluate, the Dirichlet faces of spec by default
        order: Face quadrature order for the L2 mode
    """
    mode = DirichletMode(mode or spec.dirichlet_mode)
    if faces is None:
        faces = mesh.boundary_faces[np.isin(mesh.boundary_tags, list(spec.dirichlet_tags))]
    faces = np.asarray(faces, dtype=np.int64)
    if faces.size == 0:
        return np.zeros(0)
    if mode is DirichletMode.NODAL:
        midpoints = mesh.face_midpoints[faces]
        return np.broadcast_to(np.asarray(spec.dirichlet(midpoints), dtype=float), faces.shape).copy()
    return _face_average(mesh, spec.dirichlet, faces, order)


@dataclass(frozen=True, eq=False)
class SparseSystem:
    matrix: sparse.csr_matrix
    rhs: np.ndarray
    dofmap: DofMap
    full_matrix: sparse.csr_matrix
    full_rhs: np.ndarray
    constrained_values: np.ndarray
    symmetric: bool = True
    info: dict = field(default_factory=dict)

    @property
    def n_free(self):
        return self.rhs.shape[0]

    def expand(self, x_free):
        """Full coefficient vector {u0, ub} with the Dirichlet values re-inserted"""
        full = np.empty(self.dofmap.n_dofs)
        full[self.dofmap.free] = x_free
        full[self.dofmap.constrained] = self.constrained_values
        return full

    def split(self, full):
        return full[:self.dofmap.n_cells], full[self.dofmap.n_cells:]

    def relative_residual(self, x_free):
        norm = np.linalg.norm(self.rhs)
        residual = np.linalg.norm(self.rhs - self.matrix @ x_free)
        return residual / norm if norm > 0 else residual


def _chunks(n, size):
    return [np.arange(start, min(start + size, n)) for start in range(0, n, size)]


def local_matrices(mesh, coefficients, approach=Approach.II, order=DEFAULT_ORDER, workers=1):
    """Local stiffness matrices of every cell, computed chunk by chunk.

    Chunks are concatenated in cell order, so the result does not depend on
    the number of workers.
    """
    coords = mesh.cell_coords
    chunks = _chunks(mesh.n_cells, CHUNK_SIZE)

    def kernel(chunk):
        logger.debug(f"Computing local kernels for cells {chunk[0]}..{chunk[-1]}")
        return compute_kernels(mesh.kind, coords[chunk], coefficients, approach, order).stiffness

    if workers > 1 and len(chunks) > 1:
        with ThreadPoolExecutor(max_workers=workers) as executor:
            blocks = list(executor.map(kernel, chunks))
    else:
        blocks = [kernel(chunk) for chunk in chunks]
    return np.concatenate(blocks, axis=0)


def _robin_terms(mesh, spec, faces, order):
    if faces.size == 0:
        return np.zeros(0), np.zeros(0)
    points, weights = map_to_faces(mesh.vertices[mesh.faces[faces]], order)
    normals = np.broadcast_to(mesh.face_normals[faces][:, None, :], points.shape)
    mass = np.zeros(faces.size)
    load = np.zeros(faces.size)
    if spec.robin_alpha is not None:
        alpha = np.broadcast_to(np.asarray(spec.robin_alpha(points), dtype=float), weights.shape)
        if np.any(alpha < 0):
            raise AssemblyError("Robin coefficient alpha must be non-negative")
        mass = np.einsum("fq,fq->f", weights, alpha)
    if spec.robin_data is not None:
        data = np.broadcast_to(np.asarray(spec.robin_data(points, normals), dtype=float), weights.shape)
        load = np.einsum("fq,fq->f", weights, data)
    return mass, load


def assemble(mesh, spec, approach=Approach.II, order=DEFAULT_ORDER, workers=1):
    """Assemble the WG system and eliminate the Dirichlet dofs

    Args:
        mesh: The mesh
        spec: The ProblemSpec
        approach: Gradient basis on triangles
        order: Quadrature order for coefficients, loads and boundary data
        workers: Threads computing the local kernels

    Returns:
        SparseSystem: The reduced system over the free dofs

    Raises:
        AssemblyError: Unassigned boundary faces or non-finite entries
    """
    dofmap = build_dofmap(mesh, spec)
    n_dofs = dofmap.n_dofs

    stiffness = local_matrices(mesh, spec.coefficients, approach, order, workers)
    dofs = dofmap.cell_dofs(mesh)
    nloc = dofs.shape[1]
    rows = np.repeat(dofs, nloc, axis=1).ravel()
    cols = np.tile(dofs, (1, nloc)).ravel()
    values = stiffness.ravel()

    full_rhs = np.zeros(n_dofs)
    full_rhs[:mesh.n_cells] = integrate_cells(mesh, spec.source, order)

    robin_mass, robin_load = _robin_terms(mesh, spec, dofmap.robin_faces, order)
    robin_dofs = mesh.n_cells + dofmap.robin_faces
    rows = np.concatenate([rows, robin_dofs])
    cols = np.concatenate([cols, robin_dofs])
    values = np.concatenate([values, robin_mass])
    np.add.at(full_rhs, robin_dofs, robin_load)

    if not (np.all(np.isfinite(values)) and np.all(np.isfinite(full_rhs))):
        raise AssemblyError("Non-finite entries in the assembled system (check the coefficients and data)")

    full_matrix = sparse.coo_matrix((values, (rows, cols)), shape=(n_dofs, n_dofs)).tocsr()
    full_matrix.sum_duplicates()
    full_matrix.sort_indices()

    constrained_values = dirichlet_values(spec, mesh, faces=dofmap.dirichlet_faces, order=order)
    free_rows = full_matrix[dofmap.free]
    matrix = free_rows[:, dofmap.free].tocsr()
    rhs = full_rhs[dofmap.free] - free_rows[:, dofmap.constrained] @ constrained_values
    matrix.sort_indices()

    logger.info(
        f"Assembled {mesh.n_cells} cells: {matrix.shape[0]} free of {n_dofs} dofs, {matrix.nnz} non-zeros"
    )
    return SparseSystem(
        matrix=matrix,
        rhs=rhs,
        dofmap=dofmap,
        full_matrix=full_matrix,
        full_rhs=full_rhs,
        constrained_values=constrained_values,
        symmetric=spec.symmetric,
        info={"approach": Approach(approach).value, "order": order},
    )
