# Copyright 2026 The wg-fem Authors
# SPDX-License-Identifier: GPL-3.0-or-later

"""Structured meshes for the lowest order weak Galerkin elements.

Cells are stored as integer arrays, faces are derived from the cells. Every
face carries one global unit normal (the outward normal of its first
incident cell) and every cell records, for each of its local faces, the sign
turning that global normal into its own outward normal.

Local face ordering:
    triangle  face i is the edge opposite to vertex i
    rect2d    x = x0, x = x1, y = y0, y = y1
    box3d     x = x0, x = x1, y = y0, y = y1, z = z0, z = z1
"""

import enum
import logging
import math
from dataclasses import dataclass

import numpy as np

from .exceptions import MeshError

logger = logging.getLogger(__name__)

GEOMETRY_TOL = 1e-12
AXES = 'xyz'


class CellKind(enum.Enum):
    TRIANGLE = 'triangle'
    RECT = 'rect2d'
    BOX = 'box3d'


class Diagonal(enum.Enum):
    RISING = 'rising'
    FALLING = 'falling'
    CENTRED = 'centred'


LOCAL_FACES = {
    CellKind.TRIANGLE: ((1, 2), (2, 0), (0, 1)),
    CellKind.RECT: ((0, 3), (1, 2), (0, 1), (3, 2)),
    # box vertex l sits at (l & 1, (l >> 1) & 1, (l >> 2) & 1)
    CellKind.BOX: (
        (0, 2, 4, 6), (1, 3, 5, 7),
        (0, 1, 4, 5), (2, 3, 6, 7),
        (0, 1, 2, 3), (4, 5, 6, 7),
    ),
}

CELL_DIM = {CellKind.TRIANGLE: 2, CellKind.RECT: 2, CellKind.BOX: 3}

OPPOSITE_CORNER = {CellKind.RECT: 2, CellKind.BOX: 7}


@dataclass(frozen=True)
class Cell:
    kind: CellKind
    vertex_ids: tuple
    coords: np.ndarray
    measure: float
    sides: tuple = None
    faces: tuple = ()
    face_signs: tuple = ()


@dataclass(frozen=True)
class Face:
    vertex_ids: tuple
    measure: float
    normal: np.ndarray
    midpoint: np.ndarray
    h: float
    cells: tuple
    tag: str = None


@dataclass(frozen=True, eq=False)
class Mesh:
    kind: CellKind
    vertices: np.ndarray
    cells: np.ndarray
    faces: np.ndarray
    cell_faces: np.ndarray
    cell_face_signs: np.ndarray
    face_cells: np.ndarray
    face_normals: np.ndarray
    face_measures: np.ndarray
    face_midpoints: np.ndarray
    face_sizes: np.ndarray
    cell_measures: np.ndarray
    cell_diameters: np.ndarray
    cell_sides: np.ndarray
    boundary_faces: np.ndarray
    boundary_tags: np.ndarray
    domain: np.ndarray
    h: float

    def __post_init__(self):
        for value in vars(self).values():
            if isinstance(value, np.ndarray):
                value.setflags(write=False)

    @property
    def dim(self):
        return self.vertices.shape[1]

    @property
    def n_vertices(self):
        return self.vertices.shape[0]

    @property
    def n_cells(self):
        return self.cells.shape[0]

    @property
    def n_faces(self):
        return self.faces.shape[0]

    @property
    def cell_coords(self):
        return self.vertices[self.cells]

    @property
    def interior_faces(self):
        return np.flatnonzero(self.face_cells[:, 1] >= 0)

    def faces_with_tags(self, tags):
        mask = np.isin(self.boundary_tags, list(tags))
        return self.boundary_faces[mask]

    def face_tag(self, face):
        hit = np.flatnonzero(self.boundary_faces == face)
        return str(self.boundary_tags[hit[0]]) if hit.size else None

    def cell(self, index):
        sides = None
        if self.cell_sides is not None:
            sides = tuple(float(s) for s in self.cell_sides[index])
        return Cell(
            kind=self.kind,
            vertex_ids=tuple(int(v) for v in self.cells[index]),
            coords=self.vertices[self.cells[index]],
            measure=float(self.cell_measures[index]),
            sides=sides,
            faces=tuple(int(f) for f in self.cell_faces[index]),
            face_signs=tuple(int(s) for s in self.cell_face_signs[index]),
        )

    def face(self, index):
        return Face(
            vertex_ids=tuple(int(v) for v in self.faces[index]),
            measure=float(self.face_measures[index]),
            normal=self.face_normals[index],
            midpoint=self.face_midpoints[index],
            h=float(self.face_sizes[index]),
            cells=tuple(int(c) for c in self.face_cells[index] if c >= 0),
            tag=self.face_tag(index),
        )


def outward_normals(kind, coords):
    nc = coords.shape[0]
    if kind is CellKind.TRIANGLE:
        local = np.asarray(LOCAL_FACES[kind])
        start = coords[:, local[:, 0]]
        end = coords[:, local[:, 1]]
        tangent = end - start
        length = np.linalg.norm(tangent, axis=2, keepdims=True)
        return np.stack([tangent[..., 1], -tangent[..., 0]], axis=2) / length
    dim = CELL_DIM[kind]
    normals = np.zeros((nc, 2 * dim, dim))
    for axis in range(dim):
        normals[:, 2 * axis, axis] = -1.0
        normals[:, 2 * axis + 1, axis] = 1.0
    return normals


def cell_geometry(kind, coords):
    if kind is CellKind.TRIANGLE:
        d1 = coords[:, 1] - coords[:, 0]
        d2 = coords[:, 2] - coords[:, 0]
        measures = 0.5 * (d1[:, 0] * d2[:, 1] - d1[:, 1] * d2[:, 0])
        edges = np.stack([
            coords[:, 2] - coords[:, 1],
            coords[:, 0] - coords[:, 2],
            coords[:, 1] - coords[:, 0],
        ], axis=1)
        diameters = np.linalg.norm(edges, axis=2).max(axis=1)
        return measures, diameters, None
    sides = coords[:, OPPOSITE_CORNER[kind]] - coords[:, 0]
    if np.any(sides <= 0):
        raise MeshError('Box cells need positive side lengths along every axis')
    return np.prod(sides, axis=1), np.linalg.norm(sides, axis=1), sides


def _face_geometry(dim, face_coords, normals):
    midpoints = face_coords.mean(axis=1)
    if dim == 2:
        measures = np.linalg.norm(face_coords[:, 1] - face_coords[:, 0], axis=1)
        return measures, midpoints
    extents = face_coords.max(axis=1) - face_coords.min(axis=1)
    normal_axis = np.argmax(np.abs(normals), axis=1)
    extents[np.arange(extents.shape[0]), normal_axis] = 1.0
    return np.prod(extents, axis=1), midpoints


def _tag_boundary(domain, midpoints):
    tags = np.empty(midpoints.shape[0], dtype='<U4')
    tags[:] = ''
    for axis in range(domain.shape[0]):
        lo, hi = domain[axis]
        tol = GEOMETRY_TOL * max(1.0, hi - lo)
        for bound, suffix in ((lo, 'min'), (hi, 'max')):
            hit = (tags == '') & (np.abs(midpoints[:, axis] - bound) <= tol)
            tags[hit] = AXES[axis] + suffix
    return tags


def build_mesh(vertices, cells, kind, domain, h):
    """Derive faces, orientation, geometry and boundary tags from cells

    Args:
        vertices: (nv, dim) vertex coordinates
        cells: (nc, nverts) vertex indices, counterclockwise for triangles
        kind: The CellKind of every cell
        domain: (dim, 2) bounds of the axis-aligned domain
        h: Characteristic mesh size reported for this mesh

    Raises:
        MeshError: degenerate or clockwise cells, non-conforming faces
    """
    vertices = np.array(vertices, dtype=float)
    cells = np.array(cells, dtype=np.int64)
    domain = np.array(domain, dtype=float)
    dim = CELL_DIM[kind]
    if vertices.ndim != 2 or vertices.shape[1] != dim:
        raise MeshError(f'{kind.value} meshes need {dim}D vertices')

    coords = vertices[cells]
    measures, diameters, sides = cell_geometry(kind, coords)
    if np.any(measures <= 0):
        bad = int(np.flatnonzero(measures <= 0)[0])
        raise MeshError(f'Cell {bad} has non-positive measure {measures[bad]}')

    local = np.asarray(LOCAL_FACES[kind])
    nc, nfc = cells.shape[0], local.shape[0]
    entry_vertices = cells[:, local].reshape(nc * nfc, -1)
    keys = np.sort(entry_vertices, axis=1)
    _, first, inverse = np.unique(keys, axis=0, return_index=True, return_inverse=True)
    inverse = inverse.reshape(-1)
    _, last_reversed = np.unique(keys[::-1], axis=0, return_index=True)
    last = keys.shape[0] - 1 - last_reversed

    counts = np.bincount(inverse, minlength=first.shape[0])
    if counts.max() > 2:
        raise MeshError('A face is shared by more than two cells')

    entry_cell = np.repeat(np.arange(nc), nfc)
    face_cells = np.stack([entry_cell[first], entry_cell[last]], axis=1)
    face_cells[counts == 1, 1] = -1

    outward = outward_normals(kind, coords).reshape(nc * nfc, dim)
    face_normals = outward[first]
    signs = np.where(np.arange(nc * nfc) == first[inverse], 1, -1)
    alignment = np.einsum('ed,ed->e', outward, face_normals[inverse])
    if np.any(np.abs(alignment - signs) > 1e-10):
        raise MeshError('Incident cells disagree on a face normal')

    faces = entry_vertices[first]
    face_measures, face_midpoints = _face_geometry(dim, vertices[faces], face_normals)

    boundary_faces = np.flatnonzero(counts == 1)
    boundary_tags = _tag_boundary(domain, face_midpoints[boundary_faces])
    if np.any(boundary_tags == ''):
        bad = int(boundary_faces[np.flatnonzero(boundary_tags == '')[0]])
        raise MeshError(
            f'Face {bad} at {face_midpoints[bad]} has a single cell but is not on the '
            'domain boundary (hanging vertex)'
        )

    total = math.fsum(measures)
    expected = float(np.prod(domain[:, 1] - domain[:, 0]))
    if abs(total - expected) > GEOMETRY_TOL * expected:
        raise MeshError(f'Cells cover {total!r}, the domain measures {expected!r}')

    return Mesh(
        kind=kind,
        vertices=vertices,
        cells=cells,
        faces=faces,
        cell_faces=inverse.reshape(nc, nfc),
        cell_face_signs=signs.reshape(nc, nfc),
        face_cells=face_cells,
        face_normals=face_normals,
        face_measures=face_measures,
        face_midpoints=face_midpoints,
        face_sizes=diameters[face_cells[:, 0]],
        cell_measures=measures,
        cell_diameters=diameters,
        cell_sides=sides,
        boundary_faces=boundary_faces,
        boundary_tags=boundary_tags,
        domain=domain,
        h=float(h),
    )


def _check_positive(**values):
    for name, value in values.items():
        if int(value) != value or value < 1:
            raise MeshError(f'{name} must be a positive integer, got {value!r}')


def structured_triangular(nx, ny, domain, h, diagonal=Diagonal.FALLING):
    """Split an nx by ny grid of rectangles into two triangles each.

    FALLING cuts every rectangle from its upper-left to its lower-right
    corner, RISING from lower-left to upper-right, and CENTRED picks in each
    rectangle the diagonal whose line passes through the domain centre when
    the grid is symmetric about it.
    """
    _check_positive(nx=nx, ny=ny)
    diagonal = Diagonal(diagonal)
    (x0, x1), (y0, y1) = domain
    xs = np.linspace(x0, x1, nx + 1)
    ys = np.linspace(y0, y1, ny + 1)
    gx, gy = np.meshgrid(xs, ys)
    vertices = np.column_stack([gx.ravel(), gy.ravel()])

    i, j = np.meshgrid(np.arange(nx), np.arange(ny))
    a = (j * (nx + 1) + i).ravel()
    b = a + 1
    c = a + nx + 2
    d = a + nx + 1
    if diagonal is Diagonal.RISING:
        rising = np.ones(a.size, dtype=bool)
    elif diagonal is Diagonal.FALLING:
        rising = np.zeros(a.size, dtype=bool)
    else:
        cx = (xs[:-1] + xs[1:])[i.ravel()] / 2.0 - (x0 + x1) / 2.0
        cy = (ys[:-1] + ys[1:])[j.ravel()] / 2.0 - (y0 + y1) / 2.0
        rising = cx * cy > 0

    cells = np.empty((2 * nx * ny, 3), dtype=np.int64)
    cells[0::2] = np.where(rising[:, None], np.column_stack([a, b, c]), np.column_stack([a, b, d]))
    cells[1::2] = np.where(rising[:, None], np.column_stack([a, c, d]), np.column_stack([b, c, d]))
    return build_mesh(vertices, cells, CellKind.TRIANGLE, domain, h)


def uniform_triangular(n, domain=((0.0, 1.0), (0.0, 1.0)), diagonal=Diagonal.FALLING):
    _check_positive(n=n)
    width = max(hi - lo for lo, hi in domain)
    return structured_triangular(n, n, domain, width / n, diagonal)


def anisotropic_triangular(k, n):
    """n columns by kn rows on the unit square, reported with h = 1/n.

    The rows follow the k times faster oscillation of the anisotropic
    solutions in y.
    """
    _check_positive(k=k, n=n)
    return structured_triangular(n, k * n, ((0.0, 1.0), (0.0, 1.0)), 1.0 / n)


def uniform_rectangular(n, domain=((0.0, 1.0), (0.0, 1.0))):
    _check_positive(n=n)
    (x0, x1), (y0, y1) = domain
    gx, gy = np.meshgrid(np.linspace(x0, x1, n + 1), np.linspace(y0, y1, n + 1))
    vertices = np.column_stack([gx.ravel(), gy.ravel()])
    i, j = np.meshgrid(np.arange(n), np.arange(n))
    a = (j * (n + 1) + i).ravel()
    cells = np.column_stack([a, a + 1, a + n + 2, a + n + 1])
    width = max(x1 - x0, y1 - y0)
    return build_mesh(vertices, cells, CellKind.RECT, domain, width / n)


def uniform_box3d(n):
    _check_positive(n=n)
    ticks = np.linspace(0.0, 1.0, n + 1)
    gx, gy, gz = np.meshgrid(ticks, ticks, ticks, indexing='ij')
    vertices = np.column_stack([gx.ravel('F'), gy.ravel('F'), gz.ravel('F')])

    stride = np.array([1, n + 1, (n + 1) ** 2])
    offsets = np.array([
        ((l & 1), (l >> 1) & 1, (l >> 2) & 1) for l in range(8)
    ]) @ stride
    ci, cj, ck = np.meshgrid(np.arange(n), np.arange(n), np.arange(n), indexing='ij')
    base = (ci + (n + 1) * (cj + (n + 1) * ck)).ravel('F')
    cells = base[:, None] + offsets[None, :]
    return build_mesh(vertices, cells, CellKind.BOX, ((0.0, 1.0),) * 3, 1.0 / n)


def _refine_triangles(mesh, marked, h):
    if mesh.kind is not CellKind.TRIANGLE:
        raise MeshError(f'Red refinement needs a triangular mesh, got {mesh.kind.value}')

    red = np.zeros(mesh.n_cells, dtype=bool)
    red[marked] = True
    # closure: a cell with two or more split edges is split completely
    while True:
        split = np.zeros(mesh.n_faces, dtype=bool)
        split[mesh.cell_faces[red].ravel()] = True
        hanging = split[mesh.cell_faces].sum(axis=1)
        closure = ~red & (hanging >= 2)
        if not closure.any():
            break
        red |= closure
    green = ~red & (hanging == 1)

    split_faces = np.flatnonzero(split)
    midpoint_ids = np.full(mesh.n_faces, -1, dtype=np.int64)
    midpoint_ids[split_faces] = mesh.n_vertices + np.arange(split_faces.size)
    vertices = np.vstack([mesh.vertices, mesh.face_midpoints[split_faces]])

    v = mesh.cells
    m = midpoint_ids[mesh.cell_faces]
    counts = np.where(red, 4, np.where(green, 2, 1))
    offsets = np.concatenate([[0], np.cumsum(counts)[:-1]])
    cells = np.empty((counts.sum(), 3), dtype=np.int64)

    r = np.flatnonzero(red)
    cells[offsets[r]] = np.column_stack([v[r, 0], m[r, 2], m[r, 1]])
    cells[offsets[r] + 1] = np.column_stack([m[r, 2], v[r, 1], m[r, 0]])
    cells[offsets[r] + 2] = np.column_stack([m[r, 1], m[r, 0], v[r, 2]])
    cells[offsets[r] + 3] = np.column_stack([m[r, 0], m[r, 1], m[r, 2]])

    g = np.flatnonzero(green)
    edge = np.argmax(split[mesh.cell_faces[g]], axis=1)
    apex = v[g, edge]
    left = v[g, (edge + 1) % 3]
    right = v[g, (edge + 2) % 3]
    mid = m[g, edge]
    cells[offsets[g]] = np.column_stack([apex, left, mid])
    cells[offsets[g] + 1] = np.column_stack([apex, mid, right])

    keep = np.flatnonzero(~red & ~green)
    cells[offsets[keep]] = v[keep]

    logger.debug(f'Refined {r.size} cells red and {g.size} cells green')
    return build_mesh(vertices, cells, CellKind.TRIANGLE, mesh.domain, h)


def refine_red(mesh):
    """Split every triangle into four similar triangles through its edge midpoints."""
    return _refine_triangles(mesh, np.arange(mesh.n_cells), mesh.h / 2.0)


def locally_refined_kellogg(base_n, extra_levels):
    """Uniform mesh of (-1, 1)^2 red-refined around the origin extra_levels times.

    The base mesh is cut along the diagonals through the origin, so eight
    triangles meet there and every local refinement adds 32 cells.

    Neighbours of the refined cells are closed with green bisection so that
    the mesh stays conforming. The origin has to be a vertex so that every
    cell lies in exactly one quadrant.
    """
    _check_positive(base_n=base_n)
    if base_n < 2 or base_n % 2:
        raise MeshError(f'base_n must be even so the origin is a vertex, got {base_n}')
    if int(extra_levels) != extra_levels or extra_levels < 0:
        raise MeshError(f'extra_levels must be a non-negative integer, got {extra_levels!r}')

    mesh = uniform_triangular(base_n, ((-1.0, 1.0), (-1.0, 1.0)), Diagonal.CENTRED)
    for _ in range(extra_levels):
        origin = int(np.argmin(np.linalg.norm(mesh.vertices, axis=1)))
        touching = np.flatnonzero(np.any(mesh.cells == origin, axis=1))
        mesh = _refine_triangles(mesh, touching, mesh.h)
    logger.info(f'Kellogg mesh base_n={base_n} extra_levels={extra_levels}: {mesh.n_cells} triangles')
    return mesh


def format_mesh(mesh):
    lines = [
        'wg-fem-mesh 1',
        f'dim {mesh.dim} kind {mesh.kind.value} h {mesh.h!r}',
        f'vertices {mesh.n_vertices}',
    ]
    for index, point in enumerate(mesh.vertices):
        lines.append(' '.join([str(index)] + [f'{c:.17g}' for c in point]))
    lines.append(f'cells {mesh.n_cells}')
    for index, cell in enumerate(mesh.cells):
        lines.append(' '.join(str(v) for v in (index, *cell)))
    lines.append(f'faces {mesh.n_faces}')
    for index, face in enumerate(mesh.faces):
        lines.append(' '.join(str(v) for v in (index, *face, *mesh.face_cells[index])))
    lines.append(f'boundary {mesh.boundary_faces.size}')
    for face, tag in zip(mesh.boundary_faces, mesh.boundary_tags):
        lines.append(f'{face} {tag}')
    return '\n'.join(lines) + '\n'


def dump_mesh(mesh, path):
    with open(path, 'w') as stream:
        stream.write(format_mesh(mesh))
    logger.info(f'Mesh with {mesh.n_cells} cells written to {path}')
