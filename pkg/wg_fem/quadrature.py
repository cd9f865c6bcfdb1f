# Copyright 2026 The wg-fem Authors
# SPDX-License-Identifier: GPL-3.0-or-later

"""Gauss rules on the reference segment [0, 1], the reference triangle
{x, y >= 0, x + y <= 1}, the unit square and the unit cube, plus their
affine images on mesh cells and faces."""

import logging
from dataclasses import dataclass

import numpy as np
from numpy.polynomial.legendre import leggauss
from scipy.special import roots_jacobi

from .exceptions import QuadratureError
from .mesh import CELL_DIM, LOCAL_FACES, OPPOSITE_CORNER, CellKind

logger = logging.getLogger(__name__)

MIN_ORDER = 1
MAX_ORDER = 10
DEFAULT_ORDER = 5


@dataclass(frozen=True, eq=False)
class QuadRule:
    points: np.ndarray
    weights: np.ndarray
    exact_degree: int

    @property
    def dim(self):
        return self.points.shape[1]

    @property
    def size(self):
        return self.weights.shape[0]


def _check_order(order):
    if int(order) != order or not MIN_ORDER <= order <= MAX_ORDER:
        raise QuadratureError(f'Quadrature order must be in [{MIN_ORDER}, {MAX_ORDER}], got {order!r}')
    return int(order)


def segment_rule(order):
    """Gauss-Legendre rule with `order` points on [0, 1]."""
    order = _check_order(order)
    nodes, weights = leggauss(order)
    return QuadRule(
        points=((nodes + 1.0) / 2.0)[:, None],
        weights=weights / 2.0,
        exact_degree=2 * order - 1,
    )


def triangle_rule(order):
    """Collapsed (conical product) rule with order**2 points.

    The collapsed direction uses Gauss-Jacobi nodes for the weight (1 - x),
    so the one point rule is the centroid rule.
    """
    order = _check_order(order)
    nodes, weights = roots_jacobi(order, 1.0, 0.0)
    x = (nodes + 1.0) / 2.0
    wx = weights / 4.0
    inner = segment_rule(order)
    t = inner.points[:, 0]
    px = np.repeat(x, order)
    py = np.tile(t, order) * (1.0 - px)
    return QuadRule(
        points=np.column_stack([px, py]),
        weights=np.outer(wx, inner.weights).ravel(),
        exact_degree=2 * order - 1,
    )


def tensor_rule(order, dim):
    if dim not in (2, 3):
        raise QuadratureError(f'Tensor rules exist for dim 2 or 3, got {dim!r}')
    line = segment_rule(order)
    grids = np.meshgrid(*([line.points[:, 0]] * dim), indexing='ij')
    weights = np.meshgrid(*([line.weights] * dim), indexing='ij')
    return QuadRule(
        points=np.column_stack([g.ravel() for g in grids]),
        weights=np.prod([w.ravel() for w in weights], axis=0),
        exact_degree=line.exact_degree,
    )


def cell_rule(kind, order):
    if kind is CellKind.TRIANGLE:
        return triangle_rule(order)
    return tensor_rule(order, CELL_DIM[kind])


def map_to_cells(kind, coords, rule):
    """Physical quadrature points (nc, nq, d) and weights (nc, nq) on cells."""
    if kind is CellKind.TRIANGLE:
        origin = coords[:, 0]
        jacobian = np.stack([coords[:, 1] - origin, coords[:, 2] - origin], axis=1)
        points = origin[:, None, :] + np.einsum('qa,cad->cqd', rule.points, jacobian)
        det = np.abs(np.linalg.det(jacobian))
        return points, det[:, None] * rule.weights[None, :]
    origin = coords[:, 0]
    sides = coords[:, OPPOSITE_CORNER[kind]] - origin
    points = origin[:, None, :] + rule.points[None, :, :] * sides[:, None, :]
    return points, np.prod(sides, axis=1)[:, None] * rule.weights[None, :]


def map_to_faces(face_coords, order):
    """Physical quadrature on straight edges or axis-aligned rectangular faces.

    Args:
        face_coords: (..., nvf, d) vertex coordinates of each face
        order: Points per direction

    Returns:
        points (..., nq, d) and weights (..., nq)
    """
    lead = face_coords.shape[:-2]
    nvf, dim = face_coords.shape[-2:]
    flat = face_coords.reshape(-1, nvf, dim)
    if nvf == 2:
        rule = segment_rule(order)
        start = flat[:, 0]
        tangent = flat[:, 1] - start
        points = start[:, None, :] + rule.points[None, :, 0:1] * tangent[:, None, :]
        weights = np.linalg.norm(tangent, axis=1)[:, None] * rule.weights[None, :]
    elif nvf == 4 and dim == 3:
        rule = tensor_rule(order, 2)
        lo = flat.min(axis=1)
        extents = flat.max(axis=1) - lo
        in_plane = np.argsort(extents, axis=1)[:, 1:]
        span = np.zeros((flat.shape[0], 2, dim))
        rows = np.arange(flat.shape[0])
        for a in range(2):
            span[rows, a, in_plane[:, a]] = extents[rows, in_plane[:, a]]
        points = lo[:, None, :] + np.einsum('qa,fad->fqd', rule.points, span)
        area = extents[rows, in_plane[:, 0]] * extents[rows, in_plane[:, 1]]
        weights = area[:, None] * rule.weights[None, :]
    else:
        raise QuadratureError(f'No face rule for {nvf} vertices in {dim}D')
    nq = weights.shape[1]
    return points.reshape(*lead, nq, dim), weights.reshape(*lead, nq)


def map_to_local_faces(kind, coords, order):
    """Quadrature on every local face of every cell: (nc, nfc, nq, d), (nc, nfc, nq)."""
    local = np.asarray(LOCAL_FACES[kind])
    return map_to_faces(coords[:, local], order)


def integrate_cells(mesh, func, order):
    """Integral of a vectorised scalar function over every cell."""
    points, weights = map_to_cells(mesh.kind, mesh.cell_coords, cell_rule(mesh.kind, order))
    values = np.asarray(func(points), dtype=float)
    return np.einsum('cq,cq->c', weights, np.broadcast_to(values, weights.shape))


def integrate_faces(mesh, func, order, faces=None):
    face_ids = np.arange(mesh.n_faces) if faces is None else np.asarray(faces)
    points, weights = map_to_faces(mesh.vertices[mesh.faces[face_ids]], order)
    values = np.asarray(func(points), dtype=float)
    return np.einsum('fq,fq->f', weights, np.broadcast_to(values, weights.shape))
