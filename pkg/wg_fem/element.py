# -*- coding: utf-8 -*-
# Copyright 2026 The wg-fem Authors  (see the AUTHORS file)
# SPDX-License-Identifier: GPL-3.0+

"""Local weak Galerkin objects for the lowest order elements.

Every routine works on a batch of cells of one kind: coordinates have shape
(nc, nverts, d) and the returned matrices carry the cell index first. A
single cell is a batch of one.

For a cell K with interior basis phi_0 = 1, face indicators phi_b,m and
gradient basis chi_i the local matrices are

    D[i, j] = (chi_j, chi_i)_K
    Z[i, 0] = (div chi_i, phi_0)_K
    T[i, m] = <chi_i . n, phi_b,m>_dK
    A[i, j] = (A chi_j, chi_i)_K
    B[0, k] = (beta . chi_k, phi_0)_K
    C[0, 0] = (gamma phi_0, phi_0)_K

and the weak gradient of v = {v0, vb} has coefficients D^-1 (-Z v0 + T vb).
"""

import abc
import enum
import logging
from dataclasses import dataclass

import numpy as np

from .exceptions import ElementError, MeshError
from .mesh import LOCAL_FACES, Cell, CellKind, cell_geometry, outward_normals
from .quadrature import DEFAULT_ORDER, cell_rule, map_to_cells, map_to_local_faces

logger = logging.getLogger(__name__)


class Approach(enum.Enum):
    """Gradient basis on triangles: RT0 edge basis (I) or mean-zero basis (II)."""

    I = "I"
    II = "II"


@dataclass(frozen=True)
class Coefficients:
    """Vectorised coefficient fields evaluated on points of shape (..., d).

    diffusion returns (..., d, d), convection (..., d) and reaction (...).
    A missing convection or reaction field is zero.
    """

    diffusion: object
    convection: object = None
    reaction: object = None

    @property
    def symmetric(self):
        return self.convection is None


def identity_diffusion(dim):
    eye = np.eye(dim)

    def diffusion(points):
        return np.broadcast_to(eye, points.shape[:-1] + (dim, dim))

    return diffusion


@dataclass(frozen=True, eq=False)
class LocalKernel:
    dk: np.ndarray
    zk: np.ndarray
    tk: np.ndarray
    ak: np.ndarray
    bk: np.ndarray
    ck: np.ndarray
    g0: np.ndarray
    gb: np.ndarray
    stiffness: np.ndarray

    @property
    def m00(self):
        return self.stiffness[:, :1, :1]

    @property
    def m0b(self):
        return self.stiffness[:, :1, 1:]

    @property
    def mb0(self):
        return self.stiffness[:, 1:, :1]

    @property
    def mbb(self):
        return self.stiffness[:, 1:, 1:]


def _as_batch(coords):
    coords = np.asarray(coords, dtype=float)
    if coords.ndim == 2:
        coords = coords[None]
    if coords.ndim != 3:
        raise ElementError(f"Cell coordinates must have shape (nc, nverts, d), got {coords.shape}")
    return coords


class WGBasis(metaclass=abc.ABCMeta):
    """Lowest order WG basis on a batch of cells of one kind"""

    n0 = 1

    def __init__(self, kind, coords):
        self.kind = kind
        self.coords = _as_batch(coords)
        try:
            measures, diameters, sides = cell_geometry(kind, self.coords)
        except MeshError as e:
            raise ElementError(str(e)) from e
        if np.any(measures <= 0):
            raise ElementError(f"Degenerate {kind.value} cell with measure {measures.min()}")
        self.measures = measures
        self.diameters = diameters
        self.sides = sides
        self.normals = outward_normals(kind, self.coords)

    @property
    def n_cells(self):
        return self.coords.shape[0]

    @property
    def dim(self):
        return self.coords.shape[2]

    @property
    def nb(self):
        return len(LOCAL_FACES[self.kind])

    @property
    def nv(self):
        return self.nb

    @property
    def face_measures(self):
        return self._face_measures()

    @abc.abstractmethod
    def _face_measures(self):
        pass

    @abc.abstractmethod
    def chi(self, points):
        """Gradient basis fields at points (nc, nq, d), shape (nc, nq, nv, d)"""
        pass

    @abc.abstractmethod
    def div_chi(self):
        """Constant divergence of every chi_i, shape (nc, nv)"""
        pass

    @abc.abstractmethod
    def closed_dzt(self):
        pass

    @abc.abstractmethod
    def closed_dk_inverse(self):
        pass

    def phi0(self, points):
        return np.ones(points.shape[:-1])

    def phib(self, face):
        """Indicator of local face `face` as a coefficient vector of length nb"""
        values = np.zeros(self.nb)
        values[face] = 1.0
        return values

    def chi_dot_n(self, points, face):
        """Normal flux of every chi_i through local face `face` at points (nc, nq, d)"""
        return np.einsum("cqid,cd->cqi", self.chi(points), self.normals[:, face])

    def quadrature_dzt(self, order=DEFAULT_ORDER):
        points, weights = map_to_cells(self.kind, self.coords, cell_rule(self.kind, order))
        chi = self.chi(points)
        dk = np.einsum("cq,cqid,cqjd->cij", weights, chi, chi)
        zk = np.einsum("cq,cq,ci->ci", weights, self.phi0(points), self.div_chi())[:, :, None]

        face_points, face_weights = map_to_local_faces(self.kind, self.coords, order)
        nc, nfc, nq, dim = face_points.shape
        chi_faces = self.chi(face_points.reshape(nc, nfc * nq, dim))
        chi_faces = chi_faces.reshape(nc, nfc, nq, self.nv, dim)
        flux = np.einsum("cfqid,cfd->cfqi", chi_faces, self.normals)
        # T_if = <phi_b,f, chi_i . n> over the whole cell boundary
        indicators = np.stack([self.phib(face) for face in range(self.nb)])
        tk = np.einsum("cgq,cgqi,fg->cif", face_weights, flux, indicators)
        return dk, zk, tk


def triangle_edges(coords):
    """Edge vectors e_i (opposite vertex i), their lengths and squared lengths l_i"""
    coords = _as_batch(coords)
    edges = np.stack([
        coords[:, 2] - coords[:, 1],
        coords[:, 0] - coords[:, 2],
        coords[:, 1] - coords[:, 0],
    ], axis=1)
    squared = np.einsum("ced,ced->ce", edges, edges)
    return edges, np.sqrt(squared), squared


def _pairs():
    # (i, j, k) with k the remaining index
    return ((0, 1, 2), (0, 2, 1), (1, 2, 0))


class TriangleRT0Basis(WGBasis):

    def __init__(self, coords, approach=Approach.II):
        super().__init__(CellKind.TRIANGLE, coords)
        self.approach = Approach(approach)
        self.edges, self.lengths, self.squared = triangle_edges(self.coords)
        self.l123 = self.squared.sum(axis=1)
        self.centroids = self.coords.mean(axis=1)

    def _face_measures(self):
        return self.lengths

    def chi(self, points):
        if self.approach is Approach.I:
            scale = self.lengths / (2.0 * self.measures[:, None])
            shifted = points[:, :, None, :] - self.coords[:, None, :, :]
            return scale[:, None, :, None] * shifted
        nc, nq = points.shape[:2]
        chi = np.zeros((nc, nq, 3, 2))
        chi[:, :, 0, 0] = 1.0
        chi[:, :, 1, 1] = 1.0
        chi[:, :, 2, :] = points - self.centroids[:, None, :]
        return chi

    def div_chi(self):
        if self.approach is Approach.I:
            return self.lengths / self.measures[:, None]
        div = np.zeros((self.n_cells, 3))
        div[:, 2] = 2.0
        return div

    def closed_dzt(self):
        nc = self.n_cells
        area = self.measures
        if self.approach is Approach.I:
            m = np.empty((nc, 3, 3))
            for i in range(3):
                m[:, i, i] = 3.0 * self.l123 - 4.0 * self.squared[:, i]
            for i, j, k in _pairs():
                m[:, i, j] = m[:, j, i] = self.l123 - 4.0 * self.squared[:, k]
            scaled = self.lengths[:, :, None] * m * self.lengths[:, None, :]
            dk = scaled / (48.0 * area[:, None, None])
            zk = self.lengths[:, :, None].copy()
            tk = np.zeros((nc, 3, 3))
            tk[:, np.arange(3), np.arange(3)] = self.lengths
            return dk, zk, tk

        dk = np.zeros((nc, 3, 3))
        dk[:, 0, 0] = area
        dk[:, 1, 1] = area
        dk[:, 2, 2] = area * self.l123 / 36.0
        zk = np.zeros((nc, 3, 1))
        zk[:, 2, 0] = 2.0 * area
        tk = np.empty((nc, 3, 3))
        # |e_j| n_j = (dy, -dx) along edge j
        tk[:, 0, :] = self.edges[:, :, 1]
        tk[:, 1, :] = -self.edges[:, :, 0]
        tk[:, 2, :] = (2.0 * area / 3.0)[:, None]
        return dk, zk, tk

    def closed_dk_inverse(self):
        if self.approach is Approach.I:
            return dkinv_closed_triangle(self.coords)
        inverse = np.zeros((self.n_cells, 3, 3))
        inverse[:, 0, 0] = 1.0 / self.measures
        inverse[:, 1, 1] = 1.0 / self.measures
        inverse[:, 2, 2] = 36.0 / (self.measures * self.l123)
        return inverse


class BoxRT0Basis(WGBasis):
    """Q0/Q0/RT0 on axis-aligned rectangles (4 faces) or boxes (6 faces).

    For the axis a with lower corner lo and side s the pair
    ((x_a - lo)/s - 1) e_a, ((x_a - lo)/s) e_a carries unit flux through the
    faces x_a = lo and x_a = lo + s respectively.
    """

    def __init__(self, coords):
        coords = _as_batch(coords)
        kind = CellKind.RECT if coords.shape[2] == 2 else CellKind.BOX
        super().__init__(kind, coords)
        self.lower = self.coords[:, 0]

    def _face_measures(self):
        return np.repeat(self.measures[:, None] / self.sides, 2, axis=1)

    def chi(self, points):
        nc, nq, dim = points.shape
        chi = np.zeros((nc, nq, 2 * dim, dim))
        for axis in range(dim):
            t = (points[:, :, axis] - self.lower[:, None, axis]) / self.sides[:, None, axis]
            chi[:, :, 2 * axis, axis] = t - 1.0
            chi[:, :, 2 * axis + 1, axis] = t
        return chi

    def div_chi(self):
        return np.repeat(1.0 / self.sides, 2, axis=1)

    def _blockdiag(self, block, scale):
        out = np.zeros((self.n_cells, self.nv, self.nv))
        for axis in range(self.dim):
            span = slice(2 * axis, 2 * axis + 2)
            out[:, span, span] = scale[:, None, None] * np.asarray(block, dtype=float)
        return out

    def closed_dzt(self):
        dk = self._blockdiag([[2.0, -1.0], [-1.0, 2.0]], self.measures / 6.0)
        face_measures = self._face_measures()
        zk = face_measures[:, :, None].copy()
        tk = np.zeros((self.n_cells, self.nv, self.nb))
        tk[:, np.arange(self.nv), np.arange(self.nb)] = face_measures
        return dk, zk, tk

    def closed_dk_inverse(self):
        return self._blockdiag([[2.0, 1.0], [1.0, 2.0]], 2.0 / self.measures)


def _cell_coords(cell):
    return cell.coords if isinstance(cell, Cell) else cell


def basis_triangle_rt0(cell, approach=Approach.II):
    return TriangleRT0Basis(_cell_coords(cell), approach)


def basis_box_rt0(cell):
    return BoxRT0Basis(_cell_coords(cell))


def create_basis(kind, coords, approach=Approach.II):
    """Create the WG basis for a batch of cells

    Args:
        kind: CellKind of the cells
        coords: (nc, nverts, d) vertex coordinates
        approach: Triangle gradient basis, ignored for rectangles and boxes

    Raises:
        ElementError: If the cell kind is not supported
    """
    kind = CellKind(kind)
    if kind is CellKind.TRIANGLE:
        return TriangleRT0Basis(coords, approach)
    elif kind in (CellKind.RECT, CellKind.BOX):
        return BoxRT0Basis(coords)
    else:
        raise ElementError(f"Unsupported cell kind: {kind}")


def local_dzt(basis, method="closed", order=DEFAULT_ORDER):
    if method == "closed":
        return basis.closed_dzt()
    elif method == "quadrature":
        return basis.quadrature_dzt(order)
    else:
        raise ElementError(f"Unknown D/Z/T method: {method}")


def dkinv_closed_triangle(cell):
    """Closed form inverse of D_K for the RT0 edge basis.

    D_K^-1 = T^-t (16|K|/l123 J + N / (2|K|)) T^-1 with T = diag(|e_i|), J
    the matrix of ones, N_ii = 2 l_i and N_ij = l_k - l_i - l_j.
    """
    coords = _as_batch(_cell_coords(cell))
    area, _, _ = cell_geometry(CellKind.TRIANGLE, coords)
    if np.any(area <= 0):
        raise ElementError(f"Degenerate triangle with area {area.min()}")
    _, lengths, squared = triangle_edges(coords)
    l123 = squared.sum(axis=1)

    n = np.empty((coords.shape[0], 3, 3))
    for i in range(3):
        n[:, i, i] = 2.0 * squared[:, i]
    for i, j, k in _pairs():
        n[:, i, j] = n[:, j, i] = squared[:, k] - squared[:, i] - squared[:, j]
    middle = (16.0 * area / l123)[:, None, None] + n / (2.0 * area[:, None, None])
    return middle / (lengths[:, :, None] * lengths[:, None, :])


def weak_gradient_operators(dk, zk, tk, dk_inverse=None):
    """G0 = -D^-1 Z and Gb = D^-1 T, so that grad_d v = G0 v0 + Gb vb"""
    stacked = np.concatenate([-zk, tk], axis=2)
    if dk_inverse is not None:
        ops = dk_inverse @ stacked
    else:
        try:
            ops = np.linalg.solve(dk, stacked)
        except np.linalg.LinAlgError as e:
            raise ElementError(f"Singular D_K: {e}") from e
    if not np.all(np.isfinite(ops)):
        raise ElementError("Singular D_K: non-finite weak gradient operators")
    n0 = zk.shape[2]
    return ops[:, :, :n0], ops[:, :, n0:]


def discrete_gradient(basis, v0, vb, dk_inverse=None):
    """Coefficients of the weak gradient in the chi basis, shape (nc, nv)"""
    dk, zk, tk = basis.closed_dzt()
    if dk_inverse is None:
        dk_inverse = basis.closed_dk_inverse()
    g0, gb = weak_gradient_operators(dk, zk, tk, dk_inverse)
    v0 = np.asarray(v0, dtype=float).reshape(basis.n_cells, basis.n0)
    vb = np.asarray(vb, dtype=float).reshape(basis.n_cells, basis.nb)
    return np.einsum("cij,cj->ci", g0, v0) + np.einsum("cij,cj->ci", gb, vb)


def _evaluate(func, points, shape):
    return np.broadcast_to(np.asarray(func(points), dtype=float), shape)


def local_abc(basis, coefficients, order=DEFAULT_ORDER):
    points, weights = map_to_cells(basis.kind, basis.coords, cell_rule(basis.kind, order))
    nc, nq, dim = points.shape
    chi = basis.chi(points)

    diffusion = _evaluate(coefficients.diffusion, points, (nc, nq, dim, dim))
    ak = np.einsum("cq,cqde,cqje,cqid->cij", weights, diffusion, chi, chi)

    bk = np.zeros((nc, basis.n0, basis.nv))
    if coefficients.convection is not None:
        beta = _evaluate(coefficients.convection, points, (nc, nq, dim))
        bk[:, 0, :] = np.einsum("cq,cqd,cqkd->ck", weights, beta, chi)

    ck = np.zeros((nc, basis.n0, basis.n0))
    if coefficients.reaction is not None:
        gamma = _evaluate(coefficients.reaction, points, (nc, nq))
        ck[:, 0, 0] = np.einsum("cq,cq->c", weights, gamma)
    return ak, bk, ck


def local_stiffness(dk, zk, tk, ak, bk, ck, dk_inverse=None):
    """Assemble M_K from the local matrices.

    M00 = G0' A G0 + B G0 + C, M0b = G0' A Gb + B Gb, Mb0 = Gb' A G0 and
    Mbb = Gb' A Gb. A face test function has no interior part, so Mb0 has no
    convection term.
    """
    g0, gb = weak_gradient_operators(dk, zk, tk, dk_inverse)
    g0t = np.swapaxes(g0, 1, 2)
    gbt = np.swapaxes(gb, 1, 2)
    m00 = g0t @ ak @ g0 + bk @ g0 + ck
    m0b = g0t @ ak @ gb + bk @ gb
    mb0 = gbt @ ak @ g0
    mbb = gbt @ ak @ gb
    stiffness = np.concatenate([
        np.concatenate([m00, m0b], axis=2),
        np.concatenate([mb0, mbb], axis=2),
    ], axis=1)
    return LocalKernel(
        dk=dk, zk=zk, tk=tk, ak=ak, bk=bk, ck=ck, g0=g0, gb=gb, stiffness=stiffness,
    )


def compute_kernels(kind, coords, coefficients, approach=Approach.II, order=DEFAULT_ORDER):
    """Closed form D/Z/T with quadrature coefficient matrices for a batch of cells"""
    basis = create_basis(kind, coords, approach)
    dk, zk, tk = basis.closed_dzt()
    ak, bk, ck = local_abc(basis, coefficients, order)
    return local_stiffness(dk, zk, tk, ak, bk, ck, dk_inverse=basis.closed_dk_inverse())


def bilinear_form_matrix(basis, coefficients, order=DEFAULT_ORDER):
    """Evaluate a(phi_j, phi_i) on every pair of local basis functions.

    Weak gradients come from a quadrature built D/Z/T and a generic solve, and
    the three terms of the bilinear form are integrated pointwise, so the
    result is independent of the block formulas of local_stiffness.
    """
    dk, zk, tk = basis.quadrature_dzt(order)
    try:
        grads = np.linalg.solve(dk, np.concatenate([-zk, tk], axis=2))
    except np.linalg.LinAlgError as e:
        raise ElementError(f"Singular D_K: {e}") from e

    points, weights = map_to_cells(basis.kind, basis.coords, cell_rule(basis.kind, order))
    nc, nq, dim = points.shape
    fields = np.einsum("cqid,cin->cqnd", basis.chi(points), grads)
    diffusion = _evaluate(coefficients.diffusion, points, (nc, nq, dim, dim))
    matrix = np.einsum("cq,cqde,cqje,cqid->cij", weights, diffusion, fields, fields)

    interior = np.zeros(basis.n0 + basis.nb)
    interior[:basis.n0] = 1.0
    if coefficients.convection is not None:
        beta = _evaluate(coefficients.convection, points, (nc, nq, dim))
        transport = np.einsum("cq,cqd,cqjd->cj", weights, beta, fields)
        matrix += interior[None, :, None] * transport[:, None, :]
    if coefficients.reaction is not None:
        gamma = _evaluate(coefficients.reaction, points, (nc, nq))
        mass = np.einsum("cq,cq->c", weights, gamma)
        matrix += mass[:, None, None] * np.outer(interior, interior)[None]
    return matrix
