# -*- coding: utf-8 -*-
# Copyright 2026 The wg-fem Authors  (see the AUTHORS file)
# SPDX-License-Identifier: GPL-3.0+

"""Projections of the exact solution, the six error metrics and convergence rates.

With e_h = u_h - Q_h u = {e0, eb}:

    grad_e    (sum_K int_K |grad_d e_h|^2)^1/2
    e0        (sum_K int_K |e0|^2)^1/2
    eb        (sum_F h_K int_F |eb|^2)^1/2, h_K the diameter of a cell owning F
    grad_err  (sum_K int_K |grad_d u_h - grad u|^2)^1/2
    u0_err    (sum_K int_K |u0 - u|^2)^1/2
    e0_max    max |e0| over all quadrature points
"""

import logging
import math
from dataclasses import dataclass, field

import numpy as np

from .element import Approach, create_basis, weak_gradient_operators
from .quadrature import DEFAULT_ORDER, cell_rule, integrate_cells, integrate_faces, map_to_cells

logger = logging.getLogger(__name__)

METRICS = ("grad_e", "e0", "eb", "grad_err", "u0_err", "e0_max")

METRIC_LABELS = {
    "grad_e": "|grad_d e_h|",
    "e0": "|e_0|",
    "eb": "|e_b|",
    "grad_err": "|grad_d u_h - grad u|",
    "u0_err": "|u_0 - u|",
    "e0_max": "|e_0|_inf",
}


@dataclass
class LevelRecord:
    level: int
    h: float
    n_cells: int
    n_dofs: int
    norms: dict
    iterations: int = 0
    residual: float = 0.0
    order: int = DEFAULT_ORDER


@dataclass
class ErrorReport:
    case: str
    levels: list = field(default_factory=list)
    order: int = DEFAULT_ORDER

    def add(self, record):
        self.levels.append(record)

    def series(self, metric):
        return [(record.h, record.norms[metric]) for record in self.levels]

    def rates(self):
        """Least-squares rate per metric, None for metrics that cannot be fitted"""
        if len(self.levels) < 2:
            return {}
        rates = {}
        for metric in METRICS:
            try:
                rates[metric] = fit_rate(self.series(metric))
            except ValueError as e:
                logger.warning(f"{self.case}: no rate for {metric}: {e}")
                rates[metric] = None
        return rates

    def pairwise(self):
        return {metric: pairwise_rates(self.series(metric)) for metric in METRICS}


def _check_levels(levels):
    levels = [(float(h), float(error)) for h, error in levels]
    if len(levels) < 2:
        raise ValueError(f"A rate needs at least 2 levels, got {len(levels)}")
    for h, error in levels:
        if not h > 0 or not error > 0 or not math.isfinite(error):
            raise ValueError(f"Rates need positive mesh sizes and errors, got h={h!r} error={error!r}")
    return np.array(levels)


def fit_rate(levels):
    """Least-squares slope of log(error) against log(h)"""
    data = _check_levels(levels)
    slope, _ = np.polyfit(np.log(data[:, 0]), np.log(data[:, 1]), 1)
    return float(slope)


def pairwise_rates(levels):
    data = _check_levels(levels)
    logs = np.log(data)
    return [float(r) for r in np.diff(logs[:, 1]) / np.diff(logs[:, 0])]


def project_exact(u, mesh, order=DEFAULT_ORDER):
    """Cell and face averages of u, the lowest order L2 projection Q_h u"""
    q0 = integrate_cells(mesh, u, order) / mesh.cell_measures
    qb = integrate_faces(mesh, u, order) / mesh.face_measures
    return q0, qb


def _weak_gradients(basis, v0, vb_local):
    dk, zk, tk = basis.closed_dzt()
    g0, gb = weak_gradient_operators(dk, zk, tk, basis.closed_dk_inverse())
    coefficients = g0[:, :, 0] * v0[:, None] + np.einsum("cij,cj->ci", gb, vb_local)
    return coefficients, dk


def error_norms(mesh, u0, ub, u, grad_u, approach=Approach.II, order=DEFAULT_ORDER):
    """The six error metrics of a discrete solution {u0, ub} against the exact u

    Args:
        mesh: The mesh the solution lives on
        u0: Cell values, shape (n_cells,)
        ub: Face values, shape (n_faces,)
        u: Exact solution on points (..., d)
        grad_u: Exact gradient on points (..., d), returning (..., d)
        approach: Gradient basis on triangles
        order: Quadrature order

    Returns:
        dict: metric name to value
    """
    u0 = np.asarray(u0, dtype=float)
    ub = np.asarray(ub, dtype=float)
    q0, qb = project_exact(u, mesh, order)
    e0 = u0 - q0
    eb = ub - qb

    basis = create_basis(mesh.kind, mesh.cell_coords, approach)
    grad_e, dk = _weak_gradients(basis, e0, eb[mesh.cell_faces])
    grad_e_sq = np.einsum("ci,cij,cj->c", grad_e, dk, grad_e)

    points, weights = map_to_cells(mesh.kind, mesh.cell_coords, cell_rule(mesh.kind, order))
    grad_h, _ = _weak_gradients(basis, u0, ub[mesh.cell_faces])
    field_h = np.einsum("cqid,ci->cqd", basis.chi(points), grad_h)
    exact_grad = np.broadcast_to(np.asarray(grad_u(points), dtype=float), field_h.shape)
    exact = np.broadcast_to(np.asarray(u(points), dtype=float), weights.shape)
    grad_err_sq = np.einsum("cq,cqd,cqd->c", weights, field_h - exact_grad, field_h - exact_grad)
    u0_err_sq = np.einsum("cq,cq->c", weights, (u0[:, None] - exact) ** 2)

    eb_sq = mesh.face_sizes * mesh.face_measures * eb ** 2

    return {
        "grad_e": math.sqrt(math.fsum(np.maximum(grad_e_sq, 0.0))),
        "e0": math.sqrt(math.fsum(mesh.cell_measures * e0 ** 2)),
        "eb": math.sqrt(math.fsum(eb_sq)),
        "grad_err": math.sqrt(math.fsum(grad_err_sq)),
        "u0_err": math.sqrt(math.fsum(u0_err_sq)),
        # e0 is constant on each cell, so every quadrature point of K sees |e0(K)|
        "e0_max": float(np.max(np.abs(e0))) if e0.size else 0.0,
    }
