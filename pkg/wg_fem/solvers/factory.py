# -*- coding: utf-8 -*-
# Copyright 2026 The wg-fem Authors  (see the AUTHORS file)
# SPDX-License-Identifier: GPL-3.0+

import dataclasses
import logging

from ..exceptions import ConfigError, SolverError
from .bicgstab_solver import BiCGStabSolver
from .cg_solver import ConjugateGradientSolver
from .lu_solver import DenseLUSolver
from .solver_base import SolverConfig, is_symmetric

logger = logging.getLogger(__name__)


class SolverFactory:
    """Factory for creating linear solver instances"""

    @staticmethod
    def create_solver(method, config=None):
        """Create a solver by name

        Args:
            method: The solver to create (cg, bicgstab, lu)
            config: The SolverConfig shared by all solvers

        Returns:
            SolverBase: An instance of the requested solver

        Raises:
            ConfigError: If the method is not supported
        """
        if method == "cg":
            return ConjugateGradientSolver(config)
        elif method == "bicgstab":
            return BiCGStabSolver(config)
        elif method == "lu":
            return DenseLUSolver(config)
        else:
            raise ConfigError(f"Unsupported solver method: {method}")


def solve_linear(matrix, rhs, config=None, symmetric=None):
    """Solve with the configured method; `auto` picks cg or bicgstab by symmetry
    and falls back to dense LU on failure below the dense threshold."""
    config = config or SolverConfig()
    method = config.method
    if method == "auto":
        if symmetric is None:
            symmetric = is_symmetric(matrix)
        method = "cg" if symmetric else "bicgstab"

    solver = SolverFactory.create_solver(method, config)
    try:
        return solver.solve(matrix, rhs)
    except SolverError as e:
        n = matrix.shape[0]
        if config.method != "auto" or n >= config.dense_threshold:
            raise
        logger.warning(f"{method} failed on {n} unknowns ({e}), falling back to dense LU")
        x, report = DenseLUSolver(config).solve(matrix, rhs)
        return x, dataclasses.replace(report, fallback=True)


def solve(system, config=None):
    """Solve an assembled SparseSystem, returning the free dofs and the report"""
    return solve_linear(system.matrix, system.rhs, config, symmetric=system.symmetric)
