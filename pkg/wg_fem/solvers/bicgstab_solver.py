# -*- coding: utf-8 -*-
# Copyright 2026 The wg-fem Authors  (see the AUTHORS file)
# SPDX-License-Identifier: GPL-3.0+

import logging

from scipy.sparse.linalg import bicgstab

from .solver_base import IterativeSolver

logger = logging.getLogger(__name__)


class BiCGStabSolver(IterativeSolver):
    """Jacobi preconditioned BiCGStab for the convection problems"""

    name = "bicgstab"

    def _krylov(self, matrix, rhs, x0, maxiter, preconditioner, callback):
        return bicgstab(
            matrix, rhs, x0=x0, rtol=self._config.tolerance, atol=0.0,
            maxiter=maxiter, M=preconditioner, callback=callback,
        )
