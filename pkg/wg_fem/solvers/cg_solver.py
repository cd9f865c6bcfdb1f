# -*- coding: utf-8 -*-
# Copyright 2026 The wg-fem Authors  (see the AUTHORS file)
# SPDX-License-Identifier: GPL-3.0+

import logging

from scipy.sparse.linalg import cg

from ..exceptions import SolverError
from .solver_base import IterativeSolver, is_symmetric

logger = logging.getLogger(__name__)


class ConjugateGradientSolver(IterativeSolver):
    """Jacobi preconditioned conjugate gradients for symmetric systems"""

    name = "cg"

    def _solve(self, matrix, rhs):
        if not is_symmetric(matrix):
            logger.error("cg requested for a non-symmetric matrix")
            raise SolverError("cg needs a symmetric matrix", method=self.name)
        return super()._solve(matrix, rhs)

    def _krylov(self, matrix, rhs, x0, maxiter, preconditioner, callback):
        return cg(
            matrix, rhs, x0=x0, rtol=self._config.tolerance, atol=0.0,
            maxiter=maxiter, M=preconditioner, callback=callback,
        )
