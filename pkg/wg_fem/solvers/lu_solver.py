# -*- coding: utf-8 -*-
# Copyright 2026 The wg-fem Authors  (see the AUTHORS file)
# SPDX-License-Identifier: GPL-3.0+

import logging
import warnings

import numpy as np
from scipy.linalg import LinAlgWarning, lu_factor, lu_solve

from ..exceptions import SolverError
from .solver_base import SolveReport, SolverBase, relative_residual

logger = logging.getLogger(__name__)

MAX_DENSE_SIZE = 20000


class DenseLUSolver(SolverBase):
    """Dense LU with partial pivoting, the oracle for small systems"""

    name = "lu"

    def _solve(self, matrix, rhs):
        n = matrix.shape[0]
        if n > MAX_DENSE_SIZE:
            raise SolverError(f"Dense LU refused for {n} unknowns (limit {MAX_DENSE_SIZE})", method=self.name)
        if n > self._config.dense_threshold:
            logger.warning(f"Dense LU on {n} unknowns, above the dense threshold {self._config.dense_threshold}")

        with warnings.catch_warnings():
            warnings.simplefilter("error", LinAlgWarning)
            try:
                factors = lu_factor(matrix.toarray())
            except (LinAlgWarning, ValueError) as e:
                raise SolverError(f"LU factorization failed: {e}", method=self.name) from e
        if np.any(np.diag(factors[0]) == 0):
            raise SolverError("Singular matrix in LU factorization", method=self.name)

        x = lu_solve(factors, rhs)
        residual = relative_residual(matrix, rhs, x)
        if not np.isfinite(residual) or residual > self._config.tolerance:
            raise SolverError(
                f"LU residual {residual:.3e} above tolerance {self._config.tolerance:.1e}",
                method=self.name,
                iterations=1,
                residual_history=[residual],
            )
        logger.info(f"lu solved {n} unknowns, residual {residual:.3e}")
        return x, SolveReport(method=self.name, iterations=1, residual=residual, residual_history=[residual])
