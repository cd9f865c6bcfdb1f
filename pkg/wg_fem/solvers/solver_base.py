# -*- coding: utf-8 -*-
# Copyright 2026 The wg-fem Authors  (see the AUTHORS file)
# SPDX-License-Identifier: GPL-3.0+

import abc
import logging
from dataclasses import dataclass, field

import numpy as np
from scipy import sparse
from scipy.sparse.linalg import LinearOperator

from ..exceptions import ConfigError, SolverError

logger = logging.getLogger(__name__)

METHODS = ("auto", "cg", "bicgstab", "lu")
SYMMETRY_TOL = 1e-10


@dataclass(frozen=True)
class SolverConfig:
    method: str = "auto"
    tolerance: float = 1e-12
    max_iterations: int = 20000
    jacobi: bool = True
    dense_threshold: int = 3000
    max_restarts: int = 3

    def __post_init__(self):
        if self.method not in METHODS:
            raise ConfigError(f"Unknown solver method {self.method!r}, expected one of {METHODS}")
        if not 0.0 < self.tolerance < 1.0:
            raise ConfigError(f"Solver tolerance must lie in (0, 1), got {self.tolerance!r}")
        if self.max_iterations < 1:
            raise ConfigError(f"max_iterations must be at least 1, got {self.max_iterations!r}")
        if self.max_restarts < 0:
            raise ConfigError(f"max_restarts must be non-negative, got {self.max_restarts!r}")

    @classmethod
    def from_config(cls, section):
        return cls(**{key: section[key] for key in cls.__dataclass_fields__ if key in section})


@dataclass
class SolveReport:
    method: str
    iterations: int
    residual: float
    residual_history: list = field(default_factory=list)
    restarts: int = 0
    fallback: bool = False


def relative_residual(matrix, rhs, x):
    norm = np.linalg.norm(rhs)
    residual = np.linalg.norm(rhs - matrix @ x)
    return residual / norm if norm > 0 else residual


def is_symmetric(matrix, tol=SYMMETRY_TOL):
    matrix = sparse.csr_matrix(matrix)
    if matrix.shape[0] != matrix.shape[1]:
        return False
    scale = max(1.0, abs(matrix).max()) if matrix.nnz else 1.0
    difference = matrix - matrix.T
    return difference.nnz == 0 or abs(difference).max() <= tol * scale


class SolverBase(metaclass=abc.ABCMeta):
    """Base class for the linear solvers"""

    name = None

    def __init__(self, config=None):
        self._config = config or SolverConfig()

    def solve(self, matrix, rhs):
        """Solve matrix x = rhs to the configured relative residual

        Args:
            matrix: Square sparse matrix
            rhs: Right-hand side vector

        Returns:
            (x, SolveReport)

        Raises:
            SolverError: On breakdown or if the tolerance is not reached
        """
        matrix = sparse.csr_matrix(matrix, dtype=float)
        rhs = np.asarray(rhs, dtype=float)
        if matrix.shape[0] != matrix.shape[1] or matrix.shape[0] != rhs.shape[0]:
            raise SolverError(f"Incompatible system: matrix {matrix.shape}, rhs {rhs.shape}", method=self.name)
        if not np.any(rhs):
            return np.zeros_like(rhs), SolveReport(method=self.name, iterations=0, residual=0.0)
        return self._solve(matrix, rhs)

    @abc.abstractmethod
    def _solve(self, matrix, rhs):
        pass


class IterativeSolver(SolverBase):
    """Krylov solve with residual history and restarts on a stale residual"""

    @abc.abstractmethod
    def _krylov(self, matrix, rhs, x0, maxiter, preconditioner, callback):
        pass

    def _preconditioner(self, matrix):
        if not self._config.jacobi:
            return None
        diagonal = matrix.diagonal()
        if np.any(diagonal == 0):
            logger.warning(f"{self.name}: zero on the diagonal, Jacobi preconditioner disabled")
            return None
        inverse = 1.0 / diagonal
        n = matrix.shape[0]
        return LinearOperator((n, n), matvec=lambda v: inverse * np.ravel(v), dtype=float)

    def _solve(self, matrix, rhs):
        config = self._config
        norm = np.linalg.norm(rhs)
        preconditioner = self._preconditioner(matrix)
        history = []

        def record(xk):
            history.append(float(np.linalg.norm(rhs - matrix @ xk) / norm))

        x = np.zeros_like(rhs)
        residual = 1.0
        for restart in range(config.max_restarts + 1):
            remaining = config.max_iterations - len(history)
            if remaining <= 0:
                break
            x, info = self._krylov(matrix, rhs, x, remaining, preconditioner, record)
            residual = relative_residual(matrix, rhs, x)
            if info < 0 or not np.isfinite(residual):
                logger.error(f"{self.name} broke down after {len(history)} iterations (info={info})")
                raise SolverError(
                    f"{self.name} breakdown (info={info})",
                    method=self.name,
                    iterations=len(history),
                    residual_history=history,
                )
            if residual <= config.tolerance:
                logger.info(f"{self.name} converged in {len(history)} iterations, residual {residual:.3e}")
                return x, SolveReport(
                    method=self.name,
                    iterations=len(history),
                    residual=residual,
                    residual_history=history,
                    restarts=restart,
                )
            logger.warning(
                f"{self.name}: true residual {residual:.3e} above {config.tolerance:.1e}, restarting"
            )

        logger.error(f"{self.name} did not converge: residual {residual:.3e} after {len(history)} iterations")
        raise SolverError(
            f"{self.name} did not reach tolerance {config.tolerance:.1e} (residual {residual:.3e})",
            method=self.name,
            iterations=len(history),
            residual_history=history,
        )
