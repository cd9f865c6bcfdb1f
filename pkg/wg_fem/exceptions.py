# Copyright 2026 The wg-fem Authors
# SPDX-License-Identifier: GPL-3.0-or-later


class WGError(Exception):
    pass


class MeshError(WGError, ValueError):
    pass


class QuadratureError(WGError, ValueError):
    pass


class ElementError(WGError, ValueError):
    pass


class AssemblyError(WGError, ValueError):
    pass


class ConfigError(WGError, ValueError):

    def __init__(self, message, details=None):
        super().__init__(message)
        self.details = details or {}


class ExpressionError(WGError, ValueError):
    pass


class SolverError(WGError, RuntimeError):
    """Raised when a linear solve breaks down or does not reach its tolerance

    Args:
        message: Human readable reason
        method: Name of the solver that failed
        iterations: Iterations performed before giving up
        residual_history: Relative residuals recorded during the solve
    """

    def __init__(self, message, method=None, iterations=0, residual_history=None):
        super().__init__(message)
        self.method = method
        self.iterations = iterations
        self.residual_history = list(residual_history or [])


class CaseError(WGError, ValueError):
    pass
