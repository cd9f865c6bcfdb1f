# -*- coding: utf-8 -*-
# Copyright 2026 The wg-fem Authors  (see the AUTHORS file)
# SPDX-License-Identifier: GPL-3.0+

from .factory import SolverFactory, solve, solve_linear
from .solver_base import SolverConfig, SolveReport, relative_residual

__all__ = [
    "SolveReport",
    "SolverConfig",
    "SolverFactory",
    "relative_residual",
    "solve",
    "solve_linear",
]
