# -*- coding: utf-8 -*-
# Copyright 2026 The wg-fem Authors  (see the AUTHORS file)
# SPDX-License-Identifier: GPL-3.0+

"""Coefficient expressions: a small grammar parsed with sympy and turned into
numpy callables over points of shape (..., d)."""

import logging
import re

import numpy as np
import sympy as sp
from sympy.parsing.sympy_parser import convert_xor, parse_expr, standard_transformations

from .exceptions import ExpressionError

logger = logging.getLogger(__name__)

X, Y, Z = sp.symbols("x y z", real=True)
COORDINATES = (X, Y, Z)

FUNCTIONS = {
    "sin": sp.sin,
    "cos": sp.cos,
    "exp": sp.exp,
    "sqrt": sp.sqrt,
    "atan2": sp.atan2,
    "abs": sp.Abs,
}
CONSTANTS = {"pi": sp.pi, "e": sp.E}

_ALLOWED = re.compile(r"^[0-9A-Za-z_+\-*/^().,\s]*$")
_NAME = re.compile(r"[A-Za-z_][A-Za-z_0-9]*")
_TRANSFORMATIONS = standard_transformations + (convert_xor,)
_PARSER_GLOBALS = {
    "__builtins__": {},
    "Integer": sp.Integer,
    "Float": sp.Float,
    "Rational": sp.Rational,
    "Symbol": sp.Symbol,
    "Lambda": sp.Lambda,
    "factorial": sp.factorial,
}


def coordinates(dim):
    if dim not in (2, 3):
        raise ExpressionError(f"Expressions live in 2 or 3 dimensions, got {dim!r}")
    return COORDINATES[:dim]


def variables(dim):
    coords = coordinates(dim)
    names = {"x": X, "y": Y}
    if dim == 3:
        names["z"] = Z
    names["r"] = sp.sqrt(sum(c ** 2 for c in coords))
    names["theta"] = sp.atan2(Y, X)
    return names


def parse_expression(text, dim=2):
    """Parse `text` into a sympy expression in x, y (and z)

    Raises:
        ExpressionError: Characters outside the grammar, unknown names, a
            variable missing in this dimension or a syntax error
    """
    if isinstance(text, (int, float)):
        return sp.Float(text) if isinstance(text, float) else sp.Integer(text)
    if not isinstance(text, str) or not text.strip():
        raise ExpressionError(f"Expected a non-empty expression string, got {text!r}")
    if not _ALLOWED.match(text):
        raise ExpressionError(f"Expression {text!r} contains characters outside the grammar")

    names = variables(dim)
    known = {**names, **FUNCTIONS, **CONSTANTS}
    for name in _NAME.findall(text):
        if name not in known:
            if name == "z":
                raise ExpressionError(f"Variable z is not available in {dim}D: {text!r}")
            raise ExpressionError(f"Unknown name {name!r} in {text!r}")

    try:
        expression = parse_expr(
            text,
            local_dict=dict(known),
            global_dict=dict(_PARSER_GLOBALS),
            transformations=_TRANSFORMATIONS,
        )
    except Exception as e:
        raise ExpressionError(f"Cannot parse {text!r}: {e}") from e
    if not isinstance(expression, sp.Expr):
        raise ExpressionError(f"{text!r} is not a scalar expression")
    return expression


def _unpack(points, dim):
    points = np.asarray(points, dtype=float)
    if points.shape[-1] != dim:
        raise ExpressionError(f"Points of shape {points.shape} do not live in {dim}D")
    return [points[..., k] for k in range(dim)]


def lambdify_scalar(expression, dim=2):
    coords = coordinates(dim)
    compiled = sp.lambdify(coords, sp.sympify(expression), modules="numpy")

    def evaluate(points):
        args = _unpack(points, dim)
        values = np.asarray(compiled(*args), dtype=float)
        return np.broadcast_to(values, args[0].shape)

    return evaluate


def lambdify_vector(expressions, dim=2):
    components = [lambdify_scalar(e, dim) for e in expressions]

    def evaluate(points):
        return np.stack([component(points) for component in components], axis=-1)

    return evaluate


def lambdify_matrix(matrix, dim=2):
    matrix = sp.Matrix(matrix)
    if matrix.shape != (dim, dim):
        raise ExpressionError(f"Expected a {dim}x{dim} matrix, got {matrix.shape}")
    entries = [[lambdify_scalar(matrix[i, j], dim) for j in range(dim)] for i in range(dim)]

    def evaluate(points):
        rows = [np.stack([entry(points) for entry in row], axis=-1) for row in entries]
        return np.stack(rows, axis=-2)

    return evaluate


def gradient(expression, dim=2):
    return [sp.diff(expression, c) for c in coordinates(dim)]
