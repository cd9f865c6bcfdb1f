# Copyright 2026 The wg-fem Authors  (see the AUTHORS file)
# SPDX-License-Identifier: GPL-3.0+

import numpy as np
import pytest
import sympy as sp

from wg_fem.exceptions import ExpressionError
from wg_fem.expressions import (
    X,
    Y,
    Z,
    gradient,
    lambdify_matrix,
    lambdify_scalar,
    lambdify_vector,
    parse_expression,
)


def test_parse_polynomial():
    expression = parse_expression("x^2 + 3*x*y - 1")

    assert sp.simplify(expression - (X ** 2 + 3 * X * Y - 1)) == 0


def test_parse_functions_and_constants():
    expression = parse_expression("sin(pi*x)*exp(-y) + sqrt(abs(x)) + e")

    assert expression.subs({X: 0, Y: 0}) == sp.E


def test_polar_names():
    expression = parse_expression("r^2 * cos(theta)")
    value = float(expression.subs({X: 3.0, Y: 4.0}))

    assert value == pytest.approx(15.0)


def test_z_only_in_3d():
    assert parse_expression("x*y*z", dim=3).free_symbols == {X, Y, Z}
    with pytest.raises(ExpressionError, match="z"):
        parse_expression("x*z")


@pytest.mark.parametrize("text", ["foo(x)", "x + a", "__import__"])
def test_unknown_names(text):
    with pytest.raises(ExpressionError):
        parse_expression(text)


@pytest.mark.parametrize("text", ["x; y", "x[0]", "'x'", "x @ y", ""])
def test_characters_outside_the_grammar(text):
    with pytest.raises(ExpressionError):
        parse_expression(text)


def test_syntax_error():
    with pytest.raises(ExpressionError, match="Cannot parse"):
        parse_expression("sin(x")


def test_numbers_are_accepted():
    assert parse_expression(2) == 2
    assert float(parse_expression(0.5)) == 0.5


def test_scalar_broadcasts_constants():
    evaluate = lambdify_scalar(sp.Integer(3))
    points = np.zeros((4, 5, 2))

    values = evaluate(points)

    assert values.shape == (4, 5)
    np.testing.assert_allclose(values, 3.0)


def test_scalar_values():
    evaluate = lambdify_scalar(parse_expression("x*y + z", dim=3), dim=3)
    points = np.array([[1.0, 2.0, 3.0], [0.5, 0.5, 0.0]])

    np.testing.assert_allclose(evaluate(points), [5.0, 0.25])


def test_wrong_point_dimension():
    with pytest.raises(ExpressionError):
        lambdify_scalar(X)(np.zeros((3, 3)))


def test_vector_and_gradient():
    expression = parse_expression("x^2*y")
    evaluate = lambdify_vector(gradient(expression), dim=2)

    np.testing.assert_allclose(evaluate(np.array([[2.0, 3.0]])), [[12.0, 4.0]])


def test_matrix_shape():
    evaluate = lambdify_matrix(sp.Matrix([[1 + X, 0], [0, Y]]))
    points = np.ones((6, 3, 2))

    values = evaluate(points)

    assert values.shape == (6, 3, 2, 2)
    np.testing.assert_allclose(values[0, 0], [[2.0, 0.0], [0.0, 1.0]])


def test_matrix_must_be_square_in_the_dimension():
    with pytest.raises(ExpressionError):
        lambdify_matrix(sp.eye(3), dim=2)


def test_dimension_must_be_two_or_three():
    with pytest.raises(ExpressionError):
        parse_expression("x", dim=1)
