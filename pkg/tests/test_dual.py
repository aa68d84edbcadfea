"""
Tests for tagged dual numbers and the dual-number directional derivative.
"""

import numpy as np
import pytest

from tkbundle.core.dual import Dual, dot, exp, real_part, solve, stack
from tkbundle.core.jets import JetError, central_difference, dual_directional, dual_value_and_directional

def test_cube_first_derivative():
    assert dual_directional(lambda x: x ** 3, 2.0, 1.0) == pytest.approx(12.0)

def test_cube_second_derivative_by_nesting():
    second = dual_directional(lambda p: dual_directional(lambda q: q ** 3, p, 1.0), 2.0, 1.0)
    assert real_part(second) == pytest.approx(12.0)

def test_nested_perturbations_do_not_mix():
    # d/dx [x · d/dy (x + y)] = 1
    value = dual_directional(lambda x: x * dual_directional(lambda y: x + y, 1.0, 1.0), 1.0, 1.0)
    assert value == pytest.approx(1.0)

def test_vector_function_matches_central_difference():
    def f(x):
        return np.array([1.0, 0.0]) * dot(x, x) + x * exp(x[0])

    point = np.array([0.3, -0.7])
    direction = np.array([1.0, 2.0])
    np.testing.assert_allclose(
        dual_directional(f, point, direction),
        central_difference(lambda p: np.array([p @ p, 0.0]) + p * np.exp(p[0]), point, direction),
        rtol=1e-8,
    )

def test_solve_derivative():
    a = np.array([[2.0, 1.0], [0.5, 3.0]])
    da = np.array([[0.1, -0.2], [0.3, 0.0]])
    b = np.array([1.0, -1.0])
    inv = np.linalg.inv(a)
    expected = -inv @ da @ inv @ b
    np.testing.assert_allclose(dual_directional(lambda m: solve(m, b), a, da), expected, rtol=1e-12)

def test_stack_keeps_constant_entries():
    x = Dual(np.array([1.0, 2.0]), np.array([1.0, 0.0]), 99)
    stacked = stack([x, np.array([5.0, 6.0])])
    np.testing.assert_array_equal(stacked.re, [[1.0, 2.0], [5.0, 6.0]])
    np.testing.assert_array_equal(stacked.du, [[1.0, 0.0], [0.0, 0.0]])

def test_constant_function_has_zero_derivative():
    np.testing.assert_array_equal(dual_directional(lambda x: np.ones(2), np.zeros(2), np.ones(2)), np.zeros(2))

def test_structured_points():
    value = dual_directional(lambda p: p[0] * p[1], (2.0, 3.0), (1.0, 0.0))
    assert value == pytest.approx(3.0)

def test_rejected_input_raises_jet_error():
    def singular(x):
        return solve(np.zeros((2, 2)) + 0.0 * x[0], x)

    with pytest.raises(JetError):
        dual_directional(singular, np.ones(2), np.ones(2))

def test_negative_powers_are_rejected():
    with pytest.raises(TypeError):
        Dual(1.0, 1.0, 1) ** -1

def test_value_and_directional_share_one_pass():
    value, slope = dual_value_and_directional(lambda x: x ** 3, 2.0, 1.0)
    assert value == pytest.approx(8.0)
    assert slope == pytest.approx(12.0)

def test_value_keeps_enclosing_dual_layer():
    # d/dp of the primal p³ is 3p²
    outer = dual_directional(lambda p: dual_value_and_directional(lambda q: q ** 3, p, 1.0)[0], 2.0, 1.0)
    assert outer == pytest.approx(12.0)
