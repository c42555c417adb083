"""Built-in test functions: values, gradients, exact cell averages."""

import numpy as np
import pytest
from scipy.integrate import quad

from varsample.errors import DomainError
from varsample.functions import (
    constant,
    coordinate,
    get_function,
    partial_derivative,
    smooth_bump,
    step2d,
    tensor_hat,
)


def fd_gradient(f, t, h=1e-6):
    t = np.asarray(t, dtype=float)
    out = np.zeros_like(t)
    for j in range(t.size):
        e = np.zeros_like(t)
        e[j] = h
        out[j] = (float(f(t + e)) - float(f(t - e))) / (2 * h)
    return out


def test_constant():
    f = constant(3.5)
    pts = np.zeros((4, 2))
    assert np.all(f(pts) == 3.5)
    assert f.cell_average(0, [0.0, 0.0], -1.0, 2.0) == 3.5
    assert np.all(f.gradient(pts) == 0.0)


def test_coordinate():
    f = coordinate(1, dim=2)
    assert f(np.array([0.25, -0.75])) == -0.75
    # exact mean of t_1 over [a, b]
    assert f.cell_average(1, [0.2, 0.0], 0.5, 1.5) == 1.0
    assert f.cell_average(0, [0.2, 0.7], 0.0, 0.5) == pytest.approx(0.7)
    # outside the window the function is cut to zero, no exact average
    assert f.cell_average(1, [0.2, 0.0], 100.0, 101.0) is None


@pytest.mark.parametrize("name", ["hat", "bump"])
def test_gradients_match_finite_differences(name):
    f = get_function(name)
    rng = np.random.default_rng(7)
    pts = rng.uniform(-0.9, 0.9, size=(25, 2))
    # hat is not differentiable on knot lines; nudge away from them
    if name == "hat":
        pts = np.where(np.abs(pts) < 0.05, 0.1, pts)
    g = f.gradient(pts)
    for t, gt in zip(pts, g):
        assert np.max(np.abs(gt - fd_gradient(f, t))) < 1e-6


def test_bump_support_and_bound():
    f = smooth_bump()
    assert f(np.array([0.0, 0.0])) == 1.0
    assert f(np.array([1.0, 0.0])) == 0.0
    assert f(np.array([0.8, 0.7])) == 0.0
    pts = np.random.default_rng(0).uniform(-2, 2, size=(100, 2))
    assert np.all(f(pts) <= f.bound)
    assert np.all(f.gradient(np.array([[1.5, 0.0], [0.0, -3.0]])) == 0.0)


def test_hat_values():
    f = tensor_hat()
    assert f(np.array([0.0, 0.0])) == 1.0
    assert f(np.array([0.5, 0.5])) == 0.25
    assert f(np.array([1.0, 0.0])) == 0.0


def test_step2d():
    f = step2d(height=2.0)
    assert f(np.array([0.5, 0.5])) == 2.0
    assert f(np.array([1.0, 1.0])) == 2.0
    assert f(np.array([0.0, 0.5])) == 0.0
    assert f(np.array([1.5, 0.5])) == 0.0


def test_partial_derivative_cell_average_matches_quadrature():
    f = smooth_bump()
    g = partial_derivative(f, 0)
    a, b = 0.1, 0.35
    exact = g.cell_average(0, [0.0, 0.2], a, b)
    ref, _ = quad(lambda u: g(np.array([u, 0.2])), a, b)
    assert abs(exact - ref / (b - a)) < 1e-10
    # other-axis averages are not available in closed form
    assert g.cell_average(1, [0.0, 0.2], a, b) is None


def test_get_function_errors():
    with pytest.raises(DomainError):
        get_function("mystery")
    with pytest.raises(DomainError):
        get_function("step", dim=3)
    with pytest.raises(DomainError):
        partial_derivative(step2d(), 0)
