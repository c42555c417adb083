"""Sampling series, averaged series, Kantorovich operators, derivative identity."""

import math

import numpy as np
import pytest

from varsample.errors import ConfigurationError, DomainError
from varsample.functions import (
    constant,
    coordinate,
    partial_derivative,
    smooth_bump,
    tensor_hat,
)
from varsample.kernels import _averaged_cached, bspline_kernel, fejer_kernel
from varsample.operators import (
    averaged_sampling_series,
    averaged_series_partial,
    evaluate_on_grid,
    kantorovich,
    kantorovich_shifted_average,
    sampling_series,
)
from varsample.product import ProductKernelND, parse_kernel

M2 = bspline_kernel(2)
M3 = bspline_kernel(3)


def brute_series(f, kernel, w, t, radius=40):
    total = 0.0
    for k0 in range(-radius, radius + 1):
        for k1 in range(-radius, radius + 1):
            chi = kernel.evaluate(np.array([w * t[0] - k0, w * t[1] - k1]))
            if chi != 0.0:
                total += float(f(np.array([k0 / w, k1 / w]))) * chi
    return total


def test_series_matches_brute_force():
    f = smooth_bump()
    kernel = ProductKernelND((M2, M3))
    for t in ([0.2, 0.1], [-0.4, 0.55]):
        ours = sampling_series(f, kernel, 4.0, t)
        assert abs(ours - brute_series(f, kernel, 4.0, t, radius=10)) < 1e-14


def test_constant_reproduction():
    f = constant(2.75)
    kernel = ProductKernelND((M2, M2))
    assert sampling_series(f, kernel, 4.0, [0.3, -0.7]) == pytest.approx(2.75, abs=1e-13)
    assert averaged_sampling_series(f, (M2, M2), 4.0, 3, [0.3, -0.7]) == pytest.approx(
        2.75, abs=1e-13
    )


def test_linear_reproduction():
    # B-splines reproduce linear functions exactly inside the window box
    f = coordinate(0, dim=2)
    kernel = ProductKernelND((M3, M3))
    for w in (2.0, 4.0):
        val = sampling_series(f, kernel, w, [1.25, 0.5])
        assert abs(val - 1.25) < 1e-12


def test_averaged_series_matches_brute_force():
    f = smooth_bump()
    avg = ProductKernelND((_averaged_cached(M2, 4), _averaged_cached(M2, 4)))
    t = [0.2, 0.1]
    ours = averaged_sampling_series(f, (M2, M2), 4.0, 4, t)
    assert abs(ours - brute_series(f, avg, 4.0, t, radius=15)) < 1e-13


def test_fejer_series_truncation_budget():
    f = constant(1.0)
    kernel = ProductKernelND((fejer_kernel(), fejer_kernel()))
    val = sampling_series(f, kernel, 2.0, [0.3, 0.4], truncation_eps=1e-3)
    assert abs(val - 1.0) < 1e-3


def test_kantorovich_linear_shift():
    # cell means of t_0 shift the reproduction by exactly 1/(2w)
    f = coordinate(0, dim=2)
    kernel = ProductKernelND((M3, M3))
    w = 2.0
    val = kantorovich(f, kernel, w, 0, [2.3, 0.5])
    assert abs(val - (2.3 + 1.0 / (2.0 * w))) < 1e-12


def test_kantorovich_quadrature_matches_exact_averages():
    f = smooth_bump()
    g = partial_derivative(f, 0)
    g_quad = type(g)(
        name=g.name, dim=g.dim, bound=g.bound, evaluate=g.evaluate,
        support_box=g.support_box, cell_average=None,
    )
    kernel = ProductKernelND((M2, M2))
    for t in ([0.2, 0.1], [-0.3, 0.4]):
        exact = kantorovich(g, kernel, 4.0, 0, t)
        quad = kantorovich(g_quad, kernel, 4.0, 0, t)
        assert abs(exact - quad) < 1e-9


@pytest.mark.parametrize("m", [1, 2, 3])
@pytest.mark.parametrize("w", [2.0, 4.0])
def test_derivative_identity(m, w):
    # the partial of the averaged series equals the mean of shifted
    # Kantorovich evaluations of the partial of f
    f = smooth_bump()
    for axis in (0, 1):
        g = partial_derivative(f, axis)
        for t in ([0.2, 0.1], [-0.35, 0.15]):
            lhs = averaged_series_partial(f, (M2, M2), w, m, t, axis)
            rhs = kantorovich_shifted_average(g, (M2, M2), w, m, t, axis)
            assert abs(lhs - rhs) < 1e-10


def test_derivative_matches_finite_differences():
    f = smooth_bump()
    t = np.array([0.201, 0.107])
    h = 1e-5
    for axis in (0, 1):
        e = np.zeros(2)
        e[axis] = h
        fd = (
            averaged_sampling_series(f, (M2, M2), 4.0, 2, t + e)
            - averaged_sampling_series(f, (M2, M2), 4.0, 2, t - e)
        ) / (2 * h)
        an = averaged_series_partial(f, (M2, M2), 4.0, 2, t, axis)
        assert abs(fd - an) < 1e-8


def test_evaluate_on_grid_matches_pointwise():
    f = smooth_bump()

    def point_fn(t):
        return averaged_sampling_series(f, (M2, M2), 2.0, 2, t)

    gf = evaluate_on_grid(point_fn, (-0.5, -0.5), (0.25, 0.25), (5, 5))
    for i in range(5):
        for j in range(5):
            t = np.array([-0.5 + 0.25 * i, -0.5 + 0.25 * j])
            assert gf.values[i, j] == point_fn(t)


def test_operator_argument_validation():
    f = smooth_bump()
    kernel = ProductKernelND((M2, M2))
    with pytest.raises(DomainError):
        sampling_series(f, kernel, -1.0, [0.0, 0.0])
    with pytest.raises(DomainError):
        sampling_series(f, kernel, 2.0, [0.0, 0.0, 0.0])
    with pytest.raises(DomainError):
        sampling_series(f, kernel, 2.0, [np.nan, 0.0])
    with pytest.raises(DomainError):
        kantorovich(f, kernel, 2.0, 5, [0.0, 0.0])
    with pytest.raises(DomainError):
        averaged_sampling_series(f, (M2, M2), 2.0, 0, [0.0, 0.0])
    with pytest.raises(DomainError):
        sampling_series(f, kernel, 2.0, [0.0, 0.0], truncation_eps=0.5)


def test_decaying_kernel_without_tail_bound_rejected():
    from dataclasses import replace

    bad = replace(fejer_kernel(), tail_bound=None)
    f = constant(1.0)
    kernel = ProductKernelND((bad, bad))
    with pytest.raises(ConfigurationError):
        sampling_series(f, kernel, 2.0, [0.0, 0.0])
