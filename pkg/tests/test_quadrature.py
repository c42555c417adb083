"""Quadrature helpers: piecewise Gauss-Legendre and adaptive Simpson."""

import math

import numpy as np
import pytest
from scipy.integrate import quad

from varsample.errors import NumericError
from varsample.quadrature import adaptive_simpson, gauss_legendre_piecewise


def test_gauss_exact_on_polynomials():
    val = gauss_legendre_piecewise(lambda x: x**5 - 2 * x**2 + 1, [0.0, 1.0, 2.0])
    exact = 2**6 / 6 - 2 * 2**3 / 3 + 2
    assert abs(val - exact) < 1e-13


def test_gauss_piecewise_abs():
    val = gauss_legendre_piecewise(np.abs, [-1.0, 0.0, 1.0])
    assert abs(val - 1.0) < 1e-15


def test_adaptive_simpson_smooth():
    val = adaptive_simpson(math.exp, 0.0, 1.0, tol=1e-12)
    assert abs(val - (math.e - 1.0)) < 1e-11


def test_adaptive_simpson_against_quad():
    fn = lambda x: math.sin(7 * x) / (1 + x * x)
    ref, _ = quad(fn, 0.0, 3.0, epsabs=1e-13)
    assert abs(adaptive_simpson(fn, 0.0, 3.0, tol=1e-11) - ref) < 1e-9


def test_adaptive_simpson_depth_exhaustion():
    with pytest.raises(NumericError):
        adaptive_simpson(lambda x: math.copysign(1.0, math.sin(1.0 / (x + 1e-12))),
                         0.0, 1.0, tol=1e-14, max_depth=8)
