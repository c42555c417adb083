"""Tolerance-driven and fixed-order quadrature helpers."""

from __future__ import annotations

import math

import numpy as np

from .errors import NumericError

_GL_ORDER = 12
_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(_GL_ORDER)


def gauss_legendre_piecewise(fn, breakpoints):
    """Integrate fn over [breakpoints[0], breakpoints[-1]], piece by piece.

    Exact (up to rounding) for piecewise polynomials of degree < 2 * _GL_ORDER
    whose pieces align with the breakpoints.
    """
    bp = np.asarray(breakpoints, dtype=float)
    pieces = []
    for a, b in zip(bp[:-1], bp[1:]):
        mid = 0.5 * (a + b)
        half = 0.5 * (b - a)
        vals = fn(mid + half * _GL_NODES)
        pieces.append(half * float(np.dot(_GL_WEIGHTS, vals)))
    return math.fsum(pieces)


def _simpson(fa, fm, fb, h):
    return h / 6.0 * (fa + 4.0 * fm + fb)


def adaptive_simpson(fn, a, b, tol=1e-10, max_depth=40):
    """Adaptive Simpson quadrature of a scalar function on [a, b].

    Recursion halves the interval until the local Richardson estimate meets
    the (split) tolerance; exceeding max_depth raises NumericError.
    """
    a = float(a)
    b = float(b)
    if a == b:
        return 0.0
    fa, fb = fn(a), fn(b)
    m = 0.5 * (a + b)
    fm = fn(m)
    whole = _simpson(fa, fm, fb, b - a)
    return _adaptive(fn, a, fa, b, fb, m, fm, whole, tol, max_depth)


def _adaptive(fn, a, fa, b, fb, m, fm, whole, tol, depth):
    lm = 0.5 * (a + m)
    rm = 0.5 * (m + b)
    flm, frm = fn(lm), fn(rm)
    left = _simpson(fa, flm, fm, m - a)
    right = _simpson(fm, frm, fb, b - m)
    delta = left + right - whole
    if abs(delta) <= 15.0 * tol:
        return left + right + delta / 15.0
    if depth <= 0:
        # A jump at an interval endpoint keeps the residual proportional to
        # the interval length, which the split tolerance chases forever.
        # Accept residuals at rounding scale instead of failing on them.
        noise = 1e3 * np.finfo(float).eps * (abs(left + right) + abs(b - a) + 1.0)
        if abs(delta) <= noise:
            return left + right + delta / 15.0
        raise NumericError(
            f"adaptive Simpson did not converge on [{a}, {b}] "
            f"(residual {abs(delta):.3e}, tolerance {tol:.3e})"
        )
    half = 0.5 * tol
    return _adaptive(fn, a, fa, m, fm, lm, flm, left, half, depth - 1) + _adaptive(
        fn, m, fm, b, fb, rm, frm, right, half, depth - 1
    )
