"""Generalized sampling series, averaged variants, and Kantorovich-type operators."""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import reduce
from typing import Optional, Sequence

import numpy as np

from .errors import ConfigurationError, DomainError
from .kernels import Kernel1D, _averaged_cached
from .product import ProductKernelND
from .quadrature import adaptive_simpson
from .variation import GridFunction

QUAD_TOL = 1e-10


@dataclass(frozen=True)
class OperatorParams:
    """Sampling rate, averaging width, and tail budget for decaying kernels."""

    w: float
    m: int = 1
    truncation_eps: float = 1e-3

    def __post_init__(self):
        if self.w <= 0:
            raise DomainError("sampling rate w must be positive")
        if self.m < 1:
            raise DomainError("averaging width m must be a positive integer")
        if not 0.0 < self.truncation_eps <= 1e-2:
            raise DomainError("truncation_eps must lie in (0, 1e-2]")


def _decay_radius(comp, budget):
    if comp.tail_bound is None:
        raise ConfigurationError(
            f"decaying kernel {comp.name} has no tail bound; cannot truncate"
        )
    radius = 4
    while comp.tail_bound(radius) > budget:
        radius *= 2
        if radius > 1 << 40:
            raise ConfigurationError(
                f"tail budget {budget:.3e} unreachable for {comp.name}"
            )
    return radius


def _axis_window(comp, w, ti, budget, widen=0.0):
    if comp.support_radius is not None:
        reach = comp.support_radius + widen
    else:
        reach = _decay_radius(comp, budget) + widen
    lo = math.ceil(w * ti - reach)
    hi = math.floor(w * ti + reach)
    return np.arange(lo, hi + 1)


def _axis_budgets(components, truncation_eps):
    n = len(components)
    budgets = []
    for i in range(n):
        others = 1.0
        for j, comp in enumerate(components):
            if j != i:
                others *= comp.abs_sum_bound
        budgets.append(truncation_eps / (n * others))
    return budgets


def _check_point(f, t):
    t = np.atleast_1d(np.asarray(t, dtype=float))
    if t.size != f.dim:
        raise DomainError(f"point has dimension {t.size}, function has {f.dim}")
    if not np.all(np.isfinite(t)):
        raise DomainError("evaluation point must be finite")
    return t


MAX_WINDOW_TERMS = 1 << 27


def _weighted_lattice_sum(ks, weights, sample_values):
    """fsum of sample_values times the outer product of per-axis weights."""
    wprod = reduce(np.multiply.outer, weights)
    return math.fsum((sample_values * wprod).ravel())


def _lattice_points(ks, w):
    n = len(ks)
    shape = tuple(k.size for k in ks)
    pts = np.empty(shape + (n,))
    for i, k in enumerate(ks):
        pts[..., i] = (k / w).reshape((1,) * i + (-1,) + (1,) * (n - 1 - i))
    return pts


def _check_window_size(ks):
    terms = math.prod(k.size for k in ks)
    if terms > MAX_WINDOW_TERMS:
        raise ConfigurationError(
            f"truncation window needs {terms} lattice terms; loosen "
            "truncation_eps or use a faster-decaying kernel"
        )
    return terms


def _sampled_lattice_sum(f, ks, weights, w, chunk=1 << 22):
    """Weighted sample sum, evaluated in axis-0 slabs to bound memory.

    The summands are identical to the unchunked path and fsum is exact, so the
    result does not depend on the chunking.
    """
    _check_window_size(ks)
    rest = math.prod(k.size for k in ks[1:])
    block = max(1, chunk // max(1, rest))
    if ks[0].size <= block:
        fv = np.asarray(f.evaluate(_lattice_points(ks, w)), dtype=float)
        return _weighted_lattice_sum(ks, weights, fv)
    parts = []
    for s in range(0, ks[0].size, block):
        sub_ks = [ks[0][s:s + block]] + list(ks[1:])
        sub_weights = [weights[0][s:s + block]] + list(weights[1:])
        fv = np.asarray(f.evaluate(_lattice_points(sub_ks, w)), dtype=float)
        wprod = reduce(np.multiply.outer, sub_weights)
        parts.append((fv * wprod).ravel())
    return math.fsum(np.concatenate(parts))


def sampling_series(f, kernel, w, t, truncation_eps=1e-3):
    """(S_w f)(t): kernel-weighted samples f(k/w) summed over the lattice.

    For decaying components the window is sized so the absolute truncation
    error stays below truncation_eps times the bound of f.
    """
    params = OperatorParams(w=w, truncation_eps=truncation_eps)
    t = _check_point(f, t)
    comps = kernel.components
    if len(comps) != f.dim:
        raise DomainError("kernel dimension does not match function dimension")
    budgets = _axis_budgets(comps, params.truncation_eps)
    ks = [_axis_window(c, w, ti, b) for c, ti, b in zip(comps, t, budgets)]
    weights = [c.evaluate(w * ti - k) for c, ti, k in zip(comps, t, ks)]
    return _sampled_lattice_sum(f, ks, weights, w)


def averaged_sampling_series(f, components, w, m, t, truncation_eps=1e-3):
    """Sampling series with each base component replaced by its m-average."""
    OperatorParams(w=w, m=m, truncation_eps=truncation_eps)
    avg = ProductKernelND(tuple(_averaged_cached(c, m) for c in components))
    return sampling_series(f, avg, w, t, truncation_eps=truncation_eps)


def _inner_cell_value(f, axis, point, a, b, quad_tol, cache, key):
    if cache is not None and key in cache:
        return cache[key]
    val = None
    if f.cell_average is not None:
        val = f.cell_average(axis, point, a, b)
    if val is None:
        base = np.array(point, dtype=float)

        def section(u):
            q = base.copy()
            q[axis] = u
            return float(f.evaluate(q))

        val = adaptive_simpson(section, a, b, tol=quad_tol) / (b - a)
    val = float(val)
    if cache is not None:
        cache[key] = val
    return val


def kantorovich(f, kernel, w, axis, t, truncation_eps=1e-3, quad_tol=QUAD_TOL, cache=None):
    """(K_w f)(t) with the axis-th sample replaced by the cell mean of f.

    The inner one-dimensional integral uses the function's exact cell average
    when it exposes one, otherwise adaptive Simpson quadrature. `cache` maps
    lattice multi-indices to inner values and may be shared across calls with
    the same f, w and axis.
    """
    params = OperatorParams(w=w, truncation_eps=truncation_eps)
    t = _check_point(f, t)
    comps = kernel.components
    if len(comps) != f.dim:
        raise DomainError("kernel dimension does not match function dimension")
    if not 0 <= axis < f.dim:
        raise DomainError(f"axis {axis} out of range for dimension {f.dim}")
    budgets = _axis_budgets(comps, params.truncation_eps)
    ks = [_axis_window(c, w, ti, b) for c, ti, b in zip(comps, t, budgets)]
    weights = [c.evaluate(w * ti - k) for c, ti, k in zip(comps, t, ks)]
    _check_window_size(ks)
    shape = tuple(k.size for k in ks)
    grids = np.meshgrid(*[k.astype(np.int64) for k in ks], indexing="ij")
    kvecs = list(zip(*[g.ravel().tolist() for g in grids]))
    inner = np.empty(len(kvecs))
    lookup = cache.get if cache is not None else (lambda _key: None)
    for i, kvec in enumerate(kvecs):
        key = (kvec, w, axis)
        val = lookup(key)
        if val is None:
            a = kvec[axis] / w
            b = (kvec[axis] + 1) / w
            point = [kv / w for kv in kvec]
            val = _inner_cell_value(f, axis, point, a, b, quad_tol, cache, key)
        inner[i] = val
    return _weighted_lattice_sum(ks, weights, inner.reshape(shape))


def averaged_series_partial(f, components, w, m, t, axis, truncation_eps=1e-3):
    """Exact partial derivative of the averaged sampling series along one axis.

    Differentiating the averaged kernel turns the axis factor into a scaled
    difference of the base kernel at offsets +-m/2.
    """
    OperatorParams(w=w, m=m, truncation_eps=truncation_eps)
    t = _check_point(f, t)
    if len(components) != f.dim:
        raise DomainError("component count does not match function dimension")
    if not 0 <= axis < f.dim:
        raise DomainError(f"axis {axis} out of range for dimension {f.dim}")
    comps = [
        components[axis] if i == axis else _averaged_cached(components[i], m)
        for i in range(f.dim)
    ]
    budgets = _axis_budgets(comps, truncation_eps)
    ks = []
    weights = []
    for i, (c, ti) in enumerate(zip(comps, t)):
        if i == axis:
            k = _axis_window(c, w, ti, budgets[i], widen=m / 2.0)
            arg = w * ti - k
            weights.append(c.evaluate(arg + m / 2.0) - c.evaluate(arg - m / 2.0))
        else:
            k = _axis_window(c, w, ti, budgets[i])
            weights.append(c.evaluate(w * ti - k))
        ks.append(k)
    return (w / m) * _sampled_lattice_sum(f, ks, weights, w)


def kantorovich_shifted_average(
    g, components, w, m, t, axis, truncation_eps=1e-3, quad_tol=QUAD_TOL, cache=None
):
    """Mean of m Kantorovich evaluations of g at equally shifted points.

    g plays the role of a partial derivative. The Kantorovich operator carries
    the averaged components on every axis except the differentiation axis,
    which keeps its base kernel; applied to the gradient of an AC function
    this reproduces the partial derivative of the averaged sampling series.
    """
    OperatorParams(w=w, m=m, truncation_eps=truncation_eps)
    t = _check_point(g, t)
    if not 0 <= axis < g.dim:
        raise DomainError(f"axis {axis} out of range for dimension {g.dim}")
    comps = tuple(
        components[i] if i == axis else _averaged_cached(components[i], m)
        for i in range(g.dim)
    )
    kernel = ProductKernelND(comps)
    if cache is None:
        cache = {}
    terms = []
    for i in range(1, m + 1):
        shifted = t.copy()
        shifted[axis] -= (m - 2 * (i - 1)) / (2.0 * w)
        terms.append(
            kantorovich(
                g, kernel, w, axis, shifted,
                truncation_eps=truncation_eps, quad_tol=quad_tol, cache=cache,
            )
        )
    return math.fsum(terms) / m


def evaluate_on_grid(point_fn, origin, spacing, shape):
    """Evaluate a per-point operator over a uniform grid, one point at a time.

    The batched path calls the identical per-point code, so both agree
    bitwise by construction.
    """
    origin = tuple(float(o) for o in np.atleast_1d(origin))
    spacing = tuple(float(h) for h in np.atleast_1d(spacing))
    shape = tuple(int(n) for n in np.atleast_1d(shape))
    values = np.empty(shape)
    for idx in np.ndindex(shape):
        point = np.array([o + h * i for o, h, i in zip(origin, spacing, idx)])
        values[idx] = point_fn(point)
    return GridFunction(origin=origin, spacing=spacing, shape=shape, values=values)
