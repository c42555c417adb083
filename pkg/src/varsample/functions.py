"""Analytic test functions used as operator inputs and oracles."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional, Tuple

import numpy as np

from .errors import DomainError
from .kernels import eval_bspline

Box = Tuple[Tuple[float, float], ...]


@dataclass(frozen=True)
class TestFunction:
    """A bounded function of N variables with optional exact extras.

    evaluate maps arrays of shape (..., N) to shape (...). gradient, when
    present, maps (..., N) to (..., N). cell_average(axis, point, a, b), when
    present, returns the exact mean over [a, b] along one axis with the other
    coordinates frozen at `point`.
    """

    name: str
    dim: int
    bound: float
    evaluate: Callable
    gradient: Optional[Callable] = None
    support_box: Optional[Box] = None
    cell_average: Optional[Callable] = None

    def __call__(self, points):
        return self.evaluate(points)


def partial_derivative(f, axis):
    """The axis-th gradient component of f, with exact cell averages via FTC."""
    if f.gradient is None:
        raise DomainError(f"{f.name} has no gradient")
    if not 0 <= axis < f.dim:
        raise DomainError(f"axis {axis} out of range for dimension {f.dim}")

    def ev(points, _f=f, _axis=axis):
        return _f.gradient(points)[..., _axis]

    def cell_avg(j, point, a, b, _f=f, _axis=axis):
        if j != _axis:
            return None
        lo = np.array(point, dtype=float)
        hi = lo.copy()
        lo[_axis] = a
        hi[_axis] = b
        return (float(_f.evaluate(hi)) - float(_f.evaluate(lo))) / (b - a)

    grad_bound = 2.0 * f.bound  # loose; refined per function where it matters
    return TestFunction(
        name=f"d{f.name}/dt{axis}",
        dim=f.dim,
        bound=grad_bound,
        evaluate=ev,
        support_box=f.support_box,
        cell_average=cell_avg,
    )


def constant(c, dim=2):
    value = float(c)

    def ev(points):
        pts = np.asarray(points, dtype=float)
        out = np.full(pts.shape[:-1], value)
        return float(out) if out.ndim == 0 else out

    def grad(points):
        pts = np.asarray(points, dtype=float)
        return np.zeros(pts.shape)

    return TestFunction(
        name=f"const:{c}", dim=dim, bound=max(abs(value), 1e-300),
        evaluate=ev, gradient=grad,
        cell_average=lambda j, point, a, b: value,
    )


def coordinate(axis, dim=2, box_half_width=16.0):
    """f(t) = t_axis inside a centered box, 0 outside.

    Linear-reproduction checks evaluate far enough inside the box that the
    window never sees the cut.
    """
    w = float(box_half_width)

    def ev(points, _axis=axis):
        pts = np.asarray(points, dtype=float)
        inside = np.all(np.abs(pts) <= w, axis=-1)
        out = np.where(inside, pts[..., _axis], 0.0)
        return float(out) if out.ndim == 0 else out

    def cell_avg(j, point, a, b, _axis=axis):
        p = np.array(point, dtype=float)
        if abs(a) > w or abs(b) > w or np.any(np.abs(np.delete(p, j)) > w):
            return None
        return 0.5 * (a + b) if j == _axis else float(ev_point(p, _axis))

    def ev_point(p, _axis):
        return p[_axis]

    return TestFunction(
        name=f"coord:{axis}", dim=dim, bound=w,
        evaluate=ev,
        support_box=((-w, w),) * dim,
        cell_average=cell_avg,
    )


def _hat_derivative(x):
    # M_2' is +-1 on the open half-supports; 0 at the knots (a null set).
    x = np.asarray(x, dtype=float)
    return np.where((x > -1.0) & (x < 0.0), 1.0, 0.0) + np.where(
        (x > 0.0) & (x < 1.0), -1.0, 0.0
    )


def tensor_hat(dim=2):
    """Product of unit hats M_2(t_i): continuous, compactly supported, AC."""

    def ev(points):
        pts = np.asarray(points, dtype=float)
        out = np.ones(pts.shape[:-1])
        for i in range(dim):
            out = out * eval_bspline(2, pts[..., i])
        return float(out) if out.ndim == 0 else out

    def grad(points):
        pts = np.asarray(points, dtype=float)
        vals = [eval_bspline(2, pts[..., i]) for i in range(dim)]
        ders = [_hat_derivative(pts[..., i]) for i in range(dim)]
        comps = []
        for j in range(dim):
            g = ders[j]
            for i in range(dim):
                if i != j:
                    g = g * vals[i]
            comps.append(g)
        return np.stack(comps, axis=-1)

    return TestFunction(
        name="hat", dim=dim, bound=1.0,
        evaluate=ev, gradient=grad,
        support_box=((-1.0, 1.0),) * dim,
    )


def smooth_bump(dim=2):
    """exp(1 - 1/(1 - |t|^2)) inside the unit ball, 0 outside; C-infinity."""

    def _core(pts):
        r2 = np.sum(pts * pts, axis=-1)
        inside = r2 < 1.0
        denom = np.where(inside, 1.0 - r2, 1.0)
        vals = np.where(inside, np.exp(1.0 - 1.0 / denom), 0.0)
        return vals, inside, denom

    def ev(points):
        pts = np.asarray(points, dtype=float)
        vals, _, _ = _core(pts)
        return float(vals) if vals.ndim == 0 else vals

    def grad(points):
        pts = np.asarray(points, dtype=float)
        vals, inside, denom = _core(pts)
        factor = np.where(inside, -2.0 / (denom * denom), 0.0) * vals
        return factor[..., None] * pts

    return TestFunction(
        name="bump", dim=dim, bound=1.0,
        evaluate=ev, gradient=grad,
        support_box=((-1.0, 1.0),) * dim,
    )


def step2d(height=1.0):
    """Indicator of the upper-right unit square scaled by height: BV, not AC."""
    h = float(height)

    def ev(points):
        pts = np.asarray(points, dtype=float)
        inside = np.all((pts > 0.0) & (pts <= 1.0), axis=-1)
        out = np.where(inside, h, 0.0)
        return float(out) if out.ndim == 0 else out

    return TestFunction(
        name="step", dim=2, bound=h,
        evaluate=ev,
        support_box=((0.0, 1.0), (0.0, 1.0)),
    )


_BUILTINS = {
    "hat": tensor_hat,
    "bump": smooth_bump,
    "step": step2d,
}


def get_function(name, dim=2):
    """Look up a built-in test function by CLI name."""
    name = name.strip()
    if name.startswith("const:"):
        return constant(float(name.split(":", 1)[1]), dim=dim)
    if name.startswith("coord:"):
        return coordinate(int(name.split(":", 1)[1]), dim=dim)
    if name in ("hat", "bump"):
        return _BUILTINS[name](dim=dim)
    if name == "step":
        if dim != 2:
            raise DomainError("step is a bivariate test function")
        return step2d()
    raise DomainError(f"unknown test function {name!r}")
