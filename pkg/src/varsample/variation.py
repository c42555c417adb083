"""Jordan/Tonelli variation estimates, moduli of smoothness, and grid norms."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence, Tuple

import numpy as np

from .errors import ConfigurationError, DomainError


@dataclass(frozen=True)
class GridFunction:
    """Uniform-grid samples of a real function of N variables.

    values[i1, ..., iN] is the sample at origin + (i1 h1, ..., iN hN).
    """

    origin: Tuple[float, ...]
    spacing: Tuple[float, ...]
    shape: Tuple[int, ...]
    values: np.ndarray

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=float)
        object.__setattr__(self, "values", vals.reshape(self.shape))
        if len(self.origin) != len(self.spacing) or len(self.origin) != len(self.shape):
            raise DomainError("origin, spacing and shape must agree in dimension")
        if any(h <= 0 for h in self.spacing):
            raise DomainError("grid spacing must be positive")
        if any(n < 1 for n in self.shape):
            raise DomainError("grid shape must be positive")
        if not np.all(np.isfinite(self.values)):
            raise DomainError("grid values must be finite")

    @property
    def dim(self):
        return len(self.shape)

    @property
    def cell_volume(self):
        return float(np.prod(self.spacing))

    def axis_coordinates(self, axis):
        return self.origin[axis] + self.spacing[axis] * np.arange(self.shape[axis])

    def same_grid(self, other):
        return (
            self.origin == other.origin
            and self.spacing == other.spacing
            and self.shape == other.shape
        )


@dataclass(frozen=True)
class VariationReport:
    """Directional variation components and their combined (Euclidean) total."""

    phi: Tuple[float, ...]
    combined: float
    granularity: Tuple[int, ...]
    is_lower_bound: bool = True


def jordan_variation_1d(samples):
    """Sum of absolute successive differences; a lower bound of the variation."""
    arr = np.asarray(samples, dtype=float)
    if arr.ndim != 1 or arr.size < 2:
        raise DomainError("jordan variation needs at least two ordered samples")
    return float(np.abs(np.diff(arr)).sum())


def tonelli_variation(gf, cells_per_axis):
    """Lower-bound Tonelli variation of a grid function over its box.

    The box is split into the given cells; each cell contributes the Euclidean
    norm of its directional components, each a rectangle-rule integral of
    sampled sectional Jordan variations.
    """
    cells = tuple(int(c) for c in np.atleast_1d(cells_per_axis))
    if len(cells) == 1 and gf.dim > 1:
        cells = cells * gf.dim
    if len(cells) != gf.dim:
        raise DomainError("cells_per_axis does not match the grid dimension")
    if any(c < 1 for c in cells):
        raise DomainError("cell counts must be positive")
    for n, c in zip(gf.shape, cells):
        if n < 2 or (n - 1) % c != 0:
            raise DomainError(
                f"cell layout {cells} does not evenly divide grid shape {gf.shape}"
            )
    blocks = tuple((n - 1) // c for n, c in zip(gf.shape, cells))

    phi_cells = []
    for j in range(gf.dim):
        diff = np.abs(np.diff(gf.values, axis=j))
        # Sections are sampled at the left endpoints along every other axis.
        trim = tuple(
            slice(None) if i == j else slice(0, gf.shape[i] - 1) for i in range(gf.dim)
        )
        trimmed = diff[trim]
        # Block-sum into per-cell totals.
        newshape = []
        for i in range(gf.dim):
            newshape.extend((cells[i], blocks[i]))
        blocked = trimmed.reshape(newshape)
        summed = blocked.sum(axis=tuple(range(1, 2 * gf.dim, 2)))
        weight = 1.0
        for i in range(gf.dim):
            if i != j:
                weight *= gf.spacing[i]
        phi_cells.append(summed * weight)

    combined = float(np.sqrt(sum(p * p for p in phi_cells)).sum())
    phi = tuple(float(p.sum()) for p in phi_cells)
    return VariationReport(phi=phi, combined=combined, granularity=cells)


def _midpoint_grid(box, cells_per_axis):
    axes = [
        lo + (hi - lo) * (np.arange(c) + 0.5) / c
        for (lo, hi), c in zip(box, cells_per_axis)
    ]
    mesh = np.meshgrid(*axes, indexing="ij")
    pts = np.stack(mesh, axis=-1)
    vol = math.prod((hi - lo) / c for (lo, hi), c in zip(box, cells_per_axis))
    return pts, vol


def ac_variation(gradient, box, cells_per_axis=256, return_error=False):
    """Integral of |gradient| over the box by composite midpoint quadrature.

    gradient is either a callable mapping (..., N) points to (..., N) vectors
    or a GridFunction whose values have a trailing component axis. One
    refinement supplies a Richardson-style error estimate.
    """
    box = tuple((float(lo), float(hi)) for lo, hi in box)
    if isinstance(gradient, GridFunction):
        raise DomainError("pass the vector samples as a callable or use grid_gradient_norm")
    if gradient is None:
        raise ConfigurationError("no gradient available for the AC variation integral")
    dim = len(box)

    def integrate(cells):
        pts, vol = _midpoint_grid(box, (cells,) * dim)
        g = np.asarray(gradient(pts), dtype=float)
        norms = np.sqrt(np.sum(g * g, axis=-1))
        return float(norms.sum() * vol)

    coarse = integrate(cells_per_axis)
    fine = integrate(2 * cells_per_axis)
    error = abs(fine - coarse) / 3.0
    if return_error:
        return fine, error
    return fine


def omega1(f, x, delta, probes_per_axis=17):
    """Local oscillation: sup |f(t) - f(s)| over the cell of half-width delta/2."""
    if delta <= 0:
        raise DomainError("delta must be positive")
    x = np.atleast_1d(np.asarray(x, dtype=float))
    axes = [np.linspace(xi - delta / 2.0, xi + delta / 2.0, probes_per_axis) for xi in x]
    pts = np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1)
    vals = np.asarray(f.evaluate(pts), dtype=float)
    return float(vals.max() - vals.min())


def tau1_norm(f, delta, p, box, nodes_per_axis=33, probes_per_axis=17):
    """L^p norm over the box of x -> omega1(f, x, delta), by midpoint quadrature."""
    if p not in (1, 2):
        raise DomainError("only p in {1, 2} is supported")
    if delta <= 0:
        raise DomainError("delta must be positive")
    box = tuple((float(lo), float(hi)) for lo, hi in box)
    dim = len(box)
    centers, vol = _midpoint_grid(box, (nodes_per_axis,) * dim)
    offsets = [np.linspace(-delta / 2.0, delta / 2.0, probes_per_axis)] * dim
    off = np.stack(np.meshgrid(*offsets, indexing="ij"), axis=-1)
    off = off.reshape((1,) * dim + off.shape)
    pts = centers.reshape(centers.shape[:-1] + (1,) * dim + (dim,)) + off
    vals = np.asarray(f.evaluate(pts), dtype=float)
    osc = vals.max(axis=tuple(range(dim, 2 * dim))) - vals.min(
        axis=tuple(range(dim, 2 * dim))
    )
    return float((np.sum(osc**p) * vol) ** (1.0 / p))


def lp_error(a, b, p):
    """(sum |a - b|^p * cell volume)^(1/p) on identical grids."""
    if p not in (1, 2):
        raise DomainError("only p in {1, 2} is supported")
    if not a.same_grid(b):
        raise DomainError("grid functions live on different grids")
    diff = np.abs(a.values - b.values)
    return float((np.sum(diff**p) * a.cell_volume) ** (1.0 / p))
