"""Tensor-product multidimensional kernels built from univariate components."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Tuple

import numpy as np

from .errors import DomainError
from .kernels import Kernel1D, _lattice_sums, _tail_allowance, parse_kernel1d


@dataclass(frozen=True, eq=False)
class ProductKernelND:
    """Ordered univariate components evaluated as a tensor product.

    Immutable; evaluation is pure and thread-safe.
    """

    components: Tuple[Kernel1D, ...]

    def __post_init__(self):
        if not self.components:
            raise DomainError("a product kernel needs at least one component")

    @property
    def dimension(self):
        return len(self.components)

    @property
    def is_compact(self):
        return all(c.support_radius is not None for c in self.components)

    @property
    def support_radii(self):
        return tuple(c.support_radius for c in self.components)

    @property
    def support_radius(self):
        """Max component radius T: the kernel vanishes outside [-T, T]^N."""
        if not self.is_compact:
            return None
        return max(c.support_radius for c in self.components)

    @property
    def l1_norm_bound(self):
        out = 1.0
        for c in self.components:
            out *= c.l1_norm
        return out

    @property
    def abs_sum_bound(self):
        out = 1.0
        for c in self.components:
            out *= c.abs_sum_bound
        return out

    def evaluate(self, points):
        """Product of component evaluations at points of shape (..., N)."""
        pts = np.asarray(points, dtype=float)
        if pts.shape[-1] != self.dimension:
            raise DomainError(
                f"points have dimension {pts.shape[-1]}, kernel has {self.dimension}"
            )
        out = np.ones(pts.shape[:-1])
        for i, comp in enumerate(self.components):
            out *= comp.evaluate(pts[..., i])
        return float(out) if out.ndim == 0 else out


def product_eval(kernel, point):
    """Evaluate a ProductKernelND at a single point."""
    return kernel.evaluate(np.asarray(point, dtype=float))


def check_pu_nd(kernel, probes, lattice_radius, max_tail=1e-6):
    """Partition-of-unity residual of the truncated lattice sum over Z^N.

    The sum factorizes per axis, so each axis contributes a 1D lattice sum;
    the residual is the worst probe deviation of the product from 1 plus a
    first-order combination of the per-axis tail allowances.
    """
    probes = np.atleast_2d(np.asarray(probes, dtype=float))
    if probes.shape[1] != kernel.dimension:
        raise DomainError("probe dimension does not match kernel dimension")
    axis_sums = []
    allowances = []
    for i, comp in enumerate(kernel.components):
        allowances.append(_tail_allowance(comp, probes[:, i], lattice_radius, max_tail))
        axis_sums.append(_lattice_sums(comp, probes[:, i], lattice_radius))
    product = np.ones(probes.shape[0])
    for s in axis_sums:
        product *= s
    allowance = 0.0
    for i in range(kernel.dimension):
        others = 1.0
        for j, comp in enumerate(kernel.components):
            if j != i:
                others *= comp.abs_sum_bound
        allowance += allowances[i] * others
    return float(np.max(np.abs(product - 1.0))) + allowance


def parse_kernel(spec, dimension=None):
    """Parse a kernel spec into a ProductKernelND.

    "prod:<spec1>,...,<specN>" lists per-axis components; a bare univariate
    spec is replicated across `dimension` axes.
    """
    spec = spec.strip()
    if spec.startswith("prod:"):
        parts = [p for p in spec[len("prod:"):].split(",") if p.strip()]
        if not parts:
            raise DomainError(f"empty product kernel spec {spec!r}")
        comps = tuple(parse_kernel1d(p) for p in parts)
        if dimension is not None and len(comps) != dimension:
            raise DomainError(
                f"kernel spec {spec!r} has {len(comps)} axes, expected {dimension}"
            )
        return ProductKernelND(comps)
    comp = parse_kernel1d(spec)
    return ProductKernelND((comp,) * (dimension or 1))
