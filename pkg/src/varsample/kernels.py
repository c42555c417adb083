"""Univariate kernels (sinc, Fejer, central B-splines) and their sliding averages.

A kernel is a real function whose integer translates sum to one (discrete
partition of unity) and whose absolute lattice sums are uniformly bounded.
Averaging a kernel over a window of width m produces a smoother kernel with
no larger L1 norm.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Optional

import numpy as np

from .errors import ConfigurationError, DomainError
from .quadrature import adaptive_simpson, gauss_legendre_piecewise

PI = math.pi
PI2 = math.pi**2


def _as_array(x):
    arr = np.asarray(x, dtype=float)
    if not np.all(np.isfinite(arr)):
        raise DomainError("kernel argument must be finite")
    return arr


def _maybe_scalar(out, arr):
    return float(out) if arr.ndim == 0 else out


def eval_sinc(x):
    """sin(pi x) / (pi x), with value 1 at x = 0."""
    arr = _as_array(x)
    return _maybe_scalar(np.sinc(arr), arr)


def eval_fejer(x):
    """Fejer kernel F(x) = sinc(x/2)^2 / 2. Nonnegative, even, at most 1/2."""
    arr = _as_array(x)
    return _maybe_scalar(0.5 * np.sinc(arr / 2.0) ** 2, arr)


def eval_bspline(n, x):
    """Central B-spline M_n via the truncated-power sum; zero outside [-n/2, n/2]."""
    if n < 1:
        raise DomainError("B-spline order must be a positive integer")
    arr = _as_array(x)
    flat = np.atleast_1d(arr)
    out = np.zeros_like(flat)
    for i in range(n + 1):
        base = n / 2.0 + flat - i
        pos = base > 0.0
        term = np.zeros_like(flat)
        term[pos] = base[pos] ** (n - 1)
        out += ((-1) ** i * math.comb(n, i)) * term
    out /= math.factorial(n - 1)
    return _maybe_scalar(out.reshape(arr.shape), arr)


def bspline_antiderivative(n, x):
    """Antiderivative of M_n vanishing at -inf, in closed truncated-power form."""
    if n < 1:
        raise DomainError("B-spline order must be a positive integer")
    arr = _as_array(x)
    flat = np.atleast_1d(arr)
    out = np.zeros_like(flat)
    for i in range(n + 1):
        base = np.maximum(n / 2.0 + flat - i, 0.0)
        out += ((-1) ** i * math.comb(n, i)) * base**n
    out /= math.factorial(n)
    return _maybe_scalar(out.reshape(arr.shape), arr)


@dataclass(frozen=True, eq=False)
class Kernel1D:
    """A named univariate kernel with support descriptor and norm metadata.

    support_radius is T for kernels vanishing outside [-T, T]; None means the
    kernel only decays, in which case tail_bound(R) must upper-bound both the
    absolute tail mass beyond R and the absolute lattice tail sum beyond R.
    Instances are immutable; evaluation is pure and thread-safe.
    """

    name: str
    evaluate: Callable
    support_radius: Optional[float]
    l1_norm: float
    abs_sum_bound: float
    tail_bound: Optional[Callable[[float], float]] = None
    breakpoints: Optional[np.ndarray] = None
    antiderivative: Optional[Callable] = None


@dataclass(frozen=True, eq=False)
class AveragedKernel1D(Kernel1D):
    """Sliding mean of a base kernel over a window of width m."""

    base: Kernel1D = None
    m: int = 1


def _lattice_sums(kernel, probes, radius, absolute=False, chunk=2_000_000):
    """Sum kernel(u - k) (optionally |.|) over k in [-radius, radius] per probe."""
    probes = np.atleast_1d(np.asarray(probes, dtype=float))
    n_terms = 2 * radius + 1
    per_chunk = max(1, chunk // max(1, probes.size))
    totals = np.zeros(probes.size)
    k = -radius
    while k <= radius:
        hi = min(k + per_chunk, radius + 1)
        ks = np.arange(k, hi, dtype=float)
        vals = kernel.evaluate(probes[:, None] - ks[None, :])
        if absolute:
            vals = np.abs(vals)
        totals += vals.sum(axis=1)
        k = hi
    del n_terms
    return totals


def _tail_allowance(kernel, probes, lattice_radius, max_tail):
    probes = np.atleast_1d(np.asarray(probes, dtype=float))
    reach = float(np.max(np.abs(probes)))
    if kernel.support_radius is not None:
        if lattice_radius < kernel.support_radius + reach:
            raise ConfigurationError(
                f"lattice radius {lattice_radius} does not cover the support of "
                f"{kernel.name} shifted to the probes (need >= "
                f"{kernel.support_radius + reach:g})"
            )
        return 0.0
    if kernel.tail_bound is None:
        raise ConfigurationError(
            f"decaying kernel {kernel.name} has no tail bound; cannot certify "
            "a truncated lattice sum"
        )
    allowance = kernel.tail_bound(lattice_radius - reach)
    if allowance > max_tail:
        raise ConfigurationError(
            f"lattice radius {lattice_radius} leaves tail allowance "
            f"{allowance:.3e} > {max_tail:.3e} for {kernel.name}"
        )
    return allowance


def check_partition_of_unity(kernel, probes, lattice_radius, max_tail=1e-6):
    """Max over probes of |sum_k kernel(u - k) - 1|, plus the tail allowance."""
    allowance = _tail_allowance(kernel, probes, lattice_radius, max_tail)
    totals = _lattice_sums(kernel, probes, lattice_radius, absolute=False)
    return float(np.max(np.abs(totals - 1.0))) + allowance


def abs_sum_bound(kernel, probes, lattice_radius, max_tail=1e-6):
    """Empirical A_chi: max over probes of sum_k |kernel(u - k)|, plus tail."""
    allowance = _tail_allowance(kernel, probes, lattice_radius, max_tail)
    totals = _lattice_sums(kernel, probes, lattice_radius, absolute=True)
    return float(np.max(totals)) + allowance


_ABS_PROBES = np.linspace(0.0, 1.0, 64, endpoint=False)


def _truncated_power_sum(knots, coeffs, power):
    """Fast evaluator for sum_i c_i (x - knot_i)_+^power on raw arrays."""
    if power == 0:

        def ev0(x, _k=knots, _c=coeffs):
            arr = np.asarray(x, dtype=float)
            return (arr[..., None] - _k > 0.0) @ _c

        return ev0

    def ev(x, _k=knots, _c=coeffs, _p=power):
        arr = np.asarray(x, dtype=float)
        return np.maximum(arr[..., None] - _k, 0.0) ** _p @ _c

    return ev


@lru_cache(maxsize=None)
def bspline_kernel(n):
    """Central B-spline kernel M_n as a Kernel1D."""
    if n < 1:
        raise DomainError("B-spline order must be a positive integer")
    knots = np.arange(n + 1, dtype=float) - n / 2.0
    coeffs = np.array(
        [(-1) ** i * math.comb(n, i) for i in range(n + 1)], dtype=float
    )
    ev = _truncated_power_sum(knots, coeffs / math.factorial(n - 1), n - 1)
    anti = _truncated_power_sum(knots, coeffs / math.factorial(n), n)
    l1 = gauss_legendre_piecewise(lambda u: np.abs(eval_bspline(n, u)), knots)
    kernel = Kernel1D(
        name=f"bspline:{n}",
        evaluate=ev,
        support_radius=n / 2.0,
        l1_norm=l1,
        abs_sum_bound=1.0,  # provisional, replaced below
        breakpoints=knots,
        antiderivative=anti,
    )
    a = abs_sum_bound(kernel, _ABS_PROBES, n // 2 + 2)
    object.__setattr__(kernel, "abs_sum_bound", a)
    return kernel


# |F(x)| <= 2 / (pi^2 x^2) for |x| >= 1; summing the bound over the lattice
# beyond radius R gives 4 / (pi^2 (R - 1)). The same bound dominates the tail
# mass. Radii for truncated sums are sized from this.
def _fejer_tail_bound(radius):
    if radius <= 1.0:
        raise ConfigurationError("Fejer tail bound requires radius > 1")
    return 4.0 / (PI2 * (radius - 1.0))


def _fejer_tail_mass(radius):
    """Integral of F beyond +-radius, by parts with a rigorous O(R^-4) cutoff."""
    r = float(radius)
    s, c = math.sin(PI * r), math.cos(PI * r)
    # C(R) = int_R^inf cos(pi x) / x^2 dx, three integrations by parts.
    cosint = -s / (PI * r**2) + 2.0 * c / (PI2 * r**3) + 6.0 * s / (PI**3 * r**4)
    one_sided = 1.0 / (PI2 * r) - cosint / PI2
    return 2.0 * one_sided


@lru_cache(maxsize=None)
def fejer_kernel():
    """Fejer kernel as a Kernel1D with documented decay bounds."""
    cutoff = 150.0
    bulk = 2.0 * adaptive_simpson(lambda u: eval_fejer(u), 0.0, cutoff, tol=2.5e-10)
    l1 = bulk + _fejer_tail_mass(cutoff)
    kernel = Kernel1D(
        name="fejer",
        evaluate=eval_fejer,
        support_radius=None,
        l1_norm=l1,
        abs_sum_bound=1.0,  # provisional, replaced below
        tail_bound=_fejer_tail_bound,
    )
    a = abs_sum_bound(kernel, np.linspace(0.0, 1.0, 33, endpoint=False), 20_000, max_tail=1e-3)
    object.__setattr__(kernel, "abs_sum_bound", a)
    return kernel


def averaged_kernel(base, m):
    """Kernel averaged over [t - m/2, t + m/2]; exact for B-spline bases."""
    if m < 1:
        raise DomainError("averaging width m must be a positive integer")
    m = int(m)
    if base.antiderivative is not None:
        anti = base.antiderivative

        def ev(x, _anti=anti, _m=m):
            arr = _as_array(x)
            return _maybe_scalar((_anti(arr + _m / 2.0) - _anti(arr - _m / 2.0)) / _m, arr)

        bp = np.unique(
            np.concatenate([base.breakpoints + m / 2.0, base.breakpoints - m / 2.0])
        )
        l1 = gauss_legendre_piecewise(lambda u: np.abs(ev(u)), bp)
        support = base.support_radius + m / 2.0
        tail = None
        breakpoints = bp
    else:
        base_ev = base.evaluate

        @lru_cache(maxsize=1 << 20)
        def _scalar(t, _m=m):
            return adaptive_simpson(
                lambda v: float(base_ev(t + v)), -_m / 2.0, _m / 2.0, tol=1e-10
            ) / _m

        def ev(x, _scalar=_scalar):
            arr = _as_array(x)
            flat = np.atleast_1d(arr).ravel()
            out = np.fromiter((_scalar(float(t)) for t in flat), dtype=float, count=flat.size)
            return _maybe_scalar(out.reshape(np.atleast_1d(arr).shape).reshape(arr.shape), arr)

        if base.support_radius is not None:
            support = base.support_radius + m / 2.0
            tail = None
        else:
            support = None
            if base.tail_bound is None:
                raise ConfigurationError(
                    f"cannot average decaying kernel {base.name} without a tail bound"
                )
            base_tail = base.tail_bound
            tail = lambda radius, _m=m: base_tail(radius - _m / 2.0)
        # Averaging a nonnegative unit-mass kernel preserves the L1 norm;
        # in general it cannot increase it.
        l1 = base.l1_norm
        breakpoints = None

    kernel = AveragedKernel1D(
        name=f"avg:{base.name}:{m}",
        evaluate=ev,
        support_radius=support,
        l1_norm=l1,
        abs_sum_bound=1.0,  # provisional, replaced below
        tail_bound=tail,
        breakpoints=breakpoints,
        base=base,
        m=m,
    )
    if support is not None:
        a = abs_sum_bound(kernel, _ABS_PROBES, int(math.ceil(support)) + 2)
    else:
        a = abs_sum_bound(kernel, np.linspace(0.0, 1.0, 9, endpoint=False), 2_000, max_tail=1e-2)
    object.__setattr__(kernel, "abs_sum_bound", a)
    return kernel


def averaged_eval(base, m, t):
    """Mean of the base kernel over [t - m/2, t + m/2]."""
    return averaged_kernel(base, m).evaluate(t)


def l1_norm(kernel):
    """L1 norm carried by the kernel (exact for piecewise polynomials)."""
    return kernel.l1_norm


@lru_cache(maxsize=None)
def _averaged_cached(base, m):
    return averaged_kernel(base, m)


def parse_kernel1d(spec):
    """Parse "fejer", "bspline:<n>" or "avg:<base>:<m>" into a Kernel1D."""
    spec = spec.strip()
    if spec == "fejer":
        return fejer_kernel()
    if spec.startswith("bspline:"):
        try:
            n = int(spec.split(":", 1)[1])
        except ValueError:
            raise DomainError(f"bad B-spline order in kernel spec {spec!r}") from None
        return bspline_kernel(n)
    if spec.startswith("avg:"):
        rest = spec[len("avg:"):]
        base_spec, _, m_text = rest.rpartition(":")
        if not base_spec:
            raise DomainError(f"bad averaged kernel spec {spec!r}")
        try:
            m = int(m_text)
        except ValueError:
            raise DomainError(f"bad averaging width in kernel spec {spec!r}") from None
        return _averaged_cached(parse_kernel1d(base_spec), m)
    raise DomainError(f"unknown kernel spec {spec!r}")


def shipped_kernels():
    """The kernels every verification suite must accept."""
    ks = [bspline_kernel(n) for n in range(1, 6)]
    ks += [_averaged_cached(bspline_kernel(n), m) for n in (2, 3) for m in (1, 2, 4)]
    ks.append(fejer_kernel())
    return ks
