"""Convergence studies, verification suites, and CSV report generation."""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Optional, Tuple

import numpy as np

from .errors import ConfigurationError, DomainError
from .functions import get_function, partial_derivative, smooth_bump, tensor_hat
from .imaging import (
    ImageRaster,
    checkerboard,
    image_variation,
    read_pgm,
    smooth_image,
    smoothed_image_variation,
    write_pgm,
)
from .kernels import (
    _averaged_cached,
    averaged_eval,
    bspline_kernel,
    check_partition_of_unity,
    eval_bspline,
    fejer_kernel,
    l1_norm,
    shipped_kernels,
)
from .operators import (
    averaged_sampling_series,
    averaged_series_partial,
    evaluate_on_grid,
    kantorovich,
    kantorovich_shifted_average,
)
from .product import ProductKernelND, check_pu_nd, parse_kernel
from .variation import GridFunction, _midpoint_grid, lp_error, tau1_norm

FEJER_PU_RADIUS = 1_000_000  # residual measured at 6.1e-7, under the 1e-6 gate

GridSpec = Tuple[Tuple[float, float, int], ...]


@dataclass(frozen=True)
class ExperimentConfig:
    """Settings for one convergence study."""

    operator: str
    kernel_spec: str
    w_schedule: Tuple[float, ...]
    m: int = 1
    function: str = "bump"
    grid: GridSpec = (((-1.5), 0.09375, 33), ((-1.5), 0.09375, 33))
    p: int = 1
    axis: int = 0
    out_path: Optional[str] = None
    truncation_eps: float = 1e-3
    cells_per_axis: int = 48

    def __post_init__(self):
        sched = tuple(float(w) for w in self.w_schedule)
        if not sched:
            raise DomainError("w schedule must be nonempty")
        if any(w <= 0 for w in sched):
            raise DomainError("w values must be positive")
        if any(b <= a for a, b in zip(sched, sched[1:])):
            raise DomainError("w schedule must be strictly increasing")
        object.__setattr__(self, "w_schedule", sched)
        if self.m < 1:
            raise DomainError("m must be a positive integer")
        if self.p not in (1, 2):
            raise DomainError("only p in {1, 2} is supported")
        grid = tuple((float(o), float(h), int(c)) for o, h, c in self.grid)
        if any(h <= 0 or c < 2 for _, h, c in grid):
            raise DomainError("grid axes need positive step and at least 2 nodes")
        object.__setattr__(self, "grid", grid)

    @property
    def box(self):
        return tuple((o, o + h * (c - 1)) for o, h, c in self.grid)


def format_csv(header, rows):
    """Render rows as CSV text with 17 significant digits for floats."""
    lines = [",".join(header)]
    for row in rows:
        cells = []
        for v in row:
            if isinstance(v, float):
                cells.append(f"{v:.17g}")
            else:
                cells.append(str(v))
        lines.append(",".join(cells))
    return "\n".join(lines) + "\n"


def _grid_values(point_fn, grid_spec):
    origin = tuple(o for o, _, _ in grid_spec)
    spacing = tuple(h for _, h, _ in grid_spec)
    shape = tuple(c for _, _, c in grid_spec)
    return evaluate_on_grid(point_fn, origin, spacing, shape)


def run_lp_convergence(config):
    """Kantorovich L^p error against the tau-modulus bound per sampling rate.

    Returns (header, rows); each row holds the grid L^p error of K_w f - f,
    the bound A_chi * tau_1(f; 2T/w)_p, and their ratio. Requires a compactly
    supported kernel so the bound's T exists.
    """
    f = get_function(config.function, dim=len(config.grid))
    kernel = parse_kernel(config.kernel_spec, dimension=f.dim)
    if not kernel.is_compact:
        raise ConfigurationError(
            "lp convergence study requires a compactly supported kernel"
        )
    t_reach = kernel.support_radius
    a_chi = kernel.abs_sum_bound
    f_grid = _grid_values(lambda t: float(f(t)), config.grid)
    rows = []
    for w in config.w_schedule:
        cache = {}
        k_grid = _grid_values(
            lambda t: kantorovich(
                f, kernel, w, config.axis, t,
                truncation_eps=config.truncation_eps, cache=cache,
            ),
            config.grid,
        )
        err = lp_error(k_grid, f_grid, config.p)
        bound = a_chi * tau1_norm(f, 2.0 * t_reach / w, config.p, config.box)
        ratio = err / bound if bound > 0.0 else 0.0
        rows.append((w, config.kernel_spec, config.p, err, bound, ratio))
    header = ["w", "kernel", "p", "lp_err_K", "bound", "ratio"]
    return header, rows


def _series_gradient_samples(f, components, w, m, pts, truncation_eps):
    flat = pts.reshape(-1, pts.shape[-1])
    out = np.empty_like(flat)
    for i, t in enumerate(flat):
        for axis in range(flat.shape[1]):
            out[i, axis] = averaged_series_partial(
                f, components, w, m, t, axis, truncation_eps=truncation_eps
            )
    return out.reshape(pts.shape)


def _variation_pair(f, components, w, m, box, cells, truncation_eps):
    """Midpoint-rule integrals of |grad S_w f| and |grad(S_w f - f)|."""
    dim = len(box)

    def level(c):
        pts, vol = _midpoint_grid(box, (c,) * dim)
        gs = _series_gradient_samples(f, components, w, m, pts, truncation_eps)
        gf = np.asarray(f.gradient(pts), dtype=float)
        v_s = float(np.sqrt(np.sum(gs * gs, axis=-1)).sum() * vol)
        d = gs - gf
        v_err = float(np.sqrt(np.sum(d * d, axis=-1)).sum() * vol)
        return v_s, v_err

    c_s, c_err = level(cells)
    f_s, f_err = level(2 * cells)
    return f_s, f_err


def run_variation_convergence(config):
    """Variation of the averaged series and of its error, per sampling rate.

    Returns (header, rows) in the schema w,m,kernel,V_f,V_Swf,bound,lp_err_K,
    V_err. The bound column is V_f times the product of the averaged
    components' L1 norms, which the series provably respects.
    """
    f = get_function(config.function, dim=len(config.grid))
    if f.gradient is None:
        raise ConfigurationError(
            f"variation study needs an analytic gradient; {f.name} has none"
        )
    kernel = parse_kernel(config.kernel_spec, dimension=f.dim)
    if not kernel.is_compact:
        raise ConfigurationError(
            "variation study requires compactly supported base kernels"
        )
    components = kernel.components
    averaged = [_averaged_cached(c, config.m) for c in components]
    l1_prod = math.prod(c.l1_norm for c in averaged)
    box = config.box

    def integrate_vf(c):
        pts, vol = _midpoint_grid(box, (c,) * len(box))
        g = np.asarray(f.gradient(pts), dtype=float)
        return float(np.sqrt(np.sum(g * g, axis=-1)).sum() * vol)

    v_f = integrate_vf(2 * config.cells_per_axis)
    f_grid = _grid_values(lambda t: float(f(t)), config.grid)
    rows = []
    for w in config.w_schedule:
        v_s, v_err = _variation_pair(
            f, components, w, config.m, box, config.cells_per_axis,
            config.truncation_eps,
        )
        cache = {}
        k_grid = _grid_values(
            lambda t: kantorovich(
                f, kernel, w, config.axis, t,
                truncation_eps=config.truncation_eps, cache=cache,
            ),
            config.grid,
        )
        lp_err = lp_error(k_grid, f_grid, config.p)
        rows.append(
            (w, config.m, config.kernel_spec, v_f, v_s, l1_prod * v_f, lp_err, v_err)
        )
    header = ["w", "m", "kernel", "V_f", "V_Swf", "bound", "lp_err_K", "V_err"]
    return header, rows


def _suite_kernels():
    checks = []
    checks.append(("fejer L1", abs(l1_norm(fejer_kernel()) - 1.0), 1e-8))
    checks.append(("M3 L1", abs(l1_norm(bspline_kernel(3)) - 1.0), 1e-8))
    xs = np.linspace(-4.0, 4.0, 10001)
    for n in range(1, 5):
        gap = np.max(np.abs(averaged_eval(bspline_kernel(n), 1, xs) - eval_bspline(n + 1, xs)))
        checks.append((f"avg(M{n},1)=M{n+1}", float(gap), 1e-12))
    worst = max(checks, key=lambda c: c[1] / c[2])
    ok = all(v < tol for _, v, tol in checks)
    return ok, f"worst: {worst[0]} residual {worst[1]:.3e} (tol {worst[2]:.0e})"


def _perturbed(kernel, delta):
    radius = kernel.support_radius

    def ev(x, _base=kernel.evaluate, _d=delta, _r=radius):
        arr = np.asarray(x, dtype=float)
        return _base(arr) + np.where(np.abs(arr) <= _r, _d, 0.0)

    return replace(kernel, name=kernel.name + "+delta", evaluate=ev)


def _suite_pu(pu_perturbation=0.0):
    probes = np.linspace(0.0, 1.0, 17, endpoint=False)
    worst_name, worst = "", 0.0
    ok = True
    for kernel in shipped_kernels():
        if kernel.support_radius is None:
            tol = 1e-6
            res = check_partition_of_unity(kernel, probes[:4], FEJER_PU_RADIUS)
        else:
            tol = 1e-12
            if pu_perturbation:
                kernel = _perturbed(kernel, pu_perturbation)
            radius = int(math.ceil(kernel.support_radius)) + 2
            res = check_partition_of_unity(kernel, probes, radius)
        if res >= tol:
            ok = False
        if res > worst:
            worst_name, worst = kernel.name, res
    return ok, f"worst residual {worst:.3e} ({worst_name})"


def _suite_prop_der():
    worst = 0.0
    m2 = bspline_kernel(2)
    for f in (smooth_bump(), tensor_hat()):
        comps = (m2, m2)
        for axis in range(2):
            g = partial_derivative(f, axis)
            for t in ((0.2, 0.1), (-0.3, 0.45)):
                t = np.asarray(t)
                lhs = averaged_series_partial(f, comps, 4.0, 2, t, axis)
                rhs = kantorovich_shifted_average(g, comps, 4.0, 2, t, axis)
                worst = max(worst, abs(lhs - rhs))
    return worst < 1e-8, f"max identity gap {worst:.3e}"


def _suite_var_dim(strict=False):
    img = checkerboard(size=16, tile=4)
    v_hat = image_variation(img).combined
    m2 = bspline_kernel(2)
    worst_name, worst_ratio, ok = "", 0.0, True
    for m in (2, 4):
        rep = smoothed_image_variation(img, (m2, m2), 2.0, m)
        l1 = _averaged_cached(m2, m).l1_norm ** 2
        limit = (v_hat / m if strict else v_hat * l1) * 1.01
        ratio = rep.combined / limit
        if ratio > 1.0:
            ok = False
        if ratio > worst_ratio:
            worst_name, worst_ratio = f"m={m}", ratio
    return ok, f"worst V/limit ratio {worst_ratio:.4f} ({worst_name})"


def _suite_imaging(tmp_dir=None):
    import os
    import tempfile

    rng = np.random.default_rng(20260823)
    ok = True
    for maxval in (255, 65535):
        w, h = int(rng.integers(1, 33)), int(rng.integers(1, 33))
        px = rng.integers(0, maxval + 1, size=(h, w))
        r = ImageRaster(width=w, height=h, maxval=maxval, pixels=px)
        fd, path = tempfile.mkstemp(suffix=".pgm", dir=tmp_dir)
        os.close(fd)
        try:
            write_pgm(r, path)
            r2 = read_pgm(path)
            if not (r2.maxval == maxval and np.array_equal(r2.pixels, r.pixels)):
                ok = False
        finally:
            os.remove(path)
    const = ImageRaster(width=6, height=6, maxval=255, pixels=np.full((6, 6), 90))
    m2 = bspline_kernel(2)
    sm = smooth_image(const, (m2, m2), 8.0, 2)
    if not np.array_equal(sm.pixels, const.pixels):
        ok = False
    return ok, "round-trips and constant smoothing"


DEFAULT_SUITES = ("kernels", "pu", "prop-der", "var-dim", "imaging")


def run_verify(suites=None, pu_perturbation=0.0):
    """Run verification suites; returns a list of (name, passed, detail).

    pu_perturbation is a test hook that injects a constant offset into the
    compact kernels before the partition-of-unity suite, which must then fail.
    """
    registry = {
        "kernels": _suite_kernels,
        "pu": lambda: _suite_pu(pu_perturbation=pu_perturbation),
        "prop-der": _suite_prop_der,
        "var-dim": _suite_var_dim,
        "var-dim-strict": lambda: _suite_var_dim(strict=True),
        "imaging": _suite_imaging,
    }
    names = DEFAULT_SUITES if suites is None else tuple(suites)
    results = []
    for name in names:
        if name not in registry:
            raise ConfigurationError(f"unknown verification suite {name!r}")
        passed, detail = registry[name]()
        results.append((name, passed, detail))
    return results
