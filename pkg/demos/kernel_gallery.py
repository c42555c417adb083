"""Tour of the shipped kernels: values, norms, and partition-of-unity residuals."""

import numpy as np

from varsample.kernels import (
    averaged_eval,
    bspline_kernel,
    check_partition_of_unity,
    eval_bspline,
    fejer_kernel,
    shipped_kernels,
)

probes = np.linspace(0.0, 1.0, 17, endpoint=False)

print("name                support  L1 norm            abs-sum bound")
for k in shipped_kernels():
    support = f"[{-k.support_radius:g}, {k.support_radius:g}]" if k.support_radius else "decaying"
    print(f"{k.name:<19} {support:<8} {k.l1_norm:<18.15f} {k.abs_sum_bound:.12f}")

print()
print("partition of unity residuals (compact kernels, exact window):")
for k in shipped_kernels():
    if k.support_radius is None:
        continue
    radius = int(np.ceil(k.support_radius)) + 2
    print(f"  {k.name:<19} {check_partition_of_unity(k, probes, radius):.3e}")

res = check_partition_of_unity(fejer_kernel(), [0.0, 0.25, 0.5], 1_000_000)
print(f"  fejer (radius 1e6)  {res:.3e}")

print()
print("averaging M_n over a unit window reproduces M_(n+1):")
xs = np.linspace(-4, 4, 2001)
for n in (1, 2, 3):
    gap = np.max(np.abs(averaged_eval(bspline_kernel(n), 1, xs) - eval_bspline(n + 1, xs)))
    print(f"  n={n}: max gap {gap:.3e}")
