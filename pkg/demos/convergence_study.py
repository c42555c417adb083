"""Run small convergence studies and print the CSV reports."""

from varsample.studies import (
    ExperimentConfig,
    format_csv,
    run_lp_convergence,
    run_variation_convergence,
)

grid = ((-1.25, 0.125, 21), (-1.25, 0.125, 21))

print("Kantorovich L1 error against the tau-modulus bound (bump, M3):")
cfg = ExperimentConfig(
    operator="kantorovich", kernel_spec="bspline:3", w_schedule=(2, 4, 8),
    function="bump", p=1, grid=grid,
)
header, rows = run_lp_convergence(cfg)
print(format_csv(header, rows))

print("variation of the averaged series and of its error (bump, M2, m=2):")
cfg = ExperimentConfig(
    operator="averaged", kernel_spec="bspline:2", w_schedule=(2, 4, 8),
    m=2, function="bump", p=1, grid=grid, cells_per_axis=24,
)
header, rows = run_variation_convergence(cfg)
print(format_csv(header, rows))
