"""Multidimensional sampling series, Kantorovich operators, and variation tools."""

from .errors import ConfigurationError, DomainError, FormatError, NumericError
from .functions import (
    TestFunction,
    constant,
    coordinate,
    get_function,
    partial_derivative,
    smooth_bump,
    step2d,
    tensor_hat,
)
from .imaging import (
    ImageRaster,
    checkerboard,
    disk,
    image_function,
    image_variation,
    ramp,
    read_pgm,
    smooth_image,
    smoothed_image_variation,
    synthetic_image,
    write_pgm,
)
from .kernels import (
    AveragedKernel1D,
    Kernel1D,
    averaged_eval,
    averaged_kernel,
    bspline_antiderivative,
    bspline_kernel,
    check_partition_of_unity,
    eval_bspline,
    eval_fejer,
    eval_sinc,
    fejer_kernel,
    l1_norm,
    parse_kernel1d,
    shipped_kernels,
)
from .operators import (
    OperatorParams,
    averaged_sampling_series,
    averaged_series_partial,
    evaluate_on_grid,
    kantorovich,
    kantorovich_shifted_average,
    sampling_series,
)
from .product import ProductKernelND, check_pu_nd, parse_kernel, product_eval
from .studies import (
    ExperimentConfig,
    format_csv,
    run_lp_convergence,
    run_variation_convergence,
    run_verify,
)
from .variation import (
    GridFunction,
    VariationReport,
    ac_variation,
    jordan_variation_1d,
    lp_error,
    omega1,
    tau1_norm,
    tonelli_variation,
)

__version__ = "0.1.0"
