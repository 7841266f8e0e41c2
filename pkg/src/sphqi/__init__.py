"""Quasi-interpolation on the unit sphere with scaled zonal kernels.

The package provides kernel families with closed-form Fourier-Legendre
coefficients, positive spherical quadrature, sklearn-style estimators for
kernel quasi-interpolation and hyperinterpolation, benchmark targets, and
an experiment harness with a CLI (``sphqi``).
"""

from .estimators import Hyperinterpolator, SphericalQuasiInterpolator
from .experiments import (
    ConfigError,
    ExperimentConfig,
    NumericFailure,
    ResultRow,
    run_convergence,
    run_noise,
    run_timing,
    write_csv,
)
from .kernels import (
    CompactSupportKernel,
    GaussianKernel,
    HighOrderKernel,
    KernelSpec,
    PoissonKernel,
    ZonalKernel,
    combination_weights,
    compact_support_coefficient,
    decay_report,
    flatness_report,
    gaussian_coefficient,
    gaussian_coefficient_hadamard,
    numeric_coefficient,
    parse_kernel,
    poisson_coefficient,
)
from .metrics import discrete_l2_error, rmse
from .quadrature import (
    Gauss1D,
    QuadratureRule,
    gauss_legendre_1d,
    load_md_nodes,
    product_rule_s2,
    verify_exactness,
)
from .special import (
    dim_sph_harm,
    gammainc_p,
    gegenbauer_normalized,
    hyp2f1_terminating,
    legendre_p,
    legendre_p_sequence,
    pochhammer,
    real_sph_harm,
    scaled_bessel_i_half,
    sphere_surface_area,
)
from .targets import (
    CapBump,
    GaussianBumpSum,
    HarmonicTarget,
    WendlandPoles,
    make_target,
)

__version__ = "0.1.0"

__all__ = [
    "CapBump",
    "CompactSupportKernel",
    "ConfigError",
    "ExperimentConfig",
    "Gauss1D",
    "GaussianBumpSum",
    "GaussianKernel",
    "HarmonicTarget",
    "HighOrderKernel",
    "Hyperinterpolator",
    "KernelSpec",
    "NumericFailure",
    "PoissonKernel",
    "QuadratureRule",
    "ResultRow",
    "SphericalQuasiInterpolator",
    "WendlandPoles",
    "ZonalKernel",
    "combination_weights",
    "compact_support_coefficient",
    "decay_report",
    "dim_sph_harm",
    "discrete_l2_error",
    "flatness_report",
    "gammainc_p",
    "gauss_legendre_1d",
    "gaussian_coefficient",
    "gaussian_coefficient_hadamard",
    "gegenbauer_normalized",
    "hyp2f1_terminating",
    "legendre_p",
    "legendre_p_sequence",
    "load_md_nodes",
    "make_target",
    "numeric_coefficient",
    "parse_kernel",
    "pochhammer",
    "poisson_coefficient",
    "product_rule_s2",
    "real_sph_harm",
    "rmse",
    "run_convergence",
    "run_noise",
    "run_timing",
    "scaled_bessel_i_half",
    "sphere_surface_area",
    "verify_exactness",
    "write_csv",
]
