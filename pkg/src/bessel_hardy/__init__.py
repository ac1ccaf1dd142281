"""Numerical kernels, singular integrals and product Hardy/BMO functionals
for the Bessel Schrodinger operator S_lam = -d^2/dx^2 + (lam^2-lam)/x^2 on
the half-line, together with a verification harness for the quantitative
identities the theory provides.
"""

from .grids import (
    HalfLineGrid,
    SampledFunction1D,
    SampledFunction2D,
    even_extension,
    log_grid,
    lp_norm,
    mirror_grid,
    odd_extension,
    quadrature,
    sample1d,
    sample2d,
    uniform_grid,
)
from .kernels import (
    BesselParams,
    KernelConfig,
    claim_c_value,
    conj_poisson_apply,
    conj_poisson_kernel,
    hankel_transform,
    heat_apply,
    heat_kernel,
    poisson_apply,
    poisson_kernel_spectral,
    poisson_kernel_subordination,
    q_deriv_kernel,
    riesz_apply,
    riesz_kernel,
    spectral_apply,
)
from .specfun import bessel_i, bessel_i_scaled, bessel_j
from .verify import RunConfig, VerificationReport, run_suite

__all__ = [
    "BesselParams",
    "KernelConfig",
    "HalfLineGrid",
    "RunConfig",
    "SampledFunction1D",
    "SampledFunction2D",
    "VerificationReport",
    "bessel_i",
    "bessel_i_scaled",
    "bessel_j",
    "claim_c_value",
    "conj_poisson_apply",
    "conj_poisson_kernel",
    "even_extension",
    "hankel_transform",
    "heat_apply",
    "heat_kernel",
    "log_grid",
    "lp_norm",
    "mirror_grid",
    "odd_extension",
    "poisson_apply",
    "poisson_kernel_spectral",
    "poisson_kernel_subordination",
    "q_deriv_kernel",
    "quadrature",
    "riesz_apply",
    "riesz_kernel",
    "run_suite",
    "sample1d",
    "sample2d",
    "spectral_apply",
    "uniform_grid",
]
