"""Harmonic hierarchies for bounding the minimum of a form on the unit sphere.

Cubature upper bounds and optimization-free lower bounds built from product
cubature rules, harmonic decomposition and Gegenbauer averaging kernels.
"""
from .cubature import (
    CubatureRule,
    Quadrature1D,
    circle_rule,
    gauss_jacobi,
    integrate,
    product_cubature,
    verify_exactness,
)
from .errors import (
    ConvergenceError,
    DegreeError,
    DimensionError,
    HarmoniaError,
    SingularKernelError,
)
from .harmonic import (
    HarmonicExpansion,
    gegenbauer,
    harmonic_decompose,
    harmonic_dim,
    normalized_gegenbauer,
    reconstruct,
    sphere_area,
    zonal_harmonic,
)
from .hierarchy import (
    BoundResult,
    DualGenerator,
    SweepError,
    apply_gamma,
    apply_gamma_inverse,
    certify_membership,
    convolve_on_nodes,
    lower_bound,
    moment_generators,
    sweep,
    upper_bound,
)
from .kernel import (
    FangFawziSolution,
    GegenbauerKernel,
    fang_fawzi_kernel,
    frobenius_threshold,
    gegenbauer_expand,
    power_kernel,
    toeplitz_matrix,
)
from .polynomial import (
    HomogeneousPolynomial,
    evaluate,
    l2_norm,
    laplacian,
    multiply_norm_power,
    sphere_monomial_integral,
)

__version__ = "0.1.0"
