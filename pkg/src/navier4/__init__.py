"""navier4: spectral solver and verification toolkit for coupled
fourth-order elliptic systems Delta^2 u - beta Delta u - alpha u = f
with Navier boundary conditions on box domains (dim 1..3).

The biharmonic operator factors into two Helmholtz-type resolvents,
(-Delta - mu_1)(-Delta - mu_2); everything downstream (kernel bounds,
comparison constants, cone verification, the nonlinear fixed-point
map) is built on that cascade.
"""

from .domain import (
    DEFAULT_GRID,
    DEFAULT_TRUNCATION,
    Domain,
    GridField,
    Mode,
    SpectralField,
    SubBox,
    eigenfunction_eval,
    eigenvalue,
    enumerate_modes,
    forward_transform,
    gauss_legendre,
    inverse_transform,
    mode_table,
    node_axes,
    node_points,
    quadrature,
    quadrature_weight,
    sample_function,
)
from .errors import (
    ComplexRootsError,
    ConfigError,
    ConstantDegenerateError,
    DomainError,
    Navier4Error,
    NearResonanceError,
    NonlinearityContractError,
    NotAdmissibleError,
    ShiftTooLargeError,
    SingularJacobianError,
    TruncationError,
)
from .factorization import (
    AdmissibilityReport,
    Factorization,
    ParamPair,
    check_admissible,
    factor_params,
    resonance_curve,
    resonance_function,
    tail_threshold,
)
from .greens import (
    ConstantsReport,
    GreenKernel,
    KernelBoundsReport,
    build_kernel,
    closed_form_1d,
    diagonal_growth,
    estimate_constants,
    verify_kernel_bounds,
)
from .linear import (
    LinearProblem,
    solve_green_quadrature,
    solve_single_helmholtz,
    solve_spectral,
    symbol,
)
from .nonlinear import (
    ClassificationReport,
    GrowthClass,
    LimitRatioReport,
    Nonlinearity,
    SolveReport,
    StatePair,
    SystemParams,
    apply_T,
    classify_growth,
    cone_sigma,
    estimate_limit_ratios,
    newton_solve,
    picard_solve,
    radius_report,
    verify_cone,
)
from .fd import (
    fd_composite,
    fd_eigenvalues,
    fd_laplacian,
    fd_min_pivot,
    fd_newton,
    fd_solve,
)
from .config import ExperimentConfig, build_nonlinearity, config_from_dict, load_config
from .checks import CheckResult, run_suite, suite_passed

__version__ = "0.1.0"

__all__ = [
    "__version__",
    # domain
    "DEFAULT_GRID", "DEFAULT_TRUNCATION", "Domain", "GridField", "Mode",
    "SpectralField", "SubBox", "eigenfunction_eval", "eigenvalue",
    "enumerate_modes", "forward_transform", "gauss_legendre",
    "inverse_transform", "mode_table", "node_axes", "node_points",
    "quadrature", "quadrature_weight", "sample_function",
    # errors
    "Navier4Error", "DomainError", "TruncationError", "ComplexRootsError",
    "ShiftTooLargeError", "NearResonanceError", "NotAdmissibleError",
    "ConstantDegenerateError", "NonlinearityContractError",
    "SingularJacobianError", "ConfigError",
    # factorization
    "AdmissibilityReport", "Factorization", "ParamPair", "check_admissible",
    "factor_params", "resonance_curve", "resonance_function", "tail_threshold",
    # greens
    "ConstantsReport", "GreenKernel", "KernelBoundsReport", "build_kernel",
    "closed_form_1d", "diagonal_growth", "estimate_constants",
    "verify_kernel_bounds",
    # linear
    "LinearProblem", "solve_green_quadrature", "solve_single_helmholtz",
    "solve_spectral", "symbol",
    # nonlinear
    "ClassificationReport", "GrowthClass", "LimitRatioReport", "Nonlinearity",
    "SolveReport", "StatePair", "SystemParams", "apply_T", "classify_growth",
    "cone_sigma", "estimate_limit_ratios", "newton_solve", "picard_solve",
    "radius_report", "verify_cone",
    # fd
    "fd_composite", "fd_eigenvalues", "fd_laplacian", "fd_min_pivot",
    "fd_newton", "fd_solve",
    # config / checks
    "ExperimentConfig", "build_nonlinearity", "config_from_dict",
    "load_config", "CheckResult", "run_suite", "suite_passed",
]
