"""Numerics for Atangana-Baleanu-Caputo fractional initial value problems.

Submodules: ``special_functions`` (Mittag-Leffler functions), ``operators``
(ABC derivative, AB and Riemann-Liouville integrals), ``solver`` (integral
equation solver, delay and extremal solutions, continuation) and
``inequality_lab`` (executable comparison and extreme-point checks).
"""

from .errors import (
    ABCError,
    ConsistencyError,
    ContractionViolation,
    DerivativeUnavailable,
    DomainError,
    DominationFailure,
    HypothesisViolation,
    MajorantFailure,
    NoConvergence,
    NonConvergence,
    PreconditionUnmet,
    QuadratureFailure,
)
from .operators import (
    DifferentiableInput,
    FractionalOrder,
    Normalization,
    NormKind,
    Trajectory,
    UniformGrid,
    ab_integral,
    abc_derivative,
    rl_integral,
)
from .solver import (
    ConsistencyMode,
    DelayConfig,
    IVProblem,
    RhsFunction,
    SolverConfig,
    consistency_check,
    continue_globally,
    equicontinuity_modulus,
    extremal_existence_interval,
    local_existence_interval,
    solve_delay_approx,
    solve_extremal,
    solve_ivp,
)
from .special_functions import MLParams, SeriesControl, ml1, ml2, ml3, ml_neg_spectral, spectral_kernel

__version__ = "0.1.0"
