"""Toolkit for the fully nonlinear parabolic flow u_t = sum_j arctan(lambda_j(D^2 u)):
symmetric-matrix calculus for the arctan-eigenvalue operator, property checks for
its monotonicity/bound hypotheses, a monotone explicit finite-difference solver,
and a seeded experiment harness with a CLI."""

from .symmat import (
    SymMat,
    EigenDecomp,
    eigen_decompose,
    eigenvalues_descending,
    positive_part,
    trace_positive_part,
    loewner_geq,
    spd_solve,
    weyl_monotonicity_check,
)
from .operator import (
    CheckEntry,
    HypothesisReport,
    lagrangian_angle,
    detform_residual,
    path_value,
    path_derivative,
    integral_identity_residual,
    h1_monotonicity_check,
    h2_bound_check,
)
from .pde import (
    Grid,
    Field,
    BoundaryCondition,
    ProblemSpec,
    discrete_hessian,
    rhs,
    cfl_max_dt,
    step,
    solve,
    comparison_gap,
)
from .harness import (
    random_symmetric,
    random_ordered_pair,
    run_hypothesis_suite,
    quadratic_exactness_experiment,
    comparison_experiment,
    self_convergence_study,
    cfl_agreement_experiment,
)
from .report import ExperimentReport
from .rng import CounterRng
from .errors import (
    ConfigError,
    EigenConvergenceError,
    NotPositiveDefiniteError,
    PreconditionError,
    SolveAbortedError,
)

__version__ = "0.1.0"
