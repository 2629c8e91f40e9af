"""The single table of pass/fail thresholds used by every suite and report.

Checks compare a metric against one of these bounds; nothing else in the
package hard-codes a tolerance decision.  Directions:

==============================  =========  ======================================
name                            direction  meaning
==============================  =========  ======================================
SLACK_TOL                       >= -tol    inequality slack floor (monotonicity,
                                           trace bound, Hoelder bound, gaps)
ALGEBRAIC_RESIDUAL_TOL          <= tol     determinant-form identity residual
QUADRATURE_RESIDUAL_TOL         <= tol     fundamental-theorem residual at
                                           SIMPSON_PANELS panels
FD_RELATIVE_TOL                 <= tol     derivative vs central difference,
                                           relative to 1 + |derivative|
FD_DELTA                        n/a        central-difference half-step
SIMPSON_PANELS                  n/a        panel count for the quadrature checks
EIGEN_RECONSTRUCT_TOL           <= tol     scaled reconstruction error of an
                                           eigendecomposition
LOEWNER_TOL                     >= -tol    smallest-eigenvalue floor for ordering
QUADRATIC_EXACTNESS_TOL         <= tol     max interior error, quadratic data
COMPARISON_TOL_1D               >= -tol    allowed min-gap drop, 1d runs
COMPARISON_TOL_2D               >= -tol    allowed min-gap drop, 2d runs
                                           (empirical evidence only; the narrow
                                           stencil is not provably monotone in 2d)
CONVERGENCE_ORDER_RANGE         in range   observed self-convergence order, 1d
CONVERGENCE_SKIP_DIFF           n/a        level differences below this are
                                           treated as "scheme exact", order
                                           estimation is skipped
CFL_AGREEMENT_FACTOR            <= f*h^2   allowed disagreement between runs at
                                           two CFL fractions on one grid
DRIFT_TOL                       <= bound   additive slack on the a-priori drift
                                           bound dim*(pi/2)*T
==============================  =========  ======================================
"""

SLACK_TOL = 1e-10
ALGEBRAIC_RESIDUAL_TOL = 1e-10
QUADRATURE_RESIDUAL_TOL = 1e-8
FD_RELATIVE_TOL = 1e-6
FD_DELTA = 1e-5
SIMPSON_PANELS = 256
EIGEN_RECONSTRUCT_TOL = 1e-12
LOEWNER_TOL = 1e-12
QUADRATIC_EXACTNESS_TOL = 1e-10
COMPARISON_TOL_1D = 1e-12
COMPARISON_TOL_2D = 1e-8
CONVERGENCE_ORDER_RANGE = (1.7, 2.3)
CONVERGENCE_SKIP_DIFF = 1e-13
CFL_AGREEMENT_FACTOR = 10.0
DRIFT_TOL = 1e-8
