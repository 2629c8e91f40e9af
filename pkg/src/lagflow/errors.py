"""Exception types shared across the package."""


class EigenConvergenceError(RuntimeError):
    """Jacobi sweeps exhausted before the off-diagonal residual dropped below tolerance."""

    def __init__(self, residual: float, sweeps: int, tol: float):
        self.residual = residual
        self.sweeps = sweeps
        self.tol = tol
        super().__init__(
            f"eigendecomposition did not converge after {sweeps} sweeps: "
            f"off-diagonal residual {residual:.3e} exceeds tolerance {tol:.3e}"
        )


class NotPositiveDefiniteError(ValueError):
    """A symmetric factorization hit a non-positive pivot."""

    def __init__(self, pivot: float, index: int):
        self.pivot = pivot
        self.index = index
        super().__init__(f"matrix is not positive definite: pivot {pivot:.3e} at row {index}")


class PreconditionError(ValueError):
    """A conditional check was invoked on inputs that violate its hypothesis.

    Raised distinctly from a hypothesis *failure*: this error means the check
    does not apply, not that the checked inequality is false.
    """


class SolveAbortedError(RuntimeError):
    """The time stepper produced a non-finite value."""

    def __init__(self, step: int, time: float):
        self.step = step
        self.time = time
        super().__init__(f"non-finite field value at step {step} (t = {time:.6g})")


class ConfigError(ValueError):
    """A run configuration failed validation; ``field`` names the offending entry."""

    def __init__(self, field: str, message: str):
        self.field = field
        super().__init__(f"config field '{field}': {message}")
