"""The operator F(X) = sum_j arctan(lambda_j(X)) and its calculus.

F is always evaluated through eigenvalues.  The determinant-form identity

    exp(2i F(X)) * det(I - iX) = det(I + iX)

is checked in this branch-free exponential form (no complex logarithm is
ever taken, so values of F beyond pi cause no branch trouble), with the
determinants computed by complex LU with partial pivoting -- deliberately
not from the eigenvalues, so the two sides of the check are independent.

Along the segment M(t) = tX + (1-t)Y the map t -> F(M(t)) has derivative
tr(C(t)^{-1} (X - Y)) with C(t) = I + M(t)^2, which this module evaluates
through a Cholesky solve, differentiates against central differences, and
integrates with composite Simpson to reproduce F(X) - F(Y).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np

from .errors import PreconditionError
from .symmat import (
    SymMat,
    cholesky_solve_batch,
    eigvals_batch,
    spd_solve,
    sym_part,
    trace_positive_part,
    loewner_geq,
)
from .thresholds import LOEWNER_TOL, SLACK_TOL


@dataclass(frozen=True)
class CheckEntry:
    """Outcome of one hypothesis check on one input: named slacks and a verdict."""

    check: str
    slacks: Mapping[str, float]
    passed: bool


@dataclass(frozen=True)
class HypothesisReport:
    """Aggregate of a hypothesis check over many trials."""

    check: str
    trials: int
    violations: int
    worst_margin: float
    max_residual: float
    seed: int

    def __post_init__(self):
        if self.violations > self.trials:
            raise ValueError("violations cannot exceed trials")

    @classmethod
    def from_entries(
        cls, check: str, entries: Sequence[CheckEntry], seed: int, residuals: Sequence[float] = ()
    ) -> "HypothesisReport":
        worst = min((s for e in entries for s in e.slacks.values()), default=math.inf)
        return cls(
            check=check,
            trials=len(entries),
            violations=sum(not e.passed for e in entries),
            worst_margin=float(worst),
            max_residual=float(max(residuals, default=0.0)),
            seed=seed,
        )


def angle_from_eigvals(vals: np.ndarray) -> np.ndarray:
    """Sum of arctans along the last axis."""
    return np.arctan(vals).sum(axis=-1)


def lagrangian_angle(x: SymMat) -> float:
    """F(X) = sum_j arctan(lambda_j); lies strictly inside (-n*pi/2, n*pi/2)."""
    return float(angle_from_eigvals(eigvals_batch(x.entries[None, :, :])[0]))


def complex_lu_det_batch(mats: np.ndarray) -> np.ndarray:
    """Determinants of a (B, n, n) complex stack via LU with partial pivoting."""
    a = np.array(mats, dtype=np.complex128)
    nbatch, n, _ = a.shape
    det = np.ones(nbatch, dtype=np.complex128)
    negate = np.zeros(nbatch, dtype=bool)
    for k in range(n):
        piv = k + np.abs(a[:, k:, k]).argmax(axis=1)
        swap = np.nonzero(piv != k)[0]
        if swap.size:
            rows_k = a[swap, k, :].copy()
            a[swap, k, :] = a[swap, piv[swap], :]
            a[swap, piv[swap], :] = rows_k
            negate[swap] ^= True
        akk = a[:, k, k]
        det *= akk
        if k + 1 < n:
            with np.errstate(divide="ignore", invalid="ignore"):
                factors = a[:, k + 1 :, k] / akk[:, None]
            factors = np.where(np.isfinite(factors), factors, 0.0)  # singular: det is 0 already
            a[:, k + 1 :, k + 1 :] -= factors[:, :, None] * a[:, k, None, k + 1 :]
    return np.where(negate, -det, det)


def detform_residual_batch(mats: np.ndarray, angles: np.ndarray) -> np.ndarray:
    """|exp(2iF) det(I-iX) - det(I+iX)| / |det(I+iX)| for a (B, n, n) stack."""
    nbatch, n, _ = mats.shape
    eye = np.eye(n)
    plus = eye[None, :, :] + 1j * mats
    minus = eye[None, :, :] - 1j * mats
    dets = complex_lu_det_batch(np.concatenate([plus, minus], axis=0))
    dplus, dminus = dets[:nbatch], dets[nbatch:]
    return np.abs(np.exp(2j * angles) * dminus - dplus) / np.abs(dplus)


def detform_residual(x: SymMat) -> float:
    """Residual of the determinant identity for one matrix.

    The left side uses F from eigenvalues, the right side determinants from
    complex LU; |det(I+iX)|^2 = det(I+X^2) >= 1, so the scaling never
    degenerates.
    """
    f = lagrangian_angle(x)
    return float(detform_residual_batch(x.entries[None, :, :], np.array([f]))[0])


def _segment(x: SymMat, y: SymMat, t: float) -> np.ndarray:
    if x.order != y.order:
        raise ValueError(f"order mismatch: {x.order} vs {y.order}")
    if not 0.0 <= t <= 1.0:
        raise ValueError(f"t must lie in [0, 1], got {t}")
    return t * x.entries + (1.0 - t) * y.entries


def path_value(x: SymMat, y: SymMat, t: float) -> float:
    """F evaluated on the segment tX + (1-t)Y."""
    return float(angle_from_eigvals(eigvals_batch(_segment(x, y, t)[None, :, :])[0]))


def path_derivative(x: SymMat, y: SymMat, t: float) -> float:
    """tr(C^{-1} (X - Y)) with C = I + (tX + (1-t)Y)^2, via Cholesky."""
    m = _segment(x, y, t)
    c = SymMat(np.eye(x.order) + sym_part(m @ m))
    try:
        z = spd_solve(c, x.entries - y.entries)
    except Exception as exc:  # C is PD for any real symmetric segment
        raise RuntimeError(f"internal numerical fault: I + M^2 solve failed ({exc})") from exc
    return float(np.trace(z))


def simpson_weights(panels: int) -> np.ndarray:
    """Composite Simpson weights on panels+1 uniform nodes over [0, 1]."""
    if panels < 2 or panels % 2 != 0:
        raise ValueError(f"panels must be an even count >= 2, got {panels}")
    w = np.ones(panels + 1)
    w[1:-1:2] = 4.0
    w[2:-1:2] = 2.0
    return w / (3.0 * panels)


def path_derivative_nodes(
    x_entries: np.ndarray, y_entries: np.ndarray, ts: np.ndarray
) -> np.ndarray:
    """Vectorized tr(C(t)^{-1}(X - Y)) over a set of path positions."""
    n = x_entries.shape[0]
    diff = x_entries - y_entries
    m = ts[:, None, None] * x_entries + (1.0 - ts)[:, None, None] * y_entries
    c = np.eye(n)[None, :, :] + sym_part(m @ m)
    rhs = np.broadcast_to(diff, c.shape)
    z = cholesky_solve_batch(c, rhs)
    return np.einsum("bii->b", z)


def integral_identity_residual(x: SymMat, y: SymMat, panels: int) -> float:
    """|F(X) - F(Y) - Q| with Q the Simpson quadrature of the path derivative.

    The integrand is tr(C^{-1}(X - Y)), the form whose integral telescopes to
    F(X) - F(Y).
    """
    w = simpson_weights(panels)
    if x.order != y.order:
        raise ValueError(f"order mismatch: {x.order} vs {y.order}")
    ts = np.arange(panels + 1, dtype=np.float64) / panels
    quad = float(w @ path_derivative_nodes(x.entries, y.entries, ts))
    vals = eigvals_batch(np.stack([x.entries, y.entries]))
    gap = float(angle_from_eigvals(vals[0]) - angle_from_eigvals(vals[1]))
    return abs(gap - quad)


def h1_monotonicity_check(x: SymMat, y: SymMat) -> CheckEntry:
    """Slack of F(X) - F(Y) >= 0 for an ordered pair X >= Y (checked)."""
    if not loewner_geq(x, y, LOEWNER_TOL):
        raise PreconditionError("h1_monotonicity_check requires X >= Y in the semidefinite order")
    vals = eigvals_batch(np.stack([x.entries, y.entries]))
    slack = float(angle_from_eigvals(vals[0]) - angle_from_eigvals(vals[1]))
    return CheckEntry("h1_monotonicity", {"slack": slack}, slack >= -SLACK_TOL)


def h2_slacks(gap: float, trace_plus: float, n: int, alpha: float) -> dict[str, float]:
    """Slacks of the trace bound and the Hoelder bound with constant n*pi."""
    return {
        "trace_slack": trace_plus - gap,
        "holder_slack": n * math.pi * trace_plus**alpha - gap,
    }


def h2_bound_check(x: SymMat, y: SymMat, alpha: float) -> CheckEntry:
    """Unconditional degenerate-ellipticity bounds on F(X) - F(Y).

    Checks F(X) - F(Y) <= tr(X - Y)^+ and the Hoelder form with constant
    n*pi; also reports the strict margin n*pi - (F(X) - F(Y)).
    """
    if x.order != y.order:
        raise ValueError(f"order mismatch: {x.order} vs {y.order}")
    if not 0.0 < alpha < 1.0:
        raise ValueError(f"alpha must lie in (0, 1), got {alpha}")
    vals = eigvals_batch(np.stack([x.entries, y.entries]))
    gap = float(angle_from_eigvals(vals[0]) - angle_from_eigvals(vals[1]))
    slacks = h2_slacks(gap, trace_positive_part(x - y), x.order, alpha)
    passed = all(s >= -SLACK_TOL for s in slacks.values())
    slacks["strict_margin"] = x.order * math.pi - gap
    return CheckEntry("h2_bound", slacks, passed)
