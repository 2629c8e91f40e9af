"""Dense symmetric-matrix algebra for small orders (n <= 8).

Everything here is built on two batch kernels that the rest of the package
shares: a cyclic Jacobi eigensolver and a Cholesky solve, both vectorized
over a leading batch axis.  The public single-matrix operations delegate to
the kernels with a batch of one, so suites that need many decompositions can
call the kernels directly on stacked inputs and get identical arithmetic.

The Jacobi solver applies rotations in a fixed cyclic (p, q) order with the
classic stable angle choice, so decompositions are deterministic for a given
input.  Eigenvalues are returned in descending order with stable ties, and
each eigenvector column is sign-fixed by making its largest-magnitude
component positive.
"""

from __future__ import annotations

import time
from dataclasses import dataclass

import numpy as np

from .errors import EigenConvergenceError, NotPositiveDefiniteError, PreconditionError
from .report import make_report
from .thresholds import LOEWNER_TOL, SLACK_TOL

# Constructor rejects input whose asymmetry exceeds this (absolute).
ASYMMETRY_TOL = 1e-12

JACOBI_DEFAULT_TOL = 1e-12
JACOBI_SWEEP_LIMIT = 100

_EPS = np.finfo(np.float64).eps


def sym_part(m: np.ndarray) -> np.ndarray:
    """(M + M^T)/2 along the last two axes; exactly symmetric in floats."""
    return (m + np.swapaxes(m, -1, -2)) / 2.0


@dataclass(frozen=True, eq=False)
class SymMat:
    """Immutable real symmetric matrix.

    Accepts anything array-like; rejects non-square, non-finite, or
    asymmetric (beyond ``ASYMMETRY_TOL``) input, then stores the exactly
    symmetrized entries read-only.
    """

    entries: np.ndarray

    def __post_init__(self):
        m = np.array(self.entries, dtype=np.float64)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ValueError(f"expected a square matrix, got shape {m.shape}")
        if m.shape[0] < 1:
            raise ValueError("matrix order must be >= 1")
        if not np.isfinite(m).all():
            raise ValueError("matrix entries must be finite")
        asym = float(np.abs(m - m.T).max())
        if asym > ASYMMETRY_TOL:
            raise ValueError(
                f"matrix is asymmetric: max |M - M^T| = {asym:.3e} exceeds {ASYMMETRY_TOL:.1e}"
            )
        m = sym_part(m)
        m.flags.writeable = False
        object.__setattr__(self, "entries", m)

    @property
    def order(self) -> int:
        return self.entries.shape[0]

    @classmethod
    def identity(cls, n: int) -> "SymMat":
        return cls(np.eye(n))

    @classmethod
    def zeros(cls, n: int) -> "SymMat":
        return cls(np.zeros((n, n)))

    @classmethod
    def diagonal(cls, values) -> "SymMat":
        return cls(np.diag(np.asarray(values, dtype=np.float64)))

    def __add__(self, other: "SymMat") -> "SymMat":
        return SymMat(self.entries + other.entries)

    def __sub__(self, other: "SymMat") -> "SymMat":
        return SymMat(self.entries - other.entries)

    def __neg__(self) -> "SymMat":
        return SymMat(-self.entries)

    def __mul__(self, scalar: float) -> "SymMat":
        return SymMat(self.entries * float(scalar))

    __rmul__ = __mul__

    def __repr__(self) -> str:
        return f"SymMat({self.entries.tolist()!r})"


@dataclass(frozen=True, eq=False)
class EigenDecomp:
    """Orthogonal basis (columns are eigenvectors) and descending eigenvalues."""

    basis: np.ndarray
    eigenvalues: np.ndarray

    def __post_init__(self):
        basis = np.array(self.basis, dtype=np.float64)
        vals = np.array(self.eigenvalues, dtype=np.float64)
        n = vals.shape[0]
        if basis.shape != (n, n):
            raise ValueError(f"basis shape {basis.shape} does not match {n} eigenvalues")
        ortho = float(np.abs(basis.T @ basis - np.eye(n)).max())
        if ortho > 1e-12:
            raise ValueError(f"basis is not orthogonal: max |P^T P - I| = {ortho:.3e}")
        if np.any(np.diff(vals) > 0.0):
            raise ValueError("eigenvalues must be sorted in descending order")
        basis.flags.writeable = False
        vals.flags.writeable = False
        object.__setattr__(self, "basis", basis)
        object.__setattr__(self, "eigenvalues", vals)

    def reconstruct(self) -> np.ndarray:
        return self.basis @ np.diag(self.eigenvalues) @ self.basis.T


def _jacobi_sweep(a: np.ndarray, v: np.ndarray | None, active: np.ndarray) -> None:
    """One cyclic sweep of plane rotations over every (p, q) pair, batched.

    Matrices flagged inactive get identity rotations (t = 0), so their
    entries are left untouched.
    """
    n = a.shape[1]
    for p in range(n - 1):
        for q in range(p + 1, n):
            apq = a[:, p, q].copy()
            rot = active & (apq != 0.0)
            if not rot.any():
                continue
            app = a[:, p, p].copy()
            aqq = a[:, q, q].copy()
            with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
                tau = (aqq - app) / (2.0 * apq)
                t = np.sign(tau) / (np.abs(tau) + np.sqrt(1.0 + tau * tau))
            t = np.where(tau == 0.0, 1.0, t)  # equal diagonal entries: 45-degree rotation
            t = np.where(rot, t, 0.0)
            c = 1.0 / np.sqrt(1.0 + t * t)
            s = t * c
            cc = c[:, None]
            ss = s[:, None]

            colp = a[:, :, p].copy()
            colq = a[:, :, q].copy()
            a[:, :, p] = cc * colp - ss * colq
            a[:, :, q] = ss * colp + cc * colq
            # rows follow by symmetry; the four (p, q) crossings are set exactly
            a[:, p, :] = a[:, :, p]
            a[:, q, :] = a[:, :, q]
            a[:, p, p] = app - t * apq
            a[:, q, q] = aqq + t * apq
            zeroed = np.where(rot, 0.0, apq)
            a[:, p, q] = zeroed
            a[:, q, p] = zeroed

            if v is not None:
                vp = v[:, :, p].copy()
                vq = v[:, :, q].copy()
                v[:, :, p] = cc * vp - ss * vq
                v[:, :, q] = ss * vp + cc * vq


def jacobi_eigen_batch(
    mats: np.ndarray,
    tol: float = JACOBI_DEFAULT_TOL,
    with_vectors: bool = True,
    sweep_limit: int = JACOBI_SWEEP_LIMIT,
) -> tuple[np.ndarray, np.ndarray | None]:
    """Eigendecompose a (B, n, n) stack of symmetric matrices by cyclic Jacobi.

    Returns descending eigenvalues (B, n) and, when requested, the orthogonal
    bases (B, n, n).  A matrix counts as converged once its largest
    off-diagonal magnitude falls below a rounding-level floor, or stops
    improving while already below ``tol * (1 + max|entry|)``; converged
    matrices are frozen while the rest of the batch finishes.  Failure to
    converge within ``sweep_limit`` sweeps raises, naming the worst scaled
    residual achieved.
    """
    if tol <= 0.0:
        raise ValueError(f"tol must be positive, got {tol}")
    a = np.array(mats, dtype=np.float64)
    if a.ndim != 3 or a.shape[1] != a.shape[2]:
        raise ValueError(f"expected a (B, n, n) stack, got shape {a.shape}")
    nbatch, n, _ = a.shape
    v = None
    if with_vectors:
        v = np.zeros_like(a)
        v[:, range(n), range(n)] = 1.0

    if n > 1 and nbatch > 0:
        iu, ju = np.triu_indices(n, k=1)
        scale = 1.0 + np.abs(a).max(axis=(1, 2))
        floor = 2.0 * _EPS * scale
        tol_abs = tol * scale
        done = np.zeros(nbatch, dtype=bool)
        prev_off = np.full(nbatch, np.inf)
        off = np.abs(a[:, iu, ju]).max(axis=1)
        sweeps = 0
        while True:
            done |= off <= floor
            done |= (off >= prev_off) & (off <= tol_abs)
            if done.all() or sweeps >= sweep_limit:
                break
            prev_off = off
            _jacobi_sweep(a, v, ~done)
            sweeps += 1
            off = np.abs(a[:, iu, ju]).max(axis=1)
        if not done.all():
            worst = float((off / scale)[~done].max())
            raise EigenConvergenceError(worst, sweeps, tol)

    vals = a[:, range(n), range(n)].copy()
    order = np.argsort(-vals, axis=1, kind="stable")
    vals = np.take_along_axis(vals, order, axis=1)
    if v is not None:
        v = np.take_along_axis(v, order[:, None, :], axis=2)
        lead = np.argmax(np.abs(v), axis=1)  # row of the largest component, per column
        picked = np.take_along_axis(v, lead[:, None, :], axis=1)[:, 0, :]
        v *= np.where(picked < 0.0, -1.0, 1.0)[:, None, :]
    return vals, v


def eigvals_batch(mats: np.ndarray, tol: float = JACOBI_DEFAULT_TOL) -> np.ndarray:
    """Descending eigenvalues of a (B, n, n) stack; no eigenvectors."""
    vals, _ = jacobi_eigen_batch(mats, tol=tol, with_vectors=False)
    return vals


def eigen_decompose(x: SymMat, tol: float = JACOBI_DEFAULT_TOL) -> EigenDecomp:
    """Full eigendecomposition of one matrix; deterministic for fixed input."""
    vals, v = jacobi_eigen_batch(x.entries[None, :, :], tol=tol, with_vectors=True)
    return EigenDecomp(basis=v[0], eigenvalues=vals[0])


def eigenvalues_descending(x: SymMat, tol: float = JACOBI_DEFAULT_TOL) -> np.ndarray:
    return eigvals_batch(x.entries[None, :, :], tol=tol)[0]


def positive_part(x: SymMat) -> SymMat:
    """Spectral positive part: negative eigenvalues replaced by zero."""
    dec = eigen_decompose(x)
    clipped = np.maximum(dec.eigenvalues, 0.0)
    return SymMat(sym_part((dec.basis * clipped[None, :]) @ dec.basis.T))


def trace_positive_part(x: SymMat) -> float:
    """Sum of the positive eigenvalues."""
    vals = eigenvalues_descending(x)
    return float(np.maximum(vals, 0.0).sum())


def loewner_geq(x: SymMat, y: SymMat, tol: float = LOEWNER_TOL) -> bool:
    """True iff X - Y is positive semidefinite up to an eigenvalue floor of -tol."""
    if x.order != y.order:
        raise ValueError(f"order mismatch: {x.order} vs {y.order}")
    smallest = eigenvalues_descending(x - y)[-1]
    return bool(smallest >= -tol)


def cholesky_solve_batch(c: np.ndarray, d: np.ndarray) -> np.ndarray:
    """Solve C Z = D for a (B, n, n) SPD stack and (B, n, m) right-hand sides.

    Unpivoted Cholesky; a non-positive pivot raises, naming the pivot value
    and its row.
    """
    c = np.asarray(c, dtype=np.float64)
    d = np.asarray(d, dtype=np.float64)
    nbatch, n, _ = c.shape
    ell = np.zeros_like(c)
    for j in range(n):
        pivot = c[:, j, j] - np.einsum("bk,bk->b", ell[:, j, :j], ell[:, j, :j])
        if not (pivot > 0.0).all():
            bad = int(np.argmin(pivot))
            raise NotPositiveDefiniteError(float(pivot[bad]), j)
        ell[:, j, j] = np.sqrt(pivot)
        if j + 1 < n:
            ell[:, j + 1 :, j] = (
                c[:, j + 1 :, j] - np.einsum("bik,bk->bi", ell[:, j + 1 :, :j], ell[:, j, :j])
            ) / ell[:, j, j][:, None]

    y = np.empty_like(d)
    for i in range(n):
        y[:, i, :] = (
            d[:, i, :] - np.einsum("bk,bkm->bm", ell[:, i, :i], y[:, :i, :])
        ) / ell[:, i, i][:, None]
    z = np.empty_like(d)
    for i in range(n - 1, -1, -1):
        z[:, i, :] = (
            y[:, i, :] - np.einsum("bk,bkm->bm", ell[:, i + 1 :, i], z[:, i + 1 :, :])
        ) / ell[:, i, i][:, None]
    return z


def spd_solve(c: SymMat, m: np.ndarray) -> np.ndarray:
    """Solve C Z = M for symmetric positive definite C via Cholesky."""
    rhs = np.asarray(m, dtype=np.float64)
    vector = rhs.ndim == 1
    if vector:
        rhs = rhs[:, None]
    if rhs.shape[0] != c.order:
        raise ValueError(f"right-hand side has {rhs.shape[0]} rows, expected {c.order}")
    z = cholesky_solve_batch(c.entries[None, :, :], rhs[None, :, :])[0]
    return z[:, 0] if vector else z


def weyl_monotonicity_check(x: SymMat, y: SymMat):
    """Per-index gaps between the descending spectra of an ordered pair.

    Requires X >= Y in the semidefinite order (checked); the gaps
    lambda_j(X) - lambda_j(Y) are then reported with the smallest one tested
    against the slack floor.
    """
    t0 = time.perf_counter()
    if x.order != y.order:
        raise ValueError(f"order mismatch: {x.order} vs {y.order}")
    if not loewner_geq(x, y, LOEWNER_TOL):
        raise PreconditionError(
            "weyl_monotonicity_check requires X >= Y in the semidefinite order"
        )
    vals = eigvals_batch(np.stack([x.entries, y.entries]))
    gaps = vals[0] - vals[1]
    metrics = {f"gap_{j}": float(g) for j, g in enumerate(gaps)}
    metrics["min_gap"] = float(gaps.min())
    ok = metrics["min_gap"] >= -SLACK_TOL
    return make_report(
        experiment_id="weyl_monotonicity",
        seed=0,
        parameters={"n": x.order},
        metrics=metrics,
        checks={"min_gap": (-SLACK_TOL, ok)},
        runtime_ms=(time.perf_counter() - t0) * 1e3,
    )
