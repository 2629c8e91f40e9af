"""Explicit monotone finite-difference solver for u_t = sum_j arctan(lambda_j(D^2 u)).

Uniform 1d/2d grids, centered second differences, forward Euler in time.
Under the CFL bound the 1d update is monotone in every stencil value, which
is what makes the discrete comparison experiments work by construction; in
2d the cross-difference term breaks guaranteed monotonicity (narrow-stencil
limitation), so 2d comparison results are empirical evidence only.  See the
README for the CFL derivation.

Boundary modes: periodic (stencils wrap) and Dirichlet with time-dependent
values (boundary nodes overwritten after each step).
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Callable

import numpy as np

from .errors import SolveAbortedError
from .symmat import SymMat

DIRICHLET = "dirichlet"
PERIODIC = "periodic"

# Tolerated relative overshoot of the CFL bound before a step is rejected.
_CFL_REL_SLACK = 1e-12


@dataclass(frozen=True)
class Grid:
    """Uniform rectangular lattice; node i sits at origin + i*h per axis."""

    dim: int
    counts: tuple[int, ...]
    spacing: float
    origin: tuple[float, ...]

    def __post_init__(self):
        if self.dim not in (1, 2):
            raise ValueError(f"dim must be 1 or 2, got {self.dim}")
        counts = tuple(int(c) for c in self.counts)
        origin = tuple(float(o) for o in self.origin)
        if len(counts) != self.dim or len(origin) != self.dim:
            raise ValueError("counts and origin must have one entry per axis")
        if any(c < 5 for c in counts):
            raise ValueError(f"need at least 5 nodes per axis, got {counts}")
        if not self.spacing > 0.0:
            raise ValueError(f"spacing must be positive, got {self.spacing}")
        object.__setattr__(self, "counts", counts)
        object.__setattr__(self, "origin", origin)
        object.__setattr__(self, "spacing", float(self.spacing))

    @classmethod
    def line(cls, count: int, spacing: float, origin: float = 0.0) -> "Grid":
        return cls(1, (count,), spacing, (origin,))

    @classmethod
    def box(cls, counts: tuple[int, int], spacing: float, origin=(0.0, 0.0)) -> "Grid":
        return cls(2, tuple(counts), spacing, tuple(origin))

    @property
    def node_count(self) -> int:
        return int(np.prod(self.counts))

    def axis_coords(self, axis: int) -> np.ndarray:
        return self.origin[axis] + self.spacing * np.arange(self.counts[axis])

    def points(self) -> np.ndarray:
        """All node coordinates, shape (node_count, dim), row-major."""
        if self.dim == 1:
            return self.axis_coords(0)[:, None]
        xx, yy = np.meshgrid(self.axis_coords(0), self.axis_coords(1), indexing="ij")
        return np.stack([xx.ravel(), yy.ravel()], axis=1)

    def boundary_mask(self) -> np.ndarray:
        """Boolean array over the value shape; True on boundary nodes."""
        mask = np.zeros(self.counts, dtype=bool)
        if self.dim == 1:
            mask[0] = mask[-1] = True
        else:
            mask[0, :] = mask[-1, :] = True
            mask[:, 0] = mask[:, -1] = True
        return mask


@dataclass(frozen=True)
class BoundaryCondition:
    """Periodic, or Dirichlet with values from a callable (points, t) -> values."""

    kind: str
    value: Callable[[np.ndarray, float], np.ndarray] | None = None

    def __post_init__(self):
        if self.kind not in (DIRICHLET, PERIODIC):
            raise ValueError(f"unknown boundary kind {self.kind!r}")
        if self.kind == DIRICHLET and self.value is None:
            raise ValueError("Dirichlet boundary needs a value function")
        if self.kind == PERIODIC and self.value is not None:
            raise ValueError("periodic boundary takes no value function")

    @classmethod
    def periodic(cls) -> "BoundaryCondition":
        return cls(PERIODIC)

    @classmethod
    def dirichlet(cls, value: Callable[[np.ndarray, float], np.ndarray]) -> "BoundaryCondition":
        return cls(DIRICHLET, value)


@dataclass(frozen=True)
class Field:
    """Nodal values of u on a grid at one instant."""

    grid: Grid
    values: np.ndarray
    time: float = 0.0

    def __post_init__(self):
        vals = np.array(self.values, dtype=np.float64)
        if vals.shape != self.grid.counts:
            raise ValueError(f"value shape {vals.shape} does not match grid {self.grid.counts}")
        if not np.isfinite(vals).all():
            raise ValueError("field values must be finite")
        vals.flags.writeable = False
        object.__setattr__(self, "values", vals)
        object.__setattr__(self, "time", float(self.time))

    @classmethod
    def sample(cls, grid: Grid, fn: Callable[[np.ndarray], np.ndarray], time: float = 0.0) -> "Field":
        vals = np.asarray(fn(grid.points()), dtype=np.float64).reshape(grid.counts)
        return cls(grid, vals, time)


@dataclass(frozen=True)
class ProblemSpec:
    """Everything a solve needs: grid, boundary, initial data, horizon, step policy."""

    grid: Grid
    bc: BoundaryCondition
    initial: Callable[[np.ndarray], np.ndarray]
    horizon: float
    dt_fraction: float = 0.9
    snapshot_every: int = 1

    def __post_init__(self):
        if self.horizon < 0.0:
            raise ValueError(f"horizon must be >= 0, got {self.horizon}")
        if not 0.0 < self.dt_fraction <= 1.0:
            raise ValueError(f"dt_fraction must lie in (0, 1], got {self.dt_fraction}")
        if self.snapshot_every < 1:
            raise ValueError("snapshot_every must be >= 1")


def _second_diffs(values: np.ndarray, h: float, periodic: bool) -> tuple[np.ndarray, ...]:
    """Centered second differences on the stencil-complete nodes.

    Periodic: full value shape, indices wrapping.  Dirichlet: interior shape
    (one layer trimmed per side).
    """
    h2 = h * h
    if values.ndim == 1:
        if periodic:
            up = np.roll(values, -1)
            dn = np.roll(values, 1)
            return ((up - 2.0 * values + dn) / h2,)
        return ((values[2:] - 2.0 * values[1:-1] + values[:-2]) / h2,)
    if periodic:
        xe = np.roll(values, -1, axis=0)
        xw = np.roll(values, 1, axis=0)
        yn = np.roll(values, -1, axis=1)
        ys = np.roll(values, 1, axis=1)
        dxx = (xe - 2.0 * values + xw) / h2
        dyy = (yn - 2.0 * values + ys) / h2
        ne = np.roll(xe, -1, axis=1)
        sw = np.roll(xw, 1, axis=1)
        nw = np.roll(xw, -1, axis=1)
        se = np.roll(xe, 1, axis=1)
        dxy = (ne + sw - se - nw) / (4.0 * h2)
        return dxx, dyy, dxy
    mid = values[1:-1, 1:-1]
    dxx = (values[2:, 1:-1] - 2.0 * mid + values[:-2, 1:-1]) / h2
    dyy = (values[1:-1, 2:] - 2.0 * mid + values[1:-1, :-2]) / h2
    dxy = (values[2:, 2:] + values[:-2, :-2] - values[2:, :-2] - values[:-2, 2:]) / (4.0 * h2)
    return dxx, dyy, dxy


def discrete_hessian(f: Field, node: int | tuple[int, ...], bc: BoundaryCondition) -> SymMat:
    """Second-difference Hessian at one node; exact on quadratics.

    Periodic stencils wrap; under Dirichlet a boundary node is rejected.
    """
    g = f.grid
    idx = (node,) if isinstance(node, int) else tuple(node)
    if len(idx) != g.dim:
        raise ValueError(f"node index {idx} does not match grid dimension {g.dim}")
    periodic = bc.kind == PERIODIC
    for axis, i in enumerate(idx):
        n = g.counts[axis]
        if periodic:
            if not 0 <= i < n:
                raise ValueError(f"node index {i} outside axis of {n} nodes")
        elif not 1 <= i <= n - 2:
            raise ValueError(f"node {idx} touches the Dirichlet boundary; no full stencil")

    u = f.values
    h2 = g.spacing * g.spacing
    if g.dim == 1:
        (i,) = idx
        n = g.counts[0]
        d = (u[(i + 1) % n] - 2.0 * u[i] + u[(i - 1) % n]) / h2
        return SymMat([[d]])
    i, j = idx
    nx, ny = g.counts
    ip, im = (i + 1) % nx, (i - 1) % nx
    jp, jm = (j + 1) % ny, (j - 1) % ny
    dxx = (u[ip, j] - 2.0 * u[i, j] + u[im, j]) / h2
    dyy = (u[i, jp] - 2.0 * u[i, j] + u[i, jm]) / h2
    dxy = (u[ip, jp] + u[im, jm] - u[ip, jm] - u[im, jp]) / (4.0 * h2)
    return SymMat([[dxx, dxy], [dxy, dyy]])


def _angle_sum(diffs: tuple[np.ndarray, ...]) -> np.ndarray:
    """Sum of arctans of the discrete-Hessian eigenvalues, elementwise."""
    if len(diffs) == 1:
        return np.arctan(diffs[0])
    dxx, dyy, dxy = diffs
    mean = 0.5 * (dxx + dyy)
    radius = np.hypot(0.5 * (dxx - dyy), dxy)
    return np.arctan(mean + radius) + np.arctan(mean - radius)


def rhs(f: Field, bc: BoundaryCondition) -> np.ndarray:
    """arctan-eigenvalue sum of the discrete Hessian at every stencil-complete node.

    Returned with the full field shape; under Dirichlet the boundary entries
    are zero (the boundary is driven by data, not by the operator).  Every
    computed value lies strictly inside (-dim*pi/2, dim*pi/2).
    """
    periodic = bc.kind == PERIODIC
    diffs = _second_diffs(f.values, f.grid.spacing, periodic)
    angles = _angle_sum(diffs)
    if periodic:
        return angles
    out = np.zeros_like(f.values)
    if f.grid.dim == 1:
        out[1:-1] = angles
    else:
        out[1:-1, 1:-1] = angles
    return out


def cfl_max_dt(h: float, dim: int) -> float:
    """Largest stable/monotone explicit step: h^2/2 in 1d, h^2/4 in 2d.

    The own-node coefficient of the update is 1 - dt * (2*dim/h^2) * arctan'
    in the worst case (|arctan'| <= 1, both axis stencils hitting the node);
    the bound keeps it nonnegative.
    """
    if h <= 0.0:
        raise ValueError(f"h must be positive, got {h}")
    if dim == 1:
        return h * h / 2.0
    if dim == 2:
        return h * h / 4.0
    raise ValueError(f"dim must be 1 or 2, got {dim}")


def step(f: Field, dt: float, bc: BoundaryCondition) -> Field:
    """One forward-Euler step from the previous field only (Jacobi-style).

    A dt above the CFL bound is rejected, never clamped.  Under Dirichlet the
    boundary row is overwritten with data at the new time.
    """
    limit = cfl_max_dt(f.grid.spacing, f.grid.dim)
    if not 0.0 < dt <= limit * (1.0 + _CFL_REL_SLACK):
        raise ValueError(f"dt = {dt} violates the CFL bound {limit}")
    new_time = f.time + dt
    values = f.values + dt * rhs(f, bc)
    if bc.kind == DIRICHLET:
        mask = f.grid.boundary_mask()
        values = values.copy()
        values[mask] = bc.value(f.grid.points()[mask.ravel()], new_time)
    return Field(f.grid, values, new_time)


def solve(spec: ProblemSpec) -> list[Field]:
    """March to the horizon with dt = dt_fraction * CFL, shortening the last step.

    Snapshots are collected every ``snapshot_every`` steps and always include
    t = 0 and t = horizon.  A non-finite value aborts with the step index.
    """
    f = Field.sample(spec.grid, spec.initial)
    snaps = [f]
    if spec.horizon == 0.0:
        return snaps
    dt = spec.dt_fraction * cfl_max_dt(spec.grid.spacing, spec.grid.dim)
    step_index = 0
    while True:
        remaining = spec.horizon - f.time
        if remaining <= dt * 1e-12:
            break
        step_index += 1
        try:
            f = step(f, min(dt, remaining), spec.bc)
        except ValueError as exc:
            if "finite" in str(exc):
                raise SolveAbortedError(step_index, f.time) from exc
            raise
        if step_index % spec.snapshot_every == 0:
            snaps.append(f)
    final = replace(f, time=spec.horizon)  # last step landed on the horizon; pin it exactly
    if step_index and snaps[-1] is f:
        snaps[-1] = final
    else:
        snaps.append(final)
    return snaps


def comparison_gap(u: Field, v: Field) -> float:
    """min over nodes of v - u; fields must share grid and time."""
    if u.grid != v.grid:
        raise ValueError("fields live on different grids")
    if abs(u.time - v.time) > 1e-12 * (1.0 + abs(u.time)):
        raise ValueError(f"fields at different times: {u.time} vs {v.time}")
    return float((v.values - u.values).min())
