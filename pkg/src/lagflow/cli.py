"""Command-line entry point.

Usage:
    lagflow <command> --config <path> [--out <dir>] [--seed <u64>] [--quiet]

Commands: hypotheses | solve | compare | converge | quadratic.  The config
is strict JSON (format version 1, unknown keys rejected); every default the
parser applies is echoed to the run log.  Exit codes: 0 all experiments
passed, 1 experiment failure, 2 config/validation error, 3 I/O error.

Outputs: report.csv (one row per experiment metric), trajectory.csv for
solver commands, and for 2d fields binary PPM heatmaps with a .minmax.txt
sidecar.  Every output file starts with a comment naming the config hash and
seed, and identical (config, seed) runs produce byte-identical files.
"""

from __future__ import annotations

import argparse
import functools
import hashlib
import json
import math
import sys
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Callable

import numpy as np

from .errors import ConfigError
from .harness import (
    cfl_agreement_experiment,
    comparison_experiment,
    drift_bound,
    quadratic_exactness_experiment,
    quadratic_profile,
    refined_grid,
    run_hypothesis_suite,
    self_convergence_study,
    sup_drift,
)
from .pde import BoundaryCondition, Field, Grid, ProblemSpec, solve
from .report import ExperimentReport, make_report
from .symmat import SymMat

CONFIG_VERSION = 1
_COMMANDS = ("compare", "converge", "hypotheses", "quadratic", "solve")

_BC_KINDS = ("periodic", "dirichlet-zero", "dirichlet-initial")
_INITIAL_KINDS = ("zero", "quadratic", "sine", "bump", "custom-table")


@dataclass
class RunConfig:
    version: int
    command: str
    seed: int
    params: dict
    applied_defaults: list[str]

    def canonical(self) -> dict:
        return {
            "version": self.version,
            "command": self.command,
            "seed": self.seed,
            "params": self.params,
        }

    def config_hash(self) -> str:
        blob = json.dumps(self.canonical(), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(blob.encode()).hexdigest()[:12]


# ---------------------------------------------------------------------------
# config parsing


def _require(raw: dict, field: str):
    if field not in raw:
        raise ConfigError(field, "missing required field")
    return raw[field]


def _as_int(value, field: str, lo: int | None = None, hi: int | None = None) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise ConfigError(field, f"expected an integer, got {value!r}")
    if lo is not None and value < lo:
        raise ConfigError(field, f"must be >= {lo}, got {value}")
    if hi is not None and value > hi:
        raise ConfigError(field, f"must be <= {hi}, got {value}")
    return value


def _as_num(value, field: str, lo: float | None = None, strict: bool = False) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(field, f"expected a number, got {value!r}")
    v = float(value)
    if not math.isfinite(v):
        raise ConfigError(field, "must be finite")
    if lo is not None and (v <= lo if strict else v < lo):
        raise ConfigError(field, f"must be {'>' if strict else '>='} {lo}, got {value}")
    return v


def _as_choice(value, field: str, choices) -> str:
    if value not in choices:
        raise ConfigError(field, f"expected one of {list(choices)}, got {value!r}")
    return value


def _reject_unknown(raw: dict, known: set[str], prefix: str = "") -> None:
    for key in raw:
        if key not in known:
            raise ConfigError(f"{prefix}{key}", "unknown key")


def _as_matrix(value, field: str) -> list[list[float]]:
    if not isinstance(value, list) or not value:
        raise ConfigError(field, "expected a non-empty square matrix (list of rows)")
    n = len(value)
    out = []
    for i, row in enumerate(value):
        if not isinstance(row, list) or len(row) != n:
            raise ConfigError(field, f"row {i} does not have {n} entries")
        out.append([_as_num(v, f"{field}[{i}][{j}]") for j, v in enumerate(row)])
    for i in range(n):
        for j in range(i):
            if abs(out[i][j] - out[j][i]) > 1e-12:
                raise ConfigError(field, f"matrix is not symmetric at ({i},{j})")
    return out


def _axis_count(lo: float, hi: float, h: float, periodic: bool, field: str) -> int:
    span = hi - lo
    if span <= 0:
        raise ConfigError(field, f"extent must be increasing, got [{lo}, {hi}]")
    steps = span / h
    rounded = round(steps)
    if rounded < 1 or abs(steps - rounded) > 1e-9 * max(1.0, steps):
        raise ConfigError(field, f"h = {h} does not evenly divide the extent of {span}")
    count = rounded if periodic else rounded + 1
    if count < 5:
        raise ConfigError(field, f"grid needs at least 5 nodes per axis, got {count}")
    return count


def _parse_grid_block(raw: dict, defaults: list[str], dim_field: str = "dim") -> dict:
    dim = _as_int(_require(raw, dim_field), dim_field, 1, 2)
    h = _as_num(_require(raw, "h"), "h", 0.0, strict=True)
    extent = _require(raw, "extent")
    if dim == 1:
        if not (isinstance(extent, list) and len(extent) == 2):
            raise ConfigError("extent", "expected [lo, hi] for a 1d grid")
        extent = [extent]
    else:
        if not (
            isinstance(extent, list)
            and len(extent) == 2
            and all(isinstance(ax, list) and len(ax) == 2 for ax in extent)
        ):
            raise ConfigError("extent", "expected [[lox, hix], [loy, hiy]] for a 2d grid")
    extent = [[_as_num(v, f"extent[{i}]") for v in ax] for i, ax in enumerate(extent)]
    bc = _as_choice(_require(raw, "bc"), "bc", _BC_KINDS)
    periodic = bc == "periodic"
    counts = [_axis_count(ax[0], ax[1], h, periodic, f"extent[{i}]") for i, ax in enumerate(extent)]
    horizon = _as_num(_require(raw, "horizon"), "horizon", 0.0)
    if "cfl_fraction" in raw:
        cfl = _as_num(raw["cfl_fraction"], "cfl_fraction", 0.0, strict=True)
        if cfl > 1.0:
            raise ConfigError("cfl_fraction", f"must be <= 1, got {cfl}")
    else:
        cfl = 0.9
        defaults.append("cfl_fraction = 0.9")
    return {
        "dim": dim,
        "h": h,
        "extent": extent,
        "counts": counts,
        "bc": bc,
        "horizon": horizon,
        "cfl_fraction": cfl,
    }


def _parse_initial_block(raw, field: str, grid: dict, defaults: list[str]) -> dict:
    if not isinstance(raw, dict):
        raise ConfigError(field, "expected an object with a 'kind'")
    kind = _as_choice(_require(raw, "kind"), f"{field}.kind", _INITIAL_KINDS)
    out: dict = {"kind": kind}
    if kind == "zero":
        _reject_unknown(raw, {"kind"}, f"{field}.")
    elif kind == "quadratic":
        _reject_unknown(raw, {"kind", "matrix"}, f"{field}.")
        matrix = _as_matrix(_require(raw, "matrix"), f"{field}.matrix")
        if len(matrix) != grid["dim"]:
            raise ConfigError(f"{field}.matrix", f"order must match grid dimension {grid['dim']}")
        out["matrix"] = matrix
    elif kind == "sine":
        _reject_unknown(raw, {"kind", "amplitude"}, f"{field}.")
        if "amplitude" in raw:
            out["amplitude"] = _as_num(raw["amplitude"], f"{field}.amplitude")
        else:
            out["amplitude"] = 1.0
            defaults.append(f"{field}.amplitude = 1.0")
    elif kind == "bump":
        _reject_unknown(raw, {"kind", "amplitude", "center", "radius"}, f"{field}.")
        out["amplitude"] = (
            _as_num(raw["amplitude"], f"{field}.amplitude") if "amplitude" in raw else 1.0
        )
        if "amplitude" not in raw:
            defaults.append(f"{field}.amplitude = 1.0")
        mids = [(ax[0] + ax[1]) / 2.0 for ax in grid["extent"]]
        if "center" in raw:
            center = raw["center"]
            if not (isinstance(center, list) and len(center) == grid["dim"]):
                raise ConfigError(f"{field}.center", f"expected {grid['dim']} coordinates")
            out["center"] = [_as_num(v, f"{field}.center") for v in center]
        else:
            out["center"] = mids
            defaults.append(f"{field}.center = {mids}")
        if "radius" in raw:
            out["radius"] = _as_num(raw["radius"], f"{field}.radius", 0.0, strict=True)
        else:
            half = min((ax[1] - ax[0]) / 2.0 for ax in grid["extent"])
            out["radius"] = 0.5 * half
            defaults.append(f"{field}.radius = {out['radius']}")
    else:  # custom-table
        _reject_unknown(raw, {"kind", "values"}, f"{field}.")
        values = _require(raw, "values")
        node_count = int(np.prod(grid["counts"]))
        if not isinstance(values, list) or len(values) != node_count:
            raise ConfigError(
                f"{field}.values", f"expected {node_count} row-major nodal values"
            )
        out["values"] = [_as_num(v, f"{field}.values") for v in values]
    return out


def parse_config(text: str) -> RunConfig:
    """Validate a JSON run configuration; raise ConfigError naming the field."""
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError("<json>", f"line {exc.lineno}: {exc.msg}") from exc
    if not isinstance(raw, dict):
        raise ConfigError("<root>", "config must be a JSON object")

    version = _as_int(_require(raw, "version"), "version")
    if version != CONFIG_VERSION:
        raise ConfigError("version", f"unsupported version {version}; this build reads {CONFIG_VERSION}")
    command = _as_choice(_require(raw, "command"), "command", _COMMANDS)
    seed = _as_int(_require(raw, "seed"), "seed", 0)
    if seed >= 2**64:
        raise ConfigError("seed", "must fit in 64 bits")

    defaults: list[str] = []
    base_keys = {"version", "command", "seed"}

    if command == "hypotheses":
        _reject_unknown(raw, base_keys | {"n", "trials", "scales", "check_every"})
        params = {
            "n": _as_int(_require(raw, "n"), "n", 1, 8),
            "trials": _as_int(_require(raw, "trials"), "trials", 1),
        }
        if "scales" in raw:
            scales = raw["scales"]
            if not isinstance(scales, list) or not scales:
                raise ConfigError("scales", "expected a non-empty list of positive numbers")
            params["scales"] = [_as_num(s, "scales", 0.0, strict=True) for s in scales]
        else:
            params["scales"] = [0.1, 1.0, 10.0]
            defaults.append("scales = [0.1, 1.0, 10.0]")
        if "check_every" in raw:
            params["check_every"] = _as_int(raw["check_every"], "check_every", 1)
        else:
            params["check_every"] = 10
            defaults.append("check_every = 10")
        return RunConfig(version, command, seed, params, defaults)

    if command == "quadratic":
        _reject_unknown(raw, base_keys | {"matrix", "h", "extent", "horizon", "cfl_fraction"})
        matrix = _as_matrix(_require(raw, "matrix"), "matrix")
        grid_raw = dict(raw)
        grid_raw["dim"] = len(matrix)
        grid_raw["bc"] = "dirichlet-zero"  # placeholder: exact data is installed at run time
        params = _parse_grid_block(grid_raw, defaults)
        params["bc"] = "dirichlet-exact"
        params["matrix"] = matrix
        return RunConfig(version, command, seed, params, defaults)

    grid_keys = {"dim", "h", "extent", "bc", "horizon", "cfl_fraction"}
    if command == "solve":
        _reject_unknown(raw, base_keys | grid_keys | {"initial", "snapshot_every"})
        params = _parse_grid_block(raw, defaults)
        params["initial"] = _parse_initial_block(_require(raw, "initial"), "initial", params, defaults)
        if "snapshot_every" in raw:
            params["snapshot_every"] = _as_int(raw["snapshot_every"], "snapshot_every", 1)
        else:
            params["snapshot_every"] = 100
            defaults.append("snapshot_every = 100")
        return RunConfig(version, command, seed, params, defaults)

    if command == "compare":
        _reject_unknown(raw, base_keys | grid_keys | {"initial", "initial_u", "initial_v", "shift"})
        params = _parse_grid_block(raw, defaults)
        pair_form = {"initial_u", "initial_v"} <= raw.keys()
        shift_form = "initial" in raw and "shift" in raw
        if pair_form == shift_form:
            raise ConfigError(
                "initial", "give either initial_u + initial_v, or initial + shift"
            )
        if pair_form:
            params["initial_u"] = _parse_initial_block(raw["initial_u"], "initial_u", params, defaults)
            params["initial_v"] = _parse_initial_block(raw["initial_v"], "initial_v", params, defaults)
        else:
            params["initial"] = _parse_initial_block(raw["initial"], "initial", params, defaults)
            params["shift"] = _as_num(raw["shift"], "shift")
        return RunConfig(version, command, seed, params, defaults)

    # converge
    _reject_unknown(raw, base_keys | grid_keys | {"initial", "levels", "cfl_pair"})
    params = _parse_grid_block(raw, defaults)
    params["initial"] = _parse_initial_block(_require(raw, "initial"), "initial", params, defaults)
    if params["initial"]["kind"] == "custom-table":
        raise ConfigError("initial.kind", "custom-table data cannot be refined across levels")
    if "levels" in raw:
        params["levels"] = _as_int(raw["levels"], "levels", 3)
    else:
        params["levels"] = 4
        defaults.append("levels = 4")
    if "cfl_pair" in raw:
        pair = raw["cfl_pair"]
        if not (isinstance(pair, list) and len(pair) == 2):
            raise ConfigError("cfl_pair", "expected two CFL fractions")
        params["cfl_pair"] = [_as_num(c, "cfl_pair", 0.0, strict=True) for c in pair]
        if any(c > 1.0 for c in params["cfl_pair"]):
            raise ConfigError("cfl_pair", "fractions must be <= 1")
    else:
        params["cfl_pair"] = [0.5, 0.9]
        defaults.append("cfl_pair = [0.5, 0.9]")
    return RunConfig(version, command, seed, params, defaults)


# ---------------------------------------------------------------------------
# building problem pieces from validated params


def _build_grid(params: dict) -> Grid:
    lows = tuple(ax[0] for ax in params["extent"])
    return Grid(params["dim"], tuple(params["counts"]), params["h"], lows)


def _initial_fn(init: dict, params: dict) -> Callable[[np.ndarray], np.ndarray]:
    kind = init["kind"]
    dim = params["dim"]
    if kind == "zero":
        return lambda pts: np.zeros(len(pts))
    if kind == "quadratic":
        return quadratic_profile(SymMat(init["matrix"]))
    if kind == "sine":
        amplitude = init["amplitude"]
        periodic = params["bc"] == "periodic"
        axes = params["extent"]
        counts = params["counts"]
        h = params["h"]
        freqs, lows = [], []
        for a in range(dim):
            length = counts[a] * h if periodic else (counts[a] - 1) * h
            freqs.append((2.0 * math.pi if periodic else math.pi) / length)
            lows.append(axes[a][0])

        def sine(pts: np.ndarray) -> np.ndarray:
            out = np.full(len(pts), amplitude)
            for a in range(dim):
                out *= np.sin(freqs[a] * (pts[:, a] - lows[a]))
            return out

        return sine
    if kind == "bump":
        from .harness import bump_profile

        return bump_profile(init["center"], init["radius"], init["amplitude"])
    # custom-table: nodal values addressed by rounding coordinates to indices
    table = np.asarray(init["values"], dtype=np.float64).reshape(params["counts"])
    lows = np.array([ax[0] for ax in params["extent"]])
    h = params["h"]

    def lookup(pts: np.ndarray) -> np.ndarray:
        idx = np.rint((pts - lows[None, :]) / h).astype(int)
        return table[tuple(idx.T)] if idx.shape[1] > 1 else table[idx[:, 0]]

    return lookup


def _boundary(params: dict, initial: Callable[[np.ndarray], np.ndarray]) -> BoundaryCondition:
    bc = params["bc"]
    if bc == "periodic":
        return BoundaryCondition.periodic()
    if bc == "dirichlet-zero":
        return BoundaryCondition.dirichlet(lambda pts, t: np.zeros(len(pts)))
    return BoundaryCondition.dirichlet(lambda pts, t: initial(pts))


# ---------------------------------------------------------------------------
# serialization


def _fmt(value: float) -> str:
    return repr(float(value))


def render_report_csv(reports: list[ExperimentReport], comment: str) -> bytes:
    lines = [f"# {comment}", "experiment_id,metric,value,threshold,pass"]
    for rep in reports:
        for eid, metric, value, threshold, ok in rep.rows():
            thr = "" if threshold is None else _fmt(threshold)
            verdict = "" if ok is None else str(bool(ok)).lower()
            lines.append(f"{eid},{metric},{_fmt(value)},{thr},{verdict}")
    return ("\n".join(lines) + "\n").encode()


def render_trajectory_csv(trajectory: list[Field], comment: str) -> bytes:
    grid = trajectory[0].grid
    lines = [f"# {comment}"]
    if grid.dim == 1:
        lines.append("t,i,x,u")
        xs = grid.axis_coords(0)
        for snap in trajectory:
            t = _fmt(snap.time)
            for i, x in enumerate(xs):
                lines.append(f"{t},{i},{_fmt(x)},{_fmt(snap.values[i])}")
    else:
        lines.append("t,i,j,x,y,u")
        xs, ys = grid.axis_coords(0), grid.axis_coords(1)
        for snap in trajectory:
            t = _fmt(snap.time)
            for i, x in enumerate(xs):
                for j, y in enumerate(ys):
                    lines.append(f"{t},{i},{j},{_fmt(x)},{_fmt(y)},{_fmt(snap.values[i, j])}")
    return ("\n".join(lines) + "\n").encode()


_VIRIDIS_ANCHORS = (
    (68, 1, 84), (71, 44, 122), (59, 81, 139), (44, 113, 142), (33, 144, 141),
    (39, 173, 129), (92, 200, 99), (170, 220, 50), (253, 231, 37),
)


@functools.cache
def colormap_256() -> np.ndarray:
    """256 RGB entries: linear interpolation of the anchor ramp, made injective.

    The rare adjacent duplicates from 8-bit rounding are nudged (blue channel
    first) so that decoding an image recovers value ranks exactly.
    """
    anchors = np.array(_VIRIDIS_ANCHORS, dtype=np.float64)
    pos = np.linspace(0.0, 255.0, len(anchors))
    idx = np.arange(256, dtype=np.float64)
    table = np.stack([np.interp(idx, pos, anchors[:, ch]) for ch in range(3)], axis=1)
    table = np.floor(table + 0.5).astype(np.int64)
    seen: set[tuple[int, int, int]] = set()
    for k in range(256):
        rgb = tuple(int(v) for v in table[k])
        while rgb in seen:
            r, g, b = rgb
            rgb = (r, g, b + 1) if b < 255 else ((r, g + 1, 0) if g < 255 else (r + 1, 0, 0))
        table[k] = rgb
        seen.add(rgb)
    out = table.astype(np.uint8)
    out.flags.writeable = False
    return out


def render_heatmap(field: Field, comment: str | None = None) -> tuple[bytes, str]:
    """(PPM bytes, sidecar text) for a 2d field.

    Binary P6, row-major with image rows along the second grid axis; the
    field minimum maps to colormap entry 0 and the maximum to entry 255 (a
    constant field maps everywhere to entry 0).
    """
    if field.grid.dim != 2:
        raise ValueError("heatmaps are for 2d fields; 1d runs use CSV curves")
    vmin = float(field.values.min())
    vmax = float(field.values.max())
    if vmax > vmin:
        norm = (field.values - vmin) / (vmax - vmin)
    else:
        norm = np.zeros_like(field.values)
    idx = np.clip(np.floor(norm * 255.0 + 0.5).astype(int), 0, 255)
    pixels = colormap_256()[idx.T]  # image row = y index, column = x index
    width, height = field.grid.counts
    header = "P6\n"
    if comment:
        header += f"# {comment}\n"
    header += f"{width} {height}\n255\n"
    sidecar = (f"# {comment}\n" if comment else "") + f"min={_fmt(vmin)}\nmax={_fmt(vmax)}\n"
    return header.encode() + pixels.tobytes(), sidecar


def emit_heatmap(field: Field, path, comment: str | None = None) -> Path:
    """Write the PPM and its .minmax.txt sidecar next to it."""
    path = Path(path)
    ppm, sidecar = render_heatmap(field, comment)
    path.write_bytes(ppm)
    path.with_suffix(".minmax.txt").write_text(sidecar)
    return path


# ---------------------------------------------------------------------------
# command execution


def _heatmap_artifacts(trajectory: list[Field], comment: str) -> list[tuple[str, bytes]]:
    artifacts = []
    for snap in trajectory:
        ppm, sidecar = render_heatmap(snap, comment)
        stem = f"heatmap_{snap.time:.6f}"
        artifacts.append((f"{stem}.ppm", ppm))
        artifacts.append((f"{stem}.minmax.txt", sidecar.encode()))
    return artifacts


def _execute(config: RunConfig, comment: str) -> tuple[list[ExperimentReport], list[tuple[str, bytes]]]:
    p = config.params
    seed = config.seed

    if config.command == "hypotheses":
        rep = run_hypothesis_suite(
            p["n"], p["trials"], seed, scales=tuple(p["scales"]), check_every=p["check_every"]
        )
        return [rep], []

    if config.command == "quadratic":
        grid = _build_grid(p)
        rep, traj = quadratic_exactness_experiment(
            SymMat(p["matrix"]), grid, p["horizon"], p["cfl_fraction"],
            experiment_id=f"quadratic[dim={grid.dim}]", seed=seed, return_trajectory=True,
        )
        artifacts = [("trajectory.csv", render_trajectory_csv(traj, comment))]
        if grid.dim == 2:
            artifacts += _heatmap_artifacts(traj, comment)
        return [rep], artifacts

    if config.command == "solve":
        grid = _build_grid(p)
        initial = _initial_fn(p["initial"], p)
        spec = ProblemSpec(grid, _boundary(p, initial), initial, p["horizon"],
                           p["cfl_fraction"], p["snapshot_every"])
        traj = solve(spec)
        drift = sup_drift(traj)
        bound = drift_bound(grid.dim, p["horizon"])
        rep = make_report(
            experiment_id=f"solve[dim={grid.dim}]",
            seed=seed,
            parameters={"bc": p["bc"], "h": p["h"], "horizon": p["horizon"]},
            metrics={"drift": drift, "snapshots": float(len(traj))},
            checks={"drift": (bound, drift <= bound)},
            runtime_ms=0.0,
        )
        artifacts = [("trajectory.csv", render_trajectory_csv(traj, comment))]
        if grid.dim == 2:
            artifacts += _heatmap_artifacts(traj, comment)
        return [rep], artifacts

    if config.command == "compare":
        grid = _build_grid(p)
        if "shift" in p:
            initial_u = _initial_fn(p["initial"], p)
            shift = p["shift"]

            def initial_v(pts, _u=initial_u, _s=shift):
                return _u(pts) + _s

        else:
            initial_u = _initial_fn(p["initial_u"], p)
            initial_v = _initial_fn(p["initial_v"], p)
        spec_u = ProblemSpec(grid, _boundary(p, initial_u), initial_u, p["horizon"], p["cfl_fraction"])
        spec_v = ProblemSpec(grid, _boundary(p, initial_v), initial_v, p["horizon"], p["cfl_fraction"])
        rep = comparison_experiment(spec_u, spec_v, experiment_id=f"compare[dim={grid.dim}]", seed=seed)
        return [rep], []

    # converge
    grid = _build_grid(p)
    initial = _initial_fn(p["initial"], p)
    spec = ProblemSpec(grid, _boundary(p, initial), initial, p["horizon"], p["cfl_fraction"])
    reports = [self_convergence_study(spec, p["levels"], seed=seed)]
    # the agreement run uses the finest of the refinement grids
    fine = replace(spec, grid=refined_grid(grid, p["levels"] - 1, p["bc"] == "periodic"))
    reports.append(cfl_agreement_experiment(fine, tuple(p["cfl_pair"]), seed=seed))
    return reports, []


def run(config: RunConfig, out_dir=".", quiet: bool = False) -> int:
    """Execute a validated config; write artifacts; return the exit code."""
    log = (lambda *_: None) if quiet else print
    for line in config.applied_defaults:
        log(f"default applied: {line}")
    comment = f"config={config.config_hash()} seed={config.seed}"

    try:
        reports, artifacts = _execute(config, comment)
    except (ConfigError, ValueError) as exc:
        print(f"validation error: {exc}", file=sys.stderr)
        return 2

    artifacts = [("report.csv", render_report_csv(reports, comment))] + artifacts
    try:
        out = Path(out_dir)
        out.mkdir(parents=True, exist_ok=True)
        for name, blob in artifacts:
            (out / name).write_bytes(blob)
            log(f"wrote {out / name}")
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return 3

    for rep in reports:
        log(f"{rep.experiment_id}: {'pass' if rep.passed else 'FAIL'}")
    return 0 if all(r.passed for r in reports) else 1


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="lagflow",
        description="Experiment runner for the arctan-eigenvalue flow toolkit.",
    )
    parser.add_argument("command", choices=_COMMANDS)
    parser.add_argument("--config", required=True, help="path to a JSON run configuration")
    parser.add_argument("--out", default=".", help="output directory (default: current)")
    parser.add_argument("--seed", type=int, default=None, help="override the config seed")
    parser.add_argument("--quiet", action="store_true")
    args = parser.parse_args(argv)

    try:
        text = Path(args.config).read_text()
    except OSError as exc:
        print(f"i/o error: cannot read config: {exc}", file=sys.stderr)
        return 3

    try:
        config = parse_config(text)
        if config.command != args.command:
            raise ConfigError("command", f"config says {config.command!r}, CLI asked for {args.command!r}")
        if args.seed is not None:
            if not 0 <= args.seed < 2**64:
                raise ConfigError("--seed", "must fit in 64 bits")
            config.seed = args.seed
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2

    return run(config, args.out, args.quiet)


if __name__ == "__main__":
    sys.exit(main())
