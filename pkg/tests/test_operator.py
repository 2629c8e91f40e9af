"""Operator calculus: the arctan-eigenvalue sum, the determinant identity,
path derivative and quadrature identity, and the hypothesis check entries."""

import math

import numpy as np
import pytest

from lagflow.errors import PreconditionError
from lagflow.operator import (
    CheckEntry,
    HypothesisReport,
    angle_from_eigvals,
    complex_lu_det_batch,
    detform_residual,
    detform_residual_batch,
    h1_monotonicity_check,
    h2_bound_check,
    integral_identity_residual,
    lagrangian_angle,
    path_derivative,
    path_derivative_nodes,
    path_value,
    simpson_weights,
)
from lagflow.rng import CounterRng
from lagflow.symmat import SymMat, eigen_decompose, eigvals_batch, sym_part


def _random_sym(n, scale=1.0, seed=0):
    g = CounterRng(seed).gaussians(n * n).reshape(n, n)
    return SymMat(scale * sym_part(g))


def _random_sym_batch(count, n, scale=1.0, seed=0):
    g = CounterRng(seed).gaussians(count * n * n).reshape(count, n, n)
    return scale * sym_part(g)


# ---------------------------------------------------------------------------
# the operator itself


def test_angle_trivial_values():
    assert lagrangian_angle(SymMat.zeros(3)) == 0.0
    assert abs(lagrangian_angle(SymMat.identity(2)) - math.pi / 2) <= 1e-15
    assert abs(lagrangian_angle(SymMat.diagonal([1.0, -1.0]))) <= 1e-15
    assert abs(lagrangian_angle(SymMat([[2.5]])) - math.atan(2.5)) <= 1e-15


def test_angle_range_is_strict():
    for n in (1, 3, 6):
        mats = _random_sym_batch(500, n, scale=10.0, seed=n)
        f = angle_from_eigvals(eigvals_batch(mats))
        assert (np.abs(f) < n * math.pi / 2).all()


def test_angle_oddness():
    mats = _random_sym_batch(300, 4, scale=2.0, seed=13)
    f_pos = angle_from_eigvals(eigvals_batch(mats))
    f_neg = angle_from_eigvals(eigvals_batch(-mats))
    assert np.abs(f_pos + f_neg).max() <= 1e-12


def test_angle_orthogonal_invariance():
    rng = CounterRng(21)
    for k in range(20):
        x = SymMat(sym_part(rng.gaussians(25).reshape(5, 5)))
        q = eigen_decompose(SymMat(sym_part(rng.gaussians(25).reshape(5, 5)))).basis
        rotated = SymMat(sym_part(q @ x.entries @ q.T))
        assert abs(lagrangian_angle(rotated) - lagrangian_angle(x)) <= 1e-10


# ---------------------------------------------------------------------------
# determinant identity


def test_complex_lu_det_against_oracle():
    rng = CounterRng(31)
    for n in (1, 2, 4, 6):
        a = rng.gaussians(3 * n * n).reshape(3, n, n) + 1j * rng.gaussians(3 * n * n).reshape(3, n, n)
        got = complex_lu_det_batch(a)
        want = np.linalg.det(a)
        assert np.abs(got - want).max() <= 1e-10 * (1.0 + np.abs(want).max())


def test_detform_zero_matrix():
    assert detform_residual(SymMat.zeros(3)) <= 1e-14


def test_detform_scalar_identity_case():
    # n=1, X=1: exp(i pi/2)(1-i) = i + 1 exactly equals det(I+iX)
    assert detform_residual(SymMat.identity(1)) <= 1e-14


def test_detform_branch_stress():
    # angle 4*arctan(10) ~ 5.88 exceeds pi; the exponential form must not care
    x = SymMat(10.0 * np.eye(4))
    assert lagrangian_angle(x) > math.pi
    assert detform_residual(x) <= 1e-10


def test_detform_seeded_samples():
    for n in (2, 4, 6):
        for scale in (0.1, 1.0, 10.0):
            mats = _random_sym_batch(400, n, scale=scale, seed=50 + n)
            res = detform_residual_batch(mats, angle_from_eigvals(eigvals_batch(mats)))
            assert res.max() <= 1e-10


# ---------------------------------------------------------------------------
# path calculus


def test_path_value_endpoints_and_closed_forms():
    x = _random_sym(4, seed=1)
    y = _random_sym(4, seed=2)
    assert path_value(x, y, 1.0) == pytest.approx(lagrangian_angle(x), abs=1e-14)
    assert path_value(x, y, 0.0) == pytest.approx(lagrangian_angle(y), abs=1e-14)
    assert path_value(x, x, 0.37) == pytest.approx(lagrangian_angle(x), abs=1e-14)
    eye1, zero1 = SymMat.identity(1), SymMat.zeros(1)
    for t in (0.0, 0.3, 1.0):
        assert path_value(eye1, zero1, t) == pytest.approx(math.atan(t), abs=1e-15)
    got = path_value(SymMat.identity(3), SymMat.zeros(3), 0.5)
    assert got == pytest.approx(3.0 * math.atan(0.5), abs=1e-14)  # 1.3909428270024185


def test_path_value_rejects_outside_segment():
    with pytest.raises(ValueError, match=r"\[0, 1\]"):
        path_value(SymMat.identity(2), SymMat.zeros(2), 1.5)
    with pytest.raises(ValueError, match=r"\[0, 1\]"):
        path_value(SymMat.identity(2), SymMat.zeros(2), -0.1)


def test_path_derivative_trivial_and_closed_form():
    x = _random_sym(3, seed=4)
    assert path_derivative(x, x, 0.5) == 0.0
    eye2, zero2 = SymMat.identity(2), SymMat.zeros(2)
    for t in (0.0, 0.25, 0.8, 1.0):
        assert path_derivative(eye2, zero2, t) == pytest.approx(2.0 / (1.0 + t * t), abs=1e-14)


def test_path_derivative_matches_central_differences():
    rng = CounterRng(8)
    delta = 1e-5
    for k in range(60):
        n = 2 + k % 4
        x = SymMat(sym_part(rng.gaussians(n * n).reshape(n, n)))
        y = SymMat(sym_part(rng.gaussians(n * n).reshape(n, n)))
        t = 0.001 + 0.998 * rng.uniforms(1)[0]
        pd = path_derivative(x, y, t)
        fd = (path_value(x, y, t + delta) - path_value(x, y, t - delta)) / (2 * delta)
        assert abs(pd - fd) <= 1e-6 * (1.0 + abs(pd))


def test_path_derivative_nonnegative_on_ordered_pairs():
    rng = CounterRng(9)
    for k in range(40):
        n = 2 + k % 3
        y = sym_part(rng.gaussians(n * n).reshape(n, n))
        ell = np.tril(rng.gaussians(n * n).reshape(n, n))
        x = SymMat(y + ell @ ell.T)
        t = rng.uniforms(1)[0]
        assert path_derivative(x, SymMat(y), t) >= -1e-10


def test_simpson_weights_validation_and_sum():
    with pytest.raises(ValueError, match="even"):
        simpson_weights(3)
    with pytest.raises(ValueError, match="even"):
        simpson_weights(0)
    assert simpson_weights(8).sum() == pytest.approx(1.0, abs=1e-15)


def test_integral_identity_trivial_and_arctan():
    x = _random_sym(4, seed=14)
    assert integral_identity_residual(x, x, 8) <= 1e-14
    # n=1 segment from 0 to I: integral of 1/(1+t^2) = pi/4 = F(I) - F(0)
    assert integral_identity_residual(SymMat.identity(1), SymMat.zeros(1), 256) <= 1e-10


def test_integral_identity_seeded_pairs():
    rng = CounterRng(15)
    for k in range(25):
        n = 1 + k % 6
        x = SymMat(sym_part(rng.gaussians(n * n).reshape(n, n)))
        y = SymMat(sym_part(rng.gaussians(n * n).reshape(n, n)))
        assert integral_identity_residual(x, y, 256) <= 1e-8


def test_path_derivative_nodes_matches_scalar_op():
    x = _random_sym(5, seed=16)
    y = _random_sym(5, seed=17)
    ts = np.linspace(0.0, 1.0, 9)
    batch = path_derivative_nodes(x.entries, y.entries, ts)
    scalar = [path_derivative(x, y, float(t)) for t in ts]
    assert np.abs(batch - scalar).max() <= 1e-12


# ---------------------------------------------------------------------------
# hypothesis entries


def test_h1_entry_values():
    x = _random_sym(3, seed=18)
    entry = h1_monotonicity_check(x, x)
    assert entry.passed and entry.slacks["slack"] == 0.0
    shifted = h1_monotonicity_check(SymMat(x.entries + np.eye(3)), x)
    assert shifted.passed and shifted.slacks["slack"] > 0.0


def test_h1_derived_example():
    entry = h1_monotonicity_check(SymMat.diagonal([10.0, 0.0]), SymMat.diagonal([0.0, -10.0]))
    assert entry.slacks["slack"] == pytest.approx(2.0 * math.atan(10.0), abs=1e-14)  # 2.9422553486


def test_h1_precondition_is_distinct():
    with pytest.raises(PreconditionError):
        h1_monotonicity_check(SymMat.zeros(2), SymMat.identity(2))


def test_h2_trivial_and_derived():
    x = _random_sym(3, seed=19)
    entry = h2_bound_check(x, x, 0.5)
    assert entry.passed
    assert entry.slacks["trace_slack"] >= 0.0 and entry.slacks["holder_slack"] >= 0.0

    entry = h2_bound_check(SymMat.identity(2), SymMat.zeros(2), 0.5)
    gap = math.pi / 2
    assert entry.slacks["trace_slack"] == pytest.approx(2.0 - gap, abs=1e-14)
    assert entry.slacks["holder_slack"] == pytest.approx(2 * math.pi * math.sqrt(2.0) - gap, abs=1e-12)
    assert entry.slacks["strict_margin"] > 0.0
    assert entry.passed


def test_h2_alpha_validation():
    x = SymMat.identity(2)
    for alpha in (0.0, 1.0, -0.5, 2.0):
        with pytest.raises(ValueError, match="alpha"):
            h2_bound_check(x, x, alpha)


def test_h2_seeded_unordered_pairs():
    rng = CounterRng(23)
    for k in range(60):
        n = 1 + k % 6
        scale = (0.1, 1.0, 10.0)[k % 3]
        x = SymMat(scale * sym_part(rng.gaussians(n * n).reshape(n, n)))
        y = SymMat(scale * sym_part(rng.gaussians(n * n).reshape(n, n)))
        for alpha in (0.25, 0.5, 0.9):
            entry = h2_bound_check(x, y, alpha)
            assert entry.passed, entry
            assert entry.slacks["strict_margin"] > 0.0


def test_hypothesis_report_aggregation():
    entries = [
        CheckEntry("demo", {"slack": 0.5}, True),
        CheckEntry("demo", {"slack": -0.2}, False),
    ]
    rep = HypothesisReport.from_entries("demo", entries, seed=7, residuals=[1e-12, 3e-11])
    assert rep.trials == 2 and rep.violations == 1
    assert rep.worst_margin == -0.2 and rep.max_residual == 3e-11
    with pytest.raises(ValueError, match="violations"):
        HypothesisReport("demo", 1, 2, 0.0, 0.0, 0)
