"""Smoke tests for the python bindings: a handful of operations against known values."""

import math

import numpy as np
import pytest

try:
    import fjko as core
except ImportError:
    import _fjko as core


def test_l1_weights_and_identities():
    b, c_alpha = core.l1_weights(2, 0.5)
    assert b[0] == 1.0
    assert b[1] == pytest.approx(math.sqrt(2.0) - 2.0, abs=1e-14)
    assert b[2] == pytest.approx(1.0 - math.sqrt(2.0), abs=1e-14)
    assert c_alpha == pytest.approx(2.0 / math.sqrt(math.pi), abs=1e-14)
    assert core.weight_sum_identity(10, 0.3) == pytest.approx(10.0 ** 0.7, abs=1e-12)


def test_caputo_left_linear_function_is_exact():
    n = 16
    t = np.linspace(0.0, 1.0, n + 1)
    vals = core.caputo_left(t, 0.5, 1.0 / n)
    assert vals[-1] == pytest.approx(2.0 / math.sqrt(math.pi), abs=1e-12)


def test_frac_laplacian_single_mode():
    g = core.Grid(1, 64, 2.0 * math.pi)
    x = np.array([g.coord(i) for i in range(64)])
    u = np.cos(2.0 * x)
    out = core.frac_laplacian(g, u, 0.5)
    assert np.max(np.abs(out - 2.0 * u)) < 1e-12


def test_lp_norm_uniform():
    g = core.Grid(1, 64, 10.0)
    u = np.full(64, 0.1)
    assert core.lp_norm(g, u, 2.0) == pytest.approx(math.sqrt(0.1), abs=1e-12)
    assert core.lp_norm(g, u, 1.0) == pytest.approx(1.0, abs=1e-12)


def test_constant_mobility_distance_matches_h_minus_1():
    g = core.Grid(1, 32, 5.0)
    x = np.array([g.coord(i) for i in range(32)])
    w = 2.0 * math.pi / g.L
    a = core.normalize_density(g, 1.0 + 0.3 * np.cos(w * x))
    b = core.normalize_density(g, 1.0 - 0.2 * np.cos(2.0 * w * x))
    info = core.solve_distance(g, a, b, core.MobilitySpec.constant(2.0), M=8, tol=1e-9,
                               max_iter=20000)
    oracle = core.sobolev_norm_sq(g, a - b, -1.0) / 2.0
    assert info["converged"]
    assert info["w2_sq"] == pytest.approx(oracle, rel=1e-3)


def test_jko_step_constant_mobility_mode_formula():
    g = core.Grid(1, 32, 2.0 * math.pi)
    x = np.array([g.coord(i) for i in range(32)])
    ubar = core.normalize_density(g, 1.0 + 0.5 * np.cos(x))
    tau, alpha, s = 0.1, 0.5, 0.25
    u, info = core.jko_step(g, ubar, core.MobilitySpec.constant(1.0), tau, alpha, s, M=8,
                            tol=1e-10, max_iter=40000)
    assert info["converged"]
    before = np.fft.fft(ubar) / len(ubar)
    after = np.fft.fft(u) / len(u)
    factor = 1.0 / (1.0 + tau ** alpha / core.c_alpha(alpha))  # |xi| = 1 mode
    assert abs(after[1] / before[1] - factor) < 1e-3
    assert abs(after[0] - before[0]) < 1e-12  # mass mode untouched


def test_mobility_functionals():
    spec = core.MobilitySpec.porous_beta(1.0, 0.3)
    z = 0.3 * (math.e - 1.0)
    assert spec.integral_u(z) == pytest.approx(0.3, abs=1e-12)
    assert core.script_g(core.MobilitySpec.constant(1.0), 2.0, 1.5) == pytest.approx(
        math.sqrt(2.0) * 1.5, abs=1e-8)


def test_snapshot_round_trip(tmp_path):
    g = core.Grid(1, 32, 10.0)
    u = core.bump_density(g, 0.1)
    path = str(tmp_path / "state.fjko")
    core.write_snapshot(path, g, u, 0.25)
    snap = core.read_snapshot(path)
    assert snap["time"] == 0.25
    assert snap["n"] == 32
    assert np.array_equal(snap["values"], u)
