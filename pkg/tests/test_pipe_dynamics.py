import numpy as np
import pytest

import pipenet as pn
from pipenet import pipe_dynamics, steady_state
from pipenet.pipe_dynamics import PipeInput3D, PipeState3D

from conftest import random_pipe


def test_iso_coefficients_reference(pipe_params, op, gas):
    c = pipe_dynamics.iso_coefficients(pipe_params, op, gas)
    rtz = gas.R_s * gas.T_0 * gas.z_0
    A_c, L, d = pipe_params.A_c, pipe_params.L, pipe_params.d
    lam = pipe_params.lam
    assert c.alpha == pytest.approx(-rtz / (A_c * L), rel=1e-12)
    assert c.beta_pr == pytest.approx(-A_c / L, rel=1e-12)
    assert c.gamma == pytest.approx(-(lam * rtz / (d * A_c)) * 21.0 / 25e5, rel=1e-12)
    assert c.beta_pl == pytest.approx(
        A_c / L + (lam * rtz / (2 * d * A_c)) * 21.0**2 / 25e5**2, rel=1e-12)


def test_iso_coefficients_magnitudes(pipe_params, op, gas):
    c = pipe_dynamics.iso_coefficients(pipe_params, op, gas)
    assert c.alpha == pytest.approx(-38381.6, rel=1e-4)
    assert c.beta_pr == pytest.approx(-0.0384845, rel=1e-4)
    assert c.gamma == pytest.approx(-0.0511247, rel=1e-3)


def test_rhs_2d_vanishes_at_operating_point(pipe_params, op, gas):
    # the nominal outlet pressure comes from the distributed steady flow
    # relation, so the lumped ODE residual is second-order small, not zero
    dx = pipe_dynamics.rhs_2d((op.p_r_ss, op.q_ss), (op.p_l_ss, op.q_ss),
                              pipe_params, gas)
    assert abs(dx[0]) < 1e-12 * op.p_r_ss
    assert abs(dx[1]) < 1e-6 * op.q_ss


def test_linearize_2d_structure(pipe_params, op, gas):
    c = pipe_dynamics.iso_coefficients(pipe_params, op, gas)
    m = pipe_dynamics.linearize_2d(pipe_params, op, gas, "P")
    assert np.allclose(m.A, [[0.0, -c.alpha], [c.beta_pr, c.gamma]])
    assert np.allclose(m.B, [[0.0, c.alpha], [c.beta_pl, 0.0]])
    assert np.allclose(m.C, np.eye(2))
    assert np.allclose(m.D, 0.0)
    assert [str(s) for s in m.state_labels] == ["P.r.p", "P.l.q"]
    assert [str(s) for s in m.input_labels] == ["P.l.p", "P.r.q"]


def test_linearize_2d_matches_numeric_jacobian(gas):
    rng = np.random.default_rng(7)
    for _ in range(10):
        params, op = random_pipe(rng, gas)
        m = pipe_dynamics.linearize_2d(params, op, gas)
        x0 = np.array([op.p_r_ss, op.q_ss])
        u0 = np.array([op.p_l_ss, op.q_ss])

        def f(x, u):
            return np.asarray(pipe_dynamics.rhs_2d(x, u, params, gas))

        for j, scale in enumerate(x0):
            h = 1e-6 * abs(scale)
            e = np.zeros(2); e[j] = h
            col = (f(x0 + e, u0) - f(x0 - e, u0)) / (2 * h)
            assert np.allclose(col, m.A[:, j], rtol=1e-5, atol=1e-8 * np.abs(m.A).max())
        for j, scale in enumerate(u0):
            h = 1e-6 * abs(scale)
            e = np.zeros(2); e[j] = h
            col = (f(x0, u0 + e) - f(x0, u0 - e)) / (2 * h)
            assert np.allclose(col, m.B[:, j], rtol=1e-5, atol=1e-8 * np.abs(m.B).max())


def test_eigenvalue_closed_form(gas):
    rng = np.random.default_rng(11)
    for _ in range(20):
        params, op = random_pipe(rng, gas)
        c = pipe_dynamics.iso_coefficients(params, op, gas)
        m = pipe_dynamics.linearize_2d(params, op, gas)
        disc = np.lib.scimath.sqrt(c.gamma**2 / 4.0 - c.alpha * c.beta_pr)
        expected = np.sort_complex(np.array([c.gamma / 2 + disc, c.gamma / 2 - disc]))
        got = np.sort_complex(np.linalg.eigvals(m.A))
        assert np.allclose(got, expected, rtol=1e-9)


def test_alpha_beta_product(gas):
    rng = np.random.default_rng(13)
    for _ in range(20):
        params, op = random_pipe(rng, gas)
        c = pipe_dynamics.iso_coefficients(params, op, gas)
        assert c.alpha * c.beta_pr == pytest.approx(
            gas.R_s * gas.z_0 * gas.T_0 / params.L**2, rel=1e-12)


def test_rhs_3d_consistency_with_2d(pipe_params, op, gas):
    # uniform temperature and no wall exchange: flow equation must agree
    x3 = PipeState3D(op.p_r_ss, op.q_ss, gas.T_0)
    u3 = PipeInput3D(op.p_l_ss, op.q_ss, gas.T_0)
    f3 = pipe_dynamics.rhs_3d(x3, u3, pipe_params, gas)
    f2 = pipe_dynamics.rhs_2d((op.p_r_ss, op.q_ss), (op.p_l_ss, op.q_ss),
                              pipe_params, gas)
    assert f3[1] == pytest.approx(f2[1], abs=1e-9 * op.q_ss)


def test_jacobian_3d_matches_finite_differences(gas):
    rng = np.random.default_rng(29)
    for _ in range(15):
        params, op_iso = random_pipe(rng, gas)
        params = pn.PipeParams(L=params.L, d=params.d, d_out=params.d * 1.1,
                               lam=params.lam, k_rad=float(rng.uniform(0.0, 5.0)))
        T_l = float(rng.uniform(280.0, 320.0))
        T_r = float(rng.uniform(280.0, 320.0))
        op = pn.OperatingPoint(op_iso.p_l_ss, op_iso.p_r_ss, op_iso.q_ss, T_l, T_r)
        A, B = pipe_dynamics.jacobian_3d(params, op, gas)
        A_fd, B_fd = pipe_dynamics.finite_difference_jacobian_3d(params, op, gas)
        scale = max(np.abs(A).max(), 1.0)
        assert np.allclose(A, A_fd, rtol=1e-5, atol=1e-6 * scale)
        scale_b = max(np.abs(B).max(), 1.0)
        assert np.allclose(B, B_fd, rtol=1e-5, atol=1e-6 * scale_b)


def test_linearize_3d_labels(pipe_params, op, gas):
    m = pipe_dynamics.linearize_3d(pipe_params, op, gas, "P")
    assert [str(s) for s in m.state_labels] == ["P.r.p", "P.l.q", "P.r.T"]
    assert [str(s) for s in m.input_labels] == ["P.l.p", "P.r.q", "P.l.T"]
    assert m.n_states == 3


def test_linearize_3d_isothermal_limit(op, ref_lambda):
    # huge c_v decouples temperature; the 2x2 flow block reduces exactly
    gas_big = pn.GasProperties(R_s=518.28, z_0=0.95, c_v=1e12, T_0=300.0, T_amb=300.0)
    params = pn.PipeParams(L=10.0, d=0.7, lam=ref_lambda)
    op3 = steady_state.isothermal_nominal(25e5, 21.0, 300.0, params, gas_big)
    m2 = pipe_dynamics.linearize_2d(params, op3, gas_big)
    m3 = pipe_dynamics.linearize_3d(params, op3, gas_big)
    assert np.allclose(m3.A[:2, :2], m2.A, rtol=1e-9, atol=1e-9 * np.abs(m2.A).max())
