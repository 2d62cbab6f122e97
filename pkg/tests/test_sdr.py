"""Centralized optimizer: lifting algebra, relaxation solver, rounding,
phase recovery, and the assembled pipeline.

The N = 1 relaxation optimum has a closed form used as the analytic oracle:
for R = [[a, b], [conj(b), 0]] the maximum of tr(R V) over PSD V with unit
diagonal is a + 2|b| (off-diagonal entry of modulus 1 with phase -arg(b)).
"""

import numpy as np
import pytest

from irsbeam import (ChannelSet, ConvergenceFailureError,
                     DegenerateSolutionError, DimensionMismatchError,
                     InvalidInputError, PhaseConfig, SdpSolution, SdrOptions,
                     SystemParams, build_homogenized, build_phi,
                     centralized_optimize, composite_channel,
                     gaussian_randomization, received_power, recover_phases,
                     solve_diag_sdp, wrap_phase)


def random_channel(rng, m, n):
    return ChannelSet(h_d=rng.standard_normal(m) + 1j * rng.standard_normal(m),
                      h_r=rng.standard_normal(n) + 1j * rng.standard_normal(n),
                      G=rng.standard_normal((n, m)) + 1j * rng.standard_normal((n, m)))


# -- build_phi ----------------------------------------------------------------

def test_phi_unit_weights():
    rng = np.random.default_rng(0)
    G = rng.standard_normal((4, 3)) + 1j * rng.standard_normal((4, 3))
    assert np.allclose(build_phi(np.ones(4), G), G)


def test_phi_zero_weights():
    G = np.ones((3, 2), dtype=complex)
    assert np.array_equal(build_phi(np.zeros(3), G), np.zeros((3, 2)))


def test_phi_rowwise_definition():
    rng = np.random.default_rng(1)
    h_r = rng.standard_normal(5) + 1j * rng.standard_normal(5)
    G = rng.standard_normal((5, 2)) + 1j * rng.standard_normal((5, 2))
    Phi = build_phi(h_r, G)
    for n in range(5):
        assert np.allclose(Phi[n], np.conj(h_r[n]) * G[n])


def test_phi_reflected_channel_identity():
    # the lifted column variable carries conjugate phasors: with
    # u_n = e^{-j theta_n}, u^H Phi equals the reflected part of the
    # composite channel at theta
    rng = np.random.default_rng(42)
    ch = random_channel(rng, 3, 4)
    theta = rng.uniform(0, 2 * np.pi, 4)
    u = np.exp(-1j * theta)
    Phi = build_phi(ch.h_r, ch.G)
    lifted = u.conj() @ Phi + ch.h_d.conj()
    direct = composite_channel(ch, PhaseConfig(theta))
    assert np.allclose(lifted, direct, rtol=1e-12, atol=1e-12)
    assert (np.linalg.norm(lifted) ** 2 ==
            pytest.approx(np.linalg.norm(direct) ** 2, rel=1e-10))


def test_phi_dimension_mismatch():
    with pytest.raises(DimensionMismatchError):
        build_phi(np.ones(3), np.ones((4, 2)))


# -- build_homogenized --------------------------------------------------------

def test_homogenized_structure():
    rng = np.random.default_rng(2)
    Phi = rng.standard_normal((4, 3)) + 1j * rng.standard_normal((4, 3))
    h_d = rng.standard_normal(3) + 1j * rng.standard_normal(3)
    prob = build_homogenized(Phi, h_d)
    R = prob.R
    assert R.shape == (5, 5)
    assert np.allclose(R, R.conj().T)
    assert np.allclose(R[:4, :4], Phi @ Phi.conj().T)
    assert np.allclose(R[:4, 4], Phi @ h_d)
    assert R[4, 4] == 0
    assert prob.h_d_const == pytest.approx(np.linalg.norm(h_d) ** 2)


def test_homogenized_zero_phi():
    h_d = np.array([1.0 + 2.0j])
    prob = build_homogenized(np.zeros((3, 1)), h_d)
    assert np.allclose(prob.R, 0)
    assert prob.h_d_const == pytest.approx(5.0)


def test_homogenized_quadratic_identity():
    # for any v and t: [v;t]^H R [v;t] + |t|^2*||h_d||^2 restores the gain
    # ||v^H Phi + t^* h_d^H||^2; checked at 100 random points
    rng = np.random.default_rng(3)
    Phi = rng.standard_normal((5, 4)) + 1j * rng.standard_normal((5, 4))
    h_d = rng.standard_normal(4) + 1j * rng.standard_normal(4)
    prob = build_homogenized(Phi, h_d)
    for _ in range(100):
        v = rng.standard_normal(5) + 1j * rng.standard_normal(5)
        t = complex(rng.standard_normal() + 1j * rng.standard_normal())
        v_bar = np.concatenate([v, [t]])
        quad = float(np.real(v_bar.conj() @ prob.R @ v_bar))
        row = v.conj() @ Phi + np.conj(t) * h_d.conj()
        gain = float(np.linalg.norm(row) ** 2)
        assert quad + abs(t) ** 2 * prob.h_d_const == pytest.approx(
            gain, rel=1e-10, abs=1e-10)


# -- solve_diag_sdp -----------------------------------------------------------

def test_solve_zero_matrix_shortcut():
    sol = solve_diag_sdp(np.zeros((4, 4), dtype=complex))
    assert np.allclose(sol.V, np.eye(4))
    assert sol.objective == 0.0
    assert sol.gap_certificate == 0.0


def test_solve_identity_matrix():
    sol = solve_diag_sdp(np.eye(5, dtype=complex))
    # unit diagonal forces tr(V) = 5, so the objective is pinned
    assert sol.objective == pytest.approx(5.0, rel=1e-7)
    assert sol.diag_residual <= 1e-6
    assert sol.psd_residual <= 1e-6


def test_solve_two_by_two_analytic():
    rng = np.random.default_rng(4)
    for _ in range(20):
        a = float(rng.uniform(0.0, 3.0))
        b = complex(rng.standard_normal() + 1j * rng.standard_normal())
        R = np.array([[a, b], [np.conj(b), 0.0]])
        sol = solve_diag_sdp(R, rng=np.random.default_rng(0))
        expected = a + 2.0 * abs(b)
        assert sol.objective == pytest.approx(expected, rel=1e-6)
        assert sol.gap_certificate <= 1e-5 * (1 + expected)
        # optimal lower off-diagonal V[1,0] carries phase -arg(b)
        assert np.angle(sol.V[1, 0] * np.exp(1j * np.angle(b))) == pytest.approx(
            0.0, abs=1e-3)


def test_solve_feasibility_and_certificates():
    rng = np.random.default_rng(5)
    A = rng.standard_normal((8, 8)) + 1j * rng.standard_normal((8, 8))
    R = 0.5 * (A + A.conj().T)
    sol = solve_diag_sdp(R, rng=np.random.default_rng(1))
    assert sol.diag_residual <= 1e-6
    assert sol.psd_residual <= 1e-6
    assert sol.gap_certificate >= -1e-9
    assert sol.gap_certificate <= 1e-4 * (1 + abs(sol.objective))
    # any rank-one feasible point is dominated by objective + gap
    for _ in range(200):
        v = np.exp(1j * rng.uniform(0, 2 * np.pi, 8))
        val = float(np.real(v.conj() @ R @ v))
        assert val <= sol.objective + sol.gap_certificate + 1e-8 * (1 + abs(val))


def test_solve_requires_hermitian():
    with pytest.raises(InvalidInputError):
        solve_diag_sdp(np.array([[0.0, 1.0], [0.5, 0.0]]))
    with pytest.raises(InvalidInputError):
        solve_diag_sdp(np.ones((2, 3)))


def test_solve_deterministic_given_rng():
    rng = np.random.default_rng(6)
    A = rng.standard_normal((6, 6)) + 1j * rng.standard_normal((6, 6))
    R = 0.5 * (A + A.conj().T)
    a = solve_diag_sdp(R, rng=np.random.default_rng(3))
    b = solve_diag_sdp(R, rng=np.random.default_rng(3))
    assert a.objective == b.objective
    assert np.array_equal(a.V, b.V)


def test_solve_nonconvergence_carries_iterate():
    rng = np.random.default_rng(7)
    A = rng.standard_normal((5, 5)) + 1j * rng.standard_normal((5, 5))
    R = 0.5 * (A + A.conj().T)
    # convergence cannot be declared before sweep 3, so a 2-sweep cap fails
    with pytest.raises(ConvergenceFailureError) as exc:
        solve_diag_sdp(R, max_sweeps=2)
    assert exc.value.best is not None
    assert "objective" in exc.value.residuals


# -- gaussian_randomization ---------------------------------------------------

def test_randomization_rank_one_fixed_point():
    rng = np.random.default_rng(8)
    n = 5
    v0 = np.exp(1j * rng.uniform(0, 2 * np.pi, n))
    V = np.outer(v0, v0.conj())
    A = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    R = 0.5 * (A + A.conj().T)
    sol = SdpSolution(V=V, objective=float(np.real(v0.conj() @ R @ v0)),
                      diag_residual=0.0, psd_residual=0.0, gap_certificate=0.0,
                      stationarity=0.0, restart_spread=0.0, sweeps=0)
    v_bar, obj = gaussian_randomization(sol, R, 20, np.random.default_rng(0))
    # every candidate equals v0 up to a global phase (eigh noise ~1e-8)
    assert abs(np.vdot(v_bar, v0)) == pytest.approx(n, rel=1e-7)
    assert obj == pytest.approx(float(np.real(v0.conj() @ R @ v0)), rel=1e-6)


def test_randomization_prefix_stability():
    rng = np.random.default_rng(9)
    A = rng.standard_normal((6, 6)) + 1j * rng.standard_normal((6, 6))
    R = 0.5 * (A + A.conj().T)
    sol = solve_diag_sdp(R, rng=np.random.default_rng(2))
    obj_small = gaussian_randomization(sol, R, 50, np.random.default_rng(5))[1]
    obj_large = gaussian_randomization(sol, R, 400, np.random.default_rng(5))[1]
    assert obj_large >= obj_small  # shared candidate stream can only improve
    again = gaussian_randomization(sol, R, 400, np.random.default_rng(5))[1]
    assert again == obj_large


def test_randomization_output_feasible_and_bounded():
    rng = np.random.default_rng(10)
    A = rng.standard_normal((7, 7)) + 1j * rng.standard_normal((7, 7))
    R = 0.5 * (A + A.conj().T)
    sol = solve_diag_sdp(R, rng=np.random.default_rng(4))
    v_bar, obj = gaussian_randomization(sol, R, 300, np.random.default_rng(6))
    assert np.allclose(np.abs(v_bar), 1.0, atol=1e-12)
    assert obj == pytest.approx(float(np.real(v_bar.conj() @ R @ v_bar)), rel=1e-12)
    # rounding never exceeds the relaxation value (plus certificate slack)
    assert obj <= sol.objective + sol.gap_certificate + 1e-8 * (1 + abs(obj))


def test_randomization_count_validation():
    sol = solve_diag_sdp(np.zeros((2, 2), dtype=complex))
    with pytest.raises(InvalidInputError):
        gaussian_randomization(sol, np.zeros((2, 2), dtype=complex), 0,
                               np.random.default_rng(0))


# -- recover_phases -----------------------------------------------------------

def test_recover_unit_aux_entry():
    v_bar = np.array([np.exp(1j * 0.7), np.exp(1j * 5.1), 1.0])
    theta = recover_phases(v_bar).theta
    assert np.allclose(theta, wrap_phase([0.7, 5.1]))


def test_recover_frozen_quotient():
    # hand arithmetic: arg(e^{j pi/3} / e^{j pi/2}) = -pi/6, wrapped 11 pi/6
    v_bar = np.array([np.exp(1j * np.pi / 3), np.exp(1j * np.pi / 2)])
    theta = recover_phases(v_bar).theta
    assert theta[0] == pytest.approx(11 * np.pi / 6, rel=1e-12)


def test_recover_global_phase_invariance():
    rng = np.random.default_rng(11)
    v_bar = np.exp(1j * rng.uniform(0, 2 * np.pi, 6))
    a = recover_phases(v_bar).theta
    b = recover_phases(v_bar * np.exp(1j * 1.234)).theta
    assert np.allclose(np.exp(1j * a), np.exp(1j * b), atol=1e-12)


def test_recover_zero_aux_rejected():
    with pytest.raises(DegenerateSolutionError):
        recover_phases(np.array([1.0 + 0.0j, 0.0 + 0.0j]))


# -- centralized_optimize -----------------------------------------------------

def sys_params(ch, p_bar=1.0):
    return SystemParams(M=ch.m, N=ch.n, p_bar=p_bar, sigma2=1.0)


def test_centralized_internal_consistency():
    rng = np.random.default_rng(42)
    ch = random_channel(rng, 2, 2)
    res = centralized_optimize(ch, sys_params(ch, 2.0),
                               rng=np.random.default_rng(0))
    # the reported achieved power is reproducible from the returned design
    assert received_power(ch, res.phases, res.beamformer) == pytest.approx(
        res.achieved_power, rel=1e-12)
    assert res.beamformer.transmit_power == pytest.approx(2.0, rel=1e-12)
    assert res.achieved_power <= res.upper_bound_power * (1 + 1e-9)


def test_centralized_single_element_analytic():
    # N = 1 relaxation is tight: bound = p_bar*(||phi||^2 + 2|phi . h_d| + ||h_d||^2)
    rng = np.random.default_rng(12)
    ch = random_channel(rng, 3, 1)
    res = centralized_optimize(ch, sys_params(ch),
                               rng=np.random.default_rng(0))
    phi = np.conj(ch.h_r[0]) * ch.G[0]
    expected = (np.linalg.norm(phi) ** 2 + 2 * abs(phi @ ch.h_d)
                + np.linalg.norm(ch.h_d) ** 2)
    assert res.upper_bound_power == pytest.approx(expected, rel=1e-6)
    assert res.achieved_power >= 0.995 * res.upper_bound_power


def test_centralized_dead_reflect_path():
    rng = np.random.default_rng(13)
    m = 3
    h_d = rng.standard_normal(m) + 1j * rng.standard_normal(m)
    ch = ChannelSet(h_d=h_d, h_r=np.zeros(2), G=np.ones((2, m), dtype=complex))
    res = centralized_optimize(ch, sys_params(ch, 2.0),
                               rng=np.random.default_rng(0))
    expected = 2.0 * np.linalg.norm(h_d) ** 2
    assert res.achieved_power == pytest.approx(expected, rel=1e-9)
    assert res.upper_bound_power == pytest.approx(expected, rel=1e-9)


def test_centralized_near_bound_regression():
    # regression for the phase-recovery orientation: a conjugation mistake
    # loses >10 dB here, while the correct pipeline sits within 5% of the bound
    rng = np.random.default_rng(14)
    ch = random_channel(rng, 4, 12)
    res = centralized_optimize(ch, sys_params(ch), rng=np.random.default_rng(0))
    assert res.achieved_power >= 0.95 * res.upper_bound_power


def test_centralized_deterministic():
    rng = np.random.default_rng(15)
    ch = random_channel(rng, 3, 5)
    a = centralized_optimize(ch, sys_params(ch), rng=np.random.default_rng(7))
    b = centralized_optimize(ch, sys_params(ch), rng=np.random.default_rng(7))
    assert a.achieved_power == b.achieved_power
    assert np.array_equal(a.phases.theta, b.phases.theta)
    assert np.array_equal(a.beamformer.w, b.beamformer.w)


def test_centralized_input_validation():
    rng = np.random.default_rng(16)
    ch = random_channel(rng, 2, 3)
    with pytest.raises(DimensionMismatchError):
        centralized_optimize(ch, SystemParams(M=2, N=4, p_bar=1.0, sigma2=1.0))
    empty = ChannelSet(h_d=np.ones(2, dtype=complex), h_r=np.zeros(0),
                       G=np.zeros((0, 2)))
    with pytest.raises(InvalidInputError):
        centralized_optimize(empty, SystemParams(M=2, N=0, p_bar=1.0, sigma2=1.0))


def test_sdr_options_validation():
    with pytest.raises(InvalidInputError):
        SdrOptions(randomization_count=0)
    with pytest.raises(InvalidInputError):
        SdrOptions(restarts=0)
    with pytest.raises(InvalidInputError):
        SdrOptions(max_sweeps=0)
