"""Centralized joint design via semidefinite relaxation.

With the matched-filter transmitter substituted in, the design reduces to
maximizing the composite channel gain ||v^H Phi + h_d^H||^2 over the
unit-modulus phase vector v (Phi = diag(h_r^H) G). Homogenizing with an
auxiliary phase t lifts this to a quadratic form v_bar^H R v_bar with
v_bar = [v; t], whose rank relaxation is a complex semidefinite program
with unit diagonal:

    maximize tr(R V)  subject to  V_nn = 1,  V >= 0.

The relaxation is solved through a low-rank factorization V = Y Y^H with
unit-norm rows (rank ceil(sqrt(2(N+1))), enough to contain a maximizer),
ascended by row-wise exact maximization and certified by a dual bound.
Gaussian rounding then projects sampled candidates back to unit modulus,
and the best candidate yields the phase shifts.
"""

import math
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .errors import (ConvergenceFailureError, DegenerateSolutionError,
                     DimensionMismatchError, InvalidInputError)
from .model import (Beamformer, ChannelSet, PhaseConfig, SystemParams,
                    composite_channel, mrt_beamformer, received_power, wrap_phase)


@dataclass(frozen=True)
class HomogenizedProblem:
    """Lifted quadratic form: R is (N+1) x (N+1) Hermitian with zero
    bottom-right entry; h_d_const = ||h_d||^2 is the constant the quadratic
    form omits, so total gain = v_bar^H R v_bar + h_d_const."""

    R: np.ndarray
    Phi: np.ndarray
    h_d_const: float


@dataclass(frozen=True)
class SdpSolution:
    """Solution of the unit-diagonal relaxation plus its certificates.

    objective : tr(R V), real
    diag_residual : max |V_nn - 1|
    psd_residual : max(0, -lambda_min(V))
    gap_certificate : dual upper bound minus objective (rigorous duality gap)
    stationarity : largest row movement a further ascent step would take
    restart_spread : best-minus-worst objective across restarts
    sweeps : total ascent sweeps summed over restarts
    """

    V: np.ndarray
    objective: float
    diag_residual: float
    psd_residual: float
    gap_certificate: float
    stationarity: float
    restart_spread: float
    sweeps: int


@dataclass(frozen=True)
class SdrOptions:
    """Knobs for the centralized pipeline (defaults match the simulations)."""

    randomization_count: int = 1000
    restarts: int = 3
    feas_tol: float = 1e-6
    stat_tol: float = 1e-7
    max_sweeps: int = 5000

    def __post_init__(self):
        if self.randomization_count < 1:
            raise InvalidInputError("randomization_count must be >= 1")
        if self.restarts < 1:
            raise InvalidInputError("restarts must be >= 1")
        if self.max_sweeps < 1:
            raise InvalidInputError("max_sweeps must be >= 1")


@dataclass(frozen=True)
class CentralizedResult:
    """Joint design output.

    upper_bound_power = p_bar * (tr(R V*) + ||h_d||^2) dominates every
    feasible (w, theta); achieved_power is the rounded design's received
    power, so achieved_power <= upper_bound_power up to solver tolerance.
    """

    beamformer: Beamformer
    phases: PhaseConfig
    upper_bound_power: float
    achieved_power: float
    relaxation: SdpSolution
    rounding_objective: float


def build_phi(h_r: np.ndarray, G: np.ndarray) -> np.ndarray:
    """Phi = diag(h_r^H) G: row n is conj(h_r_n) times row n of G."""
    h_r = np.asarray(h_r, dtype=complex)
    G = np.asarray(G, dtype=complex)
    if h_r.ndim != 1 or G.ndim != 2 or G.shape[0] != h_r.size:
        raise DimensionMismatchError(
            f"h_r has shape {h_r.shape}, G has shape {G.shape}")
    return h_r.conj()[:, None] * G


def build_homogenized(Phi: np.ndarray, h_d: np.ndarray) -> HomogenizedProblem:
    """Lift ||v^H Phi + h_d^H||^2 to [v; t]^H R [v; t] + ||h_d||^2.

    R = [[Phi Phi^H, Phi h_d], [h_d^H Phi^H, 0]]; at t = 1 the identity is
    exact for every v.
    """
    Phi = np.asarray(Phi, dtype=complex)
    h_d = np.asarray(h_d, dtype=complex)
    if Phi.ndim != 2 or h_d.ndim != 1 or Phi.shape[1] != h_d.size:
        raise DimensionMismatchError(
            f"Phi has shape {Phi.shape}, h_d has shape {h_d.shape}")
    n = Phi.shape[0]
    R = np.zeros((n + 1, n + 1), dtype=complex)
    R[:n, :n] = Phi @ Phi.conj().T
    R[:n, n] = Phi @ h_d
    R[n, :n] = R[:n, n].conj()
    R = 0.5 * (R + R.conj().T)  # kill rounding asymmetry
    return HomogenizedProblem(R=R, Phi=Phi,
                              h_d_const=float(np.vdot(h_d, h_d).real))


def _check_hermitian(R):
    R = np.ascontiguousarray(np.asarray(R, dtype=complex))
    if R.ndim != 2 or R.shape[0] != R.shape[1]:
        raise InvalidInputError(f"R must be square, got shape {R.shape}")
    scale = float(np.max(np.abs(R))) if R.size else 0.0
    if float(np.max(np.abs(R - R.conj().T))) > 1e-10 * max(scale, 1.0):
        raise InvalidInputError("R is not Hermitian")
    return R, scale


def solve_diag_sdp(R: np.ndarray, feas_tol: float = 1e-6, obj_tol: float = 1e-7,
                   restarts: int = 3, max_sweeps: int = 5000,
                   rng: np.random.Generator | None = None) -> SdpSolution:
    """Maximize tr(R V) over Hermitian PSD V with unit diagonal.

    Low-rank ascent: V = Y Y^H with unit-norm rows of Y, swept row by row
    (each row update is the exact maximizer given the others, so sweeps are
    monotone); several random restarts guard against rank-deficient
    stationary points. The returned gap_certificate is a rigorous duality
    gap computed from the dual feasible point lambda_i = ||g_i|| + R_ii.

    Raises ConvergenceFailureError (carrying the best iterate and residuals)
    if a restart fails to stabilize within max_sweeps sweeps.
    """
    R, scale = _check_hermitian(R)
    n = R.shape[0]
    if rng is None:
        rng = np.random.default_rng(0)
    if scale == 0.0:
        # flat objective: every feasible point is optimal; return identity
        eye = np.eye(n, dtype=complex)
        return SdpSolution(V=eye, objective=0.0, diag_residual=0.0,
                           psd_residual=0.0, gap_certificate=0.0,
                           stationarity=0.0, restart_spread=0.0, sweeps=0)

    k = math.ceil(math.sqrt(2.0 * n))
    best_Y = None
    best_f = -np.inf
    objectives = []
    total_sweeps = 0
    for _ in range(restarts):
        draws = rng.standard_normal((n, k, 2))
        Y = draws[..., 0] + 1j * draws[..., 1]
        Y /= np.linalg.norm(Y, axis=1, keepdims=True)
        Y = np.ascontiguousarray(Y)
        S = np.ascontiguousarray(R @ Y)
        f_prev = float(np.vdot(Y, S).real)
        converged = False
        for sweep in range(1, max_sweeps + 1):
            move = _kernels.sweep_unit_rows(R, Y, S)
            S = np.ascontiguousarray(R @ Y)
            f = float(np.vdot(Y, S).real)
            total_sweeps += 1
            if sweep >= 3 and f - f_prev <= obj_tol * (1.0 + abs(f)):
                converged = True
                break
            f_prev = f
        if not converged:
            raise ConvergenceFailureError(
                f"relaxation ascent did not stabilize in {max_sweeps} sweeps",
                best=Y, residuals={"objective": f, "last_movement": move})
        objectives.append(f)
        if f > best_f:
            best_f = f
            best_Y = Y

    Y = best_Y
    S = R @ Y
    f = float(np.vdot(Y, S).real)
    # dual certificate: lambda_i = ||g_i|| + R_ii gives S_dual = diag(lambda) - R
    # with tr(Y^H S_dual Y) = sum ||g_i|| - f >= 0; any negative eigenvalue of
    # S_dual is compensated by shifting all lambda_i, each shift costing 1.
    Gmat = S - np.diag(R).real[:, None] * Y
    gnorm = np.linalg.norm(Gmat, axis=1)
    lam = gnorm + np.diag(R).real
    lam_min = float(np.linalg.eigvalsh(np.diag(lam) - R)[0])
    dual = float(lam.sum() + n * max(0.0, -lam_min))
    nz = gnorm > 0.0
    station = 0.0
    if np.any(nz):
        station = float(np.max(np.linalg.norm(
            Gmat[nz] / gnorm[nz, None] - Y[nz], axis=1)))

    V = Y @ Y.conj().T
    V = 0.5 * (V + V.conj().T)
    diag_res = float(np.max(np.abs(np.diagonal(V) - 1.0)))
    psd_res = max(0.0, -float(np.linalg.eigvalsh(V)[0]))
    spread = float(max(objectives) - min(objectives)) if objectives else 0.0
    return SdpSolution(V=V, objective=f, diag_residual=diag_res,
                       psd_residual=psd_res, gap_certificate=dual - f,
                       stationarity=station, restart_spread=spread,
                       sweeps=total_sweeps)


def gaussian_randomization(sol: SdpSolution, R: np.ndarray, count: int,
                           rng: np.random.Generator):
    """Round the relaxation to a unit-modulus vector by Gaussian sampling.

    Draws count candidates r ~ CN(0, I), forms U Sigma^(1/2) r from the
    eigendecomposition of sol.V (tiny negative eigenvalues clamped to zero),
    projects entrywise to unit modulus, and keeps the candidate maximizing
    v_bar^H R v_bar (first-found tie-break). The candidate stream is a
    deterministic prefix-stable function of rng, so enlarging count with the
    same stream can only improve the result.

    Returns (v_bar, objective).
    """
    if count < 1:
        raise InvalidInputError(f"count must be >= 1, got {count}")
    R, _ = _check_hermitian(R)
    n = R.shape[0]
    if sol.V.shape != (n, n):
        raise DimensionMismatchError(
            f"solution V has shape {sol.V.shape}, R has shape {R.shape}")
    eigvals, eigvecs = np.linalg.eigh(sol.V)
    eigvals = np.maximum(eigvals, 0.0)  # clamp rounding noise (>= -1e-9)
    L = np.ascontiguousarray(eigvecs * np.sqrt(eigvals)[None, :])
    draws = rng.standard_normal((count, n, 2))
    raw = np.ascontiguousarray((draws[..., 0] + 1j * draws[..., 1]) / np.sqrt(2.0))
    obj, _, v_bar = _kernels.best_unit_modulus(L, raw, R)
    return np.asarray(v_bar), float(obj)


def recover_phases(v_bar: np.ndarray) -> PhaseConfig:
    """Per-element phases from the homogenized solution.

    Divides out the auxiliary last entry (global phase) and keeps the
    entrywise angles: theta_n = arg(v_bar_n / v_bar_{N+1}), wrapped. Note
    the lifted variable of build_homogenized enters its quadratic form
    conjugate-transposed, so when rounding output feeds this function the
    caller conjugates first (as centralized_optimize does).
    """
    v_bar = np.asarray(v_bar, dtype=complex)
    if v_bar.ndim != 1 or v_bar.size < 1:
        raise DimensionMismatchError("v_bar must be a 1-D vector with the auxiliary entry")
    t = v_bar[-1]
    if abs(t) < 1e-12:
        raise DegenerateSolutionError("auxiliary entry of v_bar is zero")
    return PhaseConfig(wrap_phase(np.angle(v_bar[:-1] / t)))


def centralized_optimize(ch: ChannelSet, sys_params: SystemParams,
                         opts: SdrOptions | None = None,
                         rng: np.random.Generator | None = None) -> CentralizedResult:
    """Full centralized pipeline: relax, solve, round, recover, match.

    Requires N >= 1 (use the baselines for N = 0). The upper bound
    p_bar * (tr(R V*) + ||h_d||^2) dominates every feasible design because
    every unit-modulus v embeds as a feasible rank-one V.
    """
    if ch.n < 1:
        raise InvalidInputError("centralized design needs at least one element")
    if sys_params.M != ch.m or sys_params.N != ch.n:
        raise DimensionMismatchError(
            f"params expect (M, N) = {(sys_params.M, sys_params.N)}, "
            f"channel is {(ch.m, ch.n)}")
    if opts is None:
        opts = SdrOptions()
    if rng is None:
        rng = np.random.default_rng(0)
    prob = build_homogenized(build_phi(ch.h_r, ch.G), ch.h_d)
    sol = solve_diag_sdp(prob.R, feas_tol=opts.feas_tol, obj_tol=opts.stat_tol,
                         restarts=opts.restarts, max_sweeps=opts.max_sweeps,
                         rng=rng)
    v_bar, rounding_obj = gaussian_randomization(
        sol, prob.R, opts.randomization_count, rng)
    # The lifted variable multiplies Phi through a conjugate transpose, so its
    # entries carry e^{-j theta}; conjugate before reading off applied phases.
    phases = recover_phases(v_bar.conj())
    w = mrt_beamformer(composite_channel(ch, phases), sys_params.p_bar)
    achieved = received_power(ch, phases, w)
    upper = sys_params.p_bar * (sol.objective + prob.h_d_const)
    return CentralizedResult(beamformer=w, phases=phases,
                             upper_bound_power=float(upper),
                             achieved_power=float(achieved),
                             relaxation=sol, rounding_objective=rounding_obj)
