"""Distributed joint design by alternating closed-form updates.

Given the transmitter weights w, the per-element phases that maximize the
composite amplitude are closed form: with t_n = conj(h_r_n) * (g_n^H w),

    theta_n = phi0 - arg(t_n),

which aligns every reflected term to the common phase phi0 and meets the
triangle bound |h_r^H diag(e^{j theta}) G w + h_d^H w| <= sum_n |t_n| +
|h_d^H w| with equality when arg(h_d^H w) = phi0. Given the phases, the
optimal w is the matched filter, rotated so the direct term is
real-positive (phi0 = 0), which keeps the alignment premise true on the
next pass. Both half-steps are exact maximizers of their block, so the
received power is non-decreasing and the loop stops on a small fractional
gain.

Each phase update for element n needs only arg(h_r_n) and arg(g_n^H w),
which is what makes the scheme distributable element by element.
"""

import logging
from dataclasses import dataclass

import numpy as np

from .errors import (DegenerateChannelError, DimensionMismatchError,
                     InvalidInputError)
from .model import (Beamformer, ChannelSet, PhaseConfig, SystemParams,
                    composite_channel, mrt_beamformer, received_power, wrap_phase)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class AltOptConfig:
    """Stopping rule for the alternating loop.

    epsilon : fractional power-increase threshold (default 1e-4)
    max_iter : iteration cap (default 30)
    phi0 : common target phase; fixed at 0 because the transmit update makes
        the direct term real-positive, which is what the phase update's
        optimality argument assumes.
    """

    epsilon: float = 1e-4
    max_iter: int = 30
    phi0: float = 0.0

    def __post_init__(self):
        if not self.epsilon > 0:
            raise InvalidInputError(f"epsilon must be positive, got {self.epsilon}")
        if int(self.max_iter) != self.max_iter or self.max_iter < 1:
            raise InvalidInputError(f"max_iter must be a positive integer, got {self.max_iter}")
        if self.phi0 != 0.0:
            raise InvalidInputError("phi0 is fixed at 0 by the update protocol")


@dataclass(frozen=True)
class AltOptTrace:
    """Iteration history: objectives[k] is the received power after k update
    rounds (objectives[0] is the initialization), so
    len(objectives) == iterations + 1 and the sequence is non-decreasing."""

    objectives: tuple
    iterations: int
    converged: bool
    final_w: Beamformer
    final_theta: PhaseConfig


def optimal_phases_given_w(ch: ChannelSet, w: np.ndarray,
                           phi0: float = 0.0) -> PhaseConfig:
    """Closed-form phase update theta_n = phi0 - arg(conj(h_r_n) * (g_n^H w)).

    Elements whose reflected term vanishes (zero h_r_n or zero g_n^H w)
    contribute nothing for any phase; their theta is set to 0.
    """
    w = np.asarray(w, dtype=complex)
    if w.ndim != 1 or w.size != ch.m:
        raise DimensionMismatchError(
            f"w has shape {w.shape}, channel has {ch.m} antennas")
    if not np.any(w):
        raise InvalidInputError("w must be nonzero")
    t = ch.h_r.conj() * (ch.G @ w)
    live = np.abs(t) > 0.0
    if not np.all(live):
        logger.debug("phase update: %d degenerate element(s) set to 0",
                     int(np.size(live) - np.count_nonzero(live)))
    theta = np.where(live, phi0 - np.angle(t), 0.0)
    return PhaseConfig(wrap_phase(theta))


def rotated_mrt(ch: ChannelSet, phases: PhaseConfig, p_bar: float):
    """Matched filter to the composite channel, rotated so h_d^H w is
    real-positive. Returns (Beamformer, rotation alpha). A zero composite
    channel raises DegenerateChannelError; a zero direct term keeps
    alpha = 0."""
    base = mrt_beamformer(composite_channel(ch, phases), p_bar)
    direct = complex(ch.h_d.conj() @ base.w)
    if direct == 0:
        logger.debug("transmit update: direct term vanished, no rotation applied")
        return base, 0.0
    alpha = float(-np.angle(direct))
    return Beamformer(base.w * np.exp(1j * alpha)), alpha


def alternating_optimize(ch: ChannelSet, sys_params: SystemParams,
                         cfg: AltOptConfig | None = None) -> AltOptTrace:
    """Alternate the two closed-form updates from w0 = matched filter on h_d.

    Stops when an update round increases the received power by less than
    cfg.epsilon (fractionally), or after cfg.max_iter rounds. Requires
    N >= 1 and a nonzero h_d (the initialization and the stopping rule's
    denominator both need it).
    """
    if cfg is None:
        cfg = AltOptConfig()
    if ch.n < 1:
        raise InvalidInputError("alternating design needs at least one element")
    if sys_params.M != ch.m or sys_params.N != ch.n:
        raise DimensionMismatchError(
            f"params expect (M, N) = {(sys_params.M, sys_params.N)}, "
            f"channel is {(ch.m, ch.n)}")
    if not np.any(ch.h_d):
        raise DegenerateChannelError("h_d must be nonzero for the initialization")

    # matched filter on the direct row channel h_d^H gives sqrt(p)*h_d/||h_d||
    w = mrt_beamformer(ch.h_d.conj(), sys_params.p_bar)
    theta = PhaseConfig(np.zeros(ch.n))
    powers = [received_power(ch, theta, w)]
    converged = False
    for _ in range(cfg.max_iter):
        theta = optimal_phases_given_w(ch, w.w, cfg.phi0)
        w, _ = rotated_mrt(ch, theta, sys_params.p_bar)
        powers.append(received_power(ch, theta, w))
        if powers[-1] - powers[-2] < cfg.epsilon * powers[-2]:
            converged = True
            break
    return AltOptTrace(objectives=tuple(powers), iterations=len(powers) - 1,
                       converged=converged, final_w=w, final_theta=theta)
