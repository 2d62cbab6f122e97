"""Benchmark transmit strategies and the stable scheme identifiers."""

import numpy as np

from .alternating import optimal_phases_given_w
from .errors import DegenerateChannelError
from .model import Beamformer, ChannelSet, PhaseConfig, SystemParams, mrt_beamformer

# Stable identifiers used in CLI --schemes and in the CSV scheme column.
SCHEME_IDS = ("upper_bound", "centralized", "distributed",
              "ap_user_mrt", "ap_irs_mrt", "no_irs")


def ap_user_mrt(ch: ChannelSet, sys_params: SystemParams):
    """Beam at the user: matched filter on h_d, then closed-form phases.

    Returns (Beamformer, PhaseConfig).
    """
    w = mrt_beamformer(ch.h_d.conj(), sys_params.p_bar)
    return w, optimal_phases_given_w(ch, w.w, 0.0)


def ap_irs_mrt(ch: ChannelSet, sys_params: SystemParams):
    """Beam at the surface: matched filter on its first-element row of G,
    then closed-form phases. Returns (Beamformer, PhaseConfig).

    The matched filter is rotated by a common phase so the direct term
    h_d^H w is real-positive; the phase update aligns the reflected terms to
    zero, so without the rotation the direct path would add with an
    arbitrary phase. The rotation also makes the received power identical
    whichever row of a rank-one G is matched.
    """
    if ch.n < 1 or not np.any(ch.G[0]):
        raise DegenerateChannelError("no usable transmitter-surface channel row")
    w = mrt_beamformer(ch.G[0], sys_params.p_bar).w
    direct = complex(ch.h_d.conj() @ w)
    if direct != 0:
        w = w * np.exp(-1j * np.angle(direct))
    bf = Beamformer(w)
    return bf, optimal_phases_given_w(ch, bf.w, 0.0)


def no_irs(ch: ChannelSet, sys_params: SystemParams):
    """No surface: matched filter on h_d, reflect path excluded entirely.

    Returns (Beamformer, received power p_bar * ||h_d||^2).
    """
    w = mrt_beamformer(ch.h_d.conj(), sys_params.p_bar)
    amp = complex(ch.h_d.conj() @ w.w)
    return w, float(amp.real * amp.real + amp.imag * amp.imag)
