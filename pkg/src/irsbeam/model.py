"""Signal model for a MISO downlink assisted by a passive reflecting surface.

A multi-antenna transmitter serves a single-antenna receiver through the
superposition of a direct path and a path bounced off a surface of N
passive elements, each applying a phase shift with unit reflection
amplitude. The effective channel seen by the receiver is

    h_eff^H = h_r^H diag(e^{j theta}) G + h_d^H      (row vector, length M)

All powers are linear watts; conversion to dB happens only at I/O
boundaries (see snr_db). The dataclasses are frozen and their arrays are
marked read-only, so instances are safe to share across threads.
"""

from dataclasses import dataclass

import numpy as np

from .errors import DegenerateChannelError, DimensionMismatchError, InvalidInputError

TWO_PI = 2.0 * np.pi


def wrap_phase(theta):
    """Wrap phase(s) to the canonical interval [0, 2*pi)."""
    return np.mod(np.asarray(theta, dtype=float), TWO_PI)


def snr_db(snr):
    """Linear power ratio to dB. Zero maps to -inf, the serialized sentinel."""
    snr = float(snr)
    if snr <= 0.0:
        return float("-inf")
    return float(10.0 * np.log10(snr))


def _complex_vector(x, name):
    arr = np.array(x, dtype=complex)
    if arr.ndim != 1:
        raise DimensionMismatchError(f"{name} must be 1-D, got shape {arr.shape}")
    if arr.size and not np.all(np.isfinite(arr)):
        raise InvalidInputError(f"{name} contains non-finite entries")
    return arr


@dataclass(frozen=True)
class SystemParams:
    """Static link parameters.

    M : transmit antennas (>= 1)
    N : reflecting elements (>= 0; 0 means no surface)
    p_bar : transmit power budget, watts
    sigma2 : receiver noise power, watts
    """

    M: int
    N: int
    p_bar: float
    sigma2: float

    def __post_init__(self):
        if int(self.M) != self.M or self.M < 1:
            raise InvalidInputError(f"M must be a positive integer, got {self.M}")
        if int(self.N) != self.N or self.N < 0:
            raise InvalidInputError(f"N must be a non-negative integer, got {self.N}")
        if not self.p_bar > 0:
            raise InvalidInputError(f"p_bar must be positive, got {self.p_bar}")
        if not self.sigma2 > 0:
            raise InvalidInputError(f"sigma2 must be positive, got {self.sigma2}")


@dataclass(frozen=True)
class ChannelSet:
    """One fading realization of the three constituent links.

    h_d : direct transmitter-to-receiver channel, shape (M,); used as h_d^H
    h_r : surface-to-receiver channel, shape (N,); used as h_r^H
    G   : transmitter-to-surface matrix, shape (N, M); row n is the channel
          into element n

    N = 0 (empty h_r, G) is legal and models the absent surface.
    """

    h_d: np.ndarray
    h_r: np.ndarray
    G: np.ndarray

    def __post_init__(self):
        h_d = _complex_vector(self.h_d, "h_d")
        h_r = _complex_vector(self.h_r, "h_r")
        if h_d.size < 1:
            raise DimensionMismatchError("h_d needs at least one entry")
        G = np.array(self.G, dtype=complex)
        if G.ndim != 2:
            raise DimensionMismatchError(f"G must be 2-D, got shape {G.shape}")
        if G.shape != (h_r.size, h_d.size):
            raise DimensionMismatchError(
                f"G has shape {G.shape}, expected {(h_r.size, h_d.size)}")
        if G.size and not np.all(np.isfinite(G)):
            raise InvalidInputError("G contains non-finite entries")
        for name, arr in (("h_d", h_d), ("h_r", h_r), ("G", G)):
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)

    @property
    def m(self):
        return self.h_d.size

    @property
    def n(self):
        return self.h_r.size


@dataclass(frozen=True)
class PhaseConfig:
    """Per-element phase shifts, stored wrapped to [0, 2*pi).

    The reflection amplitude beta is fixed at 1 (full reflection); the field
    exists to make the modeling assumption explicit.
    """

    theta: np.ndarray
    beta: float = 1.0

    def __post_init__(self):
        theta = np.array(self.theta, dtype=float)
        if theta.ndim != 1:
            raise DimensionMismatchError(f"theta must be 1-D, got shape {theta.shape}")
        if theta.size and not np.all(np.isfinite(theta)):
            raise InvalidInputError("theta contains non-finite entries")
        if self.beta != 1.0:
            raise InvalidInputError("reflection amplitude is fixed at 1")
        theta = wrap_phase(theta)
        theta.setflags(write=False)
        object.__setattr__(self, "theta", theta)

    @property
    def n(self):
        return self.theta.size

    def unit_phasors(self):
        """e^{j theta_n}, the diagonal of the reflection matrix."""
        return self.beta * np.exp(1j * self.theta)


@dataclass(frozen=True)
class Beamformer:
    """Transmit weight vector w, units watts^(1/2).

    The power budget ||w||^2 <= p_bar is the constructor's contract;
    mrt_beamformer always spends the full budget.
    """

    w: np.ndarray

    def __post_init__(self):
        w = _complex_vector(self.w, "w")
        if w.size < 1:
            raise DimensionMismatchError("w needs at least one entry")
        w.setflags(write=False)
        object.__setattr__(self, "w", w)

    @property
    def m(self):
        return self.w.size

    @property
    def transmit_power(self):
        return float(np.vdot(self.w, self.w).real)


def composite_channel(ch: ChannelSet, phases: PhaseConfig) -> np.ndarray:
    """Effective end-to-end row channel h_r^H diag(e^{j theta}) G + h_d^H.

    Returns a length-M complex vector. For N = 0 this is just h_d^H, and the
    result is then independent of (the empty) phases.
    """
    if phases.n != ch.n:
        raise DimensionMismatchError(
            f"phase vector has {phases.n} entries, channel has {ch.n} elements")
    reflected = (ch.h_r.conj() * phases.unit_phasors()) @ ch.G
    return reflected + ch.h_d.conj()


def received_power(ch: ChannelSet, phases: PhaseConfig, bf: Beamformer) -> float:
    """|(h_r^H diag(e^{j theta}) G + h_d^H) w|^2, watts."""
    if bf.m != ch.m:
        raise DimensionMismatchError(
            f"beamformer has {bf.m} antennas, channel has {ch.m}")
    amp = composite_channel(ch, phases) @ bf.w
    return float(amp.real * amp.real + amp.imag * amp.imag)


def receive_snr(ch: ChannelSet, phases: PhaseConfig, bf: Beamformer,
                params: SystemParams) -> float:
    """Received SNR (linear). Report in dB via snr_db at output boundaries."""
    if params.M != ch.m or params.N != ch.n:
        raise DimensionMismatchError(
            f"params expect (M, N) = {(params.M, params.N)}, channel is {(ch.m, ch.n)}")
    return received_power(ch, phases, bf) / params.sigma2


def mrt_beamformer(h_eff: np.ndarray, p_bar: float) -> Beamformer:
    """Matched (maximum-ratio) transmitter for a row channel h_eff.

    w = sqrt(p_bar) * h_eff^H / ||h_eff||, so h_eff @ w = sqrt(p_bar)*||h_eff||
    and the full power budget is spent. Raises DegenerateChannelError for a
    zero channel.
    """
    if not p_bar > 0:
        raise InvalidInputError(f"p_bar must be positive, got {p_bar}")
    h = _complex_vector(h_eff, "h_eff")
    norm = float(np.linalg.norm(h))
    if norm == 0.0:
        raise DegenerateChannelError("cannot match to an all-zero channel")
    return Beamformer(np.sqrt(p_bar) * h.conj() / norm)
