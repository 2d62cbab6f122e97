"""Channel realization from link geometry.

Layout (all distances in meters): the transmitter sits at the origin of a
horizontal axis, the reflecting surface d0 away on that axis, and the
receiver on a parallel line dv away, a distance d along the axis. The
transmitter-to-surface link is a deterministic rank-one line-of-sight
matrix built from array steering vectors; the two receiver-side links are
Rayleigh with per-entry variance set by the distance-dependent path gain.

Randomness comes from a counter-based Philox stream keyed by
(seed, stream_id), so any draw is reproducible in isolation and distinct
stream ids are safe to evaluate in parallel.
"""

from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatchError, InvalidInputError, OutOfModelError
from .model import ChannelSet, SystemParams


@dataclass(frozen=True)
class Geometry:
    """Node placement and surface layout.

    d  : transmitter-receiver horizontal separation, 0 <= d <= d0
    d0 : transmitter-surface separation along the axis (default 51)
    dv : receiver line offset from the axis (default 2)
    nx, ny : surface elements per row / column, N = nx * ny
    spacing : antenna/element spacing in wavelengths (default half)
    """

    d: float
    d0: float = 51.0
    dv: float = 2.0
    nx: int = 5
    ny: int = 10
    spacing: float = 0.5

    def __post_init__(self):
        if not self.d0 > 0:
            raise InvalidInputError(f"d0 must be positive, got {self.d0}")
        if not 0.0 <= self.d <= self.d0:
            raise InvalidInputError(f"d must lie in [0, d0], got {self.d}")
        if self.dv < 0:
            raise InvalidInputError(f"dv must be non-negative, got {self.dv}")
        for name in ("nx", "ny"):
            v = getattr(self, name)
            if int(v) != v or v < 1:
                raise InvalidInputError(f"{name} must be a positive integer, got {v}")
        if not self.spacing > 0:
            raise InvalidInputError(f"spacing must be positive, got {self.spacing}")

    @property
    def n_elements(self):
        return self.nx * self.ny


@dataclass(frozen=True)
class PathLossParams:
    """Distance-based power law: loss_dB = ref_loss_db + 10*alpha*log10(d).

    alpha_direct applies to both receiver-side links (transmitter-receiver
    and surface-receiver), which also incur penetration_db of penetration
    loss. alpha_los applies to the unobstructed transmitter-surface link.
    Antenna gains are credited per traversed hop, so the per-element gain
    counts once on the transmitter-surface hop and once on the
    surface-receiver hop.
    """

    ref_loss_db: float = 30.0
    alpha_direct: float = 3.0
    alpha_los: float = 2.0
    penetration_db: float = 10.0
    gain_ap_dbi: float = 0.0
    gain_user_dbi: float = 0.0
    gain_irs_element_dbi: float = 5.0

    def __post_init__(self):
        if self.alpha_direct < 1 or self.alpha_los < 1:
            raise InvalidInputError("path-loss exponents must be >= 1")
        if self.penetration_db < 0:
            raise InvalidInputError("penetration_db must be non-negative")


@dataclass(frozen=True)
class RngSeed:
    """Deterministic stream identity: Philox keyed by (seed, stream_id).

    Distinct stream ids give statistically independent streams, so parallel
    trials can each own one without coordination.
    """

    seed: int
    stream_id: int = 0

    def __post_init__(self):
        for name in ("seed", "stream_id"):
            v = getattr(self, name)
            if int(v) != v or not 0 <= v < 2 ** 64:
                raise InvalidInputError(f"{name} must be an integer in [0, 2^64)")

    def generator(self) -> np.random.Generator:
        key = np.array([self.seed, self.stream_id], dtype=np.uint64)
        return np.random.Generator(np.random.Philox(key=key))


def link_distances(geo: Geometry):
    """(transmitter-receiver, surface-receiver) Euclidean distances.

    d1 = sqrt(d^2 + dv^2), d2 = sqrt((d0 - d)^2 + dv^2).
    """
    d1 = float(np.hypot(geo.d, geo.dv))
    d2 = float(np.hypot(geo.d0 - geo.d, geo.dv))
    return d1, d2


def path_gain_linear(distance: float, exponent: float, params: PathLossParams,
                     include_penetration: bool = False, gains_db: float = 0.0) -> float:
    """Linear power gain 10^((gains_db - loss_dB)/10) at the given distance.

    The power law is referenced to 1 m; distances below that are outside the
    model and raise OutOfModelError.
    """
    if distance < 1.0:
        raise OutOfModelError(
            f"distance {distance} m is below the 1 m reference of the power law")
    loss_db = params.ref_loss_db + 10.0 * exponent * np.log10(distance)
    if include_penetration:
        loss_db += params.penetration_db
    return float(10.0 ** ((gains_db - loss_db) / 10.0))


def ula_steering(m: int, angle: float, spacing: float = 0.5) -> np.ndarray:
    """Uniform linear array steering vector, entry k = e^{j*2pi*spacing*k*sin(angle)}.

    angle is measured from broadside, in radians.
    """
    if int(m) != m or m < 1:
        raise InvalidInputError(f"array size must be a positive integer, got {m}")
    return np.exp(1j * 2.0 * np.pi * spacing * np.arange(m) * np.sin(angle))


def ura_steering(nx: int, ny: int, azimuth: float, elevation: float,
                 spacing: float = 0.5) -> np.ndarray:
    """Uniform rectangular array steering vector of length nx*ny.

    Kronecker product of a vertical factor (elevation, ny entries) and a
    horizontal factor (azimuth, nx entries); element order is row-major over
    (vertical index, horizontal index), i.e. entry n corresponds to
    iy = n // nx, ix = n % nx. With ny = 1 this reduces to ula_steering(nx).
    """
    horizontal = ula_steering(nx, azimuth, spacing)
    vertical = ula_steering(ny, elevation, spacing)
    return np.kron(vertical, horizontal)


def generate_channels(geo: Geometry, params: PathLossParams,
                      sys_params: SystemParams, rng: RngSeed) -> ChannelSet:
    """Draw one ChannelSet; a pure function of (geo, params, sys_params, rng).

    The transmitter-surface matrix is rank one: sqrt(g_los) * b a^H with b
    the surface steering vector and a the transmitter steering vector. The
    two arrays face each other broadside across the transmitter-surface axis
    at equal altitude, so the line-of-sight azimuth and elevation are both
    zero at either end. h_d and h_r are i.i.d. circularly symmetric complex
    Gaussian with per-entry variance equal to the respective path gain; the
    draw order is h_d (real block then imaginary block) followed by h_r.
    """
    if sys_params.N != geo.n_elements:
        raise DimensionMismatchError(
            f"params.N = {sys_params.N} but geometry has {geo.n_elements} elements")
    d1, d2 = link_distances(geo)
    gain_direct = path_gain_linear(
        d1, params.alpha_direct, params, include_penetration=True,
        gains_db=params.gain_ap_dbi + params.gain_user_dbi)
    gain_reflect = path_gain_linear(
        d2, params.alpha_direct, params, include_penetration=True,
        gains_db=params.gain_irs_element_dbi + params.gain_user_dbi)
    gain_los = path_gain_linear(
        geo.d0, params.alpha_los, params, include_penetration=False,
        gains_db=params.gain_ap_dbi + params.gain_irs_element_dbi)

    ap_vec = ula_steering(sys_params.M, 0.0, geo.spacing)
    surf_vec = ura_steering(geo.nx, geo.ny, 0.0, 0.0, geo.spacing)
    G = np.sqrt(gain_los) * np.outer(surf_vec, ap_vec.conj())

    gen = rng.generator()
    h_d = _rayleigh(gen, sys_params.M, gain_direct)
    h_r = _rayleigh(gen, sys_params.N, gain_reflect)
    return ChannelSet(h_d=h_d, h_r=h_r, G=G)


def _rayleigh(gen, size, gain):
    # per-entry variance = gain; sqrt(gain/2)*(x + jy) with x, y ~ N(0, 1)
    draws = gen.standard_normal((2, size))
    return np.sqrt(gain / 2.0) * (draws[0] + 1j * draws[1])
