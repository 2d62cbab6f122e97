"""Exhaustive phase-grid search, the ground truth for tiny surfaces."""

import numpy as np

from . import _kernels
from .errors import InvalidInputError
from .model import ChannelSet, PhaseConfig, SystemParams, wrap_phase
from .sdr import build_phi

MAX_ELEMENTS = 3


def brute_force_oracle(ch: ChannelSet, sys_params: SystemParams,
                       grid_points: int = 64):
    """Best (PhaseConfig, received power) over the uniform phase grid.

    Evaluates all grid_points**N phase combinations theta_n = 2*pi*k/grid_points
    with the matched-filter transmitter at each, i.e. power =
    p_bar * ||v^H Phi + h_d^H||^2. Refused for N > 3: the grid has
    grid_points**N points, which at the 64-point default already costs
    ~2.6e5 * M operations for N = 3 and grows 64-fold per extra element.
    """
    if sys_params.M != ch.m or sys_params.N != ch.n:
        raise InvalidInputError(
            f"params expect (M, N) = {(sys_params.M, sys_params.N)}, "
            f"channel is {(ch.m, ch.n)}")
    if ch.n > MAX_ELEMENTS:
        raise InvalidInputError(
            f"exhaustive search over {grid_points}**{ch.n} grid points is "
            f"intractable; the oracle is limited to N <= {MAX_ELEMENTS}")
    if grid_points < 16:
        raise InvalidInputError(f"grid_points must be >= 16, got {grid_points}")
    Phi = np.ascontiguousarray(build_phi(ch.h_r, ch.G))
    hd_row = np.ascontiguousarray(ch.h_d.conj())
    gain, flat = _kernels.phase_grid_scan(Phi, hd_row, grid_points)
    if ch.n == 0:
        theta = np.zeros(0)
    else:
        idx = np.unravel_index(int(flat), (grid_points,) * ch.n)
        # the scan enumerates conjugate factors e^{-j 2 pi k / points}, so the
        # applied phases are the negated grid angles
        theta = -2.0 * np.pi * np.asarray(idx, dtype=float) / grid_points
    return PhaseConfig(wrap_phase(theta)), float(sys_params.p_bar * gain)
