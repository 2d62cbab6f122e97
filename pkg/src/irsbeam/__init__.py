"""Joint transmit and reflect beamforming for a passive-surface-assisted
MISO link: centralized relaxation-based design, distributed alternating
design, matched-filter baselines, and Monte Carlo sweep tooling."""

__version__ = "0.1.0"

from ._kernels import backend_name
from .alternating import (AltOptConfig, AltOptTrace, alternating_optimize,
                          optimal_phases_given_w, rotated_mrt)
from .baselines import SCHEME_IDS, ap_irs_mrt, ap_user_mrt, no_irs
from .channels import (Geometry, PathLossParams, RngSeed, generate_channels,
                       link_distances, path_gain_linear, ula_steering,
                       ura_steering)
from .errors import (ConfigError, ConvergenceFailureError, DegenerateChannelError,
                     DegenerateSolutionError, DimensionMismatchError,
                     InvalidInputError, IrsbeamError, OutOfModelError)
from .model import (Beamformer, ChannelSet, PhaseConfig, SystemParams,
                    composite_channel, mrt_beamformer, receive_snr,
                    received_power, snr_db, wrap_phase)
from .oracle import brute_force_oracle
from .sdr import (CentralizedResult, HomogenizedProblem, SdpSolution, SdrOptions,
                  build_homogenized, build_phi, centralized_optimize,
                  gaussian_randomization, recover_phases, solve_diag_sdp)
from .sweep import (CSV_HEADER, MEAN_TRIAL, SweepConfig, TrialResult,
                    load_config_file, make_config, run_convergence_trace,
                    run_distance_sweep, run_elements_sweep, run_oracle_check,
                    write_csv)

__all__ = [
    "__version__", "backend_name",
    "AltOptConfig", "AltOptTrace", "alternating_optimize",
    "optimal_phases_given_w", "rotated_mrt",
    "SCHEME_IDS", "ap_irs_mrt", "ap_user_mrt", "no_irs",
    "Geometry", "PathLossParams", "RngSeed", "generate_channels",
    "link_distances", "path_gain_linear", "ula_steering", "ura_steering",
    "ConfigError", "ConvergenceFailureError", "DegenerateChannelError",
    "DegenerateSolutionError", "DimensionMismatchError", "InvalidInputError",
    "IrsbeamError", "OutOfModelError",
    "Beamformer", "ChannelSet", "PhaseConfig", "SystemParams",
    "composite_channel", "mrt_beamformer", "receive_snr", "received_power",
    "snr_db", "wrap_phase",
    "brute_force_oracle",
    "CentralizedResult", "HomogenizedProblem", "SdpSolution", "SdrOptions",
    "build_homogenized", "build_phi", "centralized_optimize",
    "gaussian_randomization", "recover_phases", "solve_diag_sdp",
    "CSV_HEADER", "MEAN_TRIAL", "SweepConfig", "TrialResult",
    "load_config_file", "make_config", "run_convergence_trace",
    "run_distance_sweep", "run_elements_sweep", "run_oracle_check", "write_csv",
]
