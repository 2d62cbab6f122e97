"""Command-line front end.

Subcommands: sweep-distance, sweep-elements, convergence, oracle-check.
Every config-file key has a CLI flag of the same name; CLI values override
the file. Exit codes: 0 success, 2 configuration error, 3 numerical or
convergence failure, 4 I/O error.
"""

import argparse
import sys

from . import __version__
from .errors import (ConfigError, ConvergenceFailureError, DegenerateChannelError,
                     DegenerateSolutionError, InvalidInputError, OutOfModelError)
from .sweep import (CONFIG_KEYS, MEAN_TRIAL, RUNNERS, _parse_float_list,
                    _parse_int_list, _parse_str_list, load_config_file,
                    make_config)

_COMMANDS = {
    "sweep-distance": ("distance_sweep", "receiver-position sweep at fixed N"),
    "sweep-elements": ("elements_sweep", "element-count sweep at fixed distance"),
    "convergence": ("convergence_trace", "per-iteration distributed-loop trace"),
    "oracle-check": ("oracle_check", "optimizers vs exhaustive search, N <= 3"),
}

_FLAG_TYPES = {
    "d": float, "d0": float, "dv": float, "nx": int, "ny": int, "spacing": float,
    "m": int, "p_bar_dbm": float, "sigma2_dbm": float,
    "ref_loss_db": float, "alpha_direct": float, "alpha_los": float,
    "penetration_db": float, "gain_ap_dbi": float, "gain_user_dbi": float,
    "gain_irs_element_dbi": float,
    "d_values": _parse_float_list, "n_values": _parse_int_list,
    "schemes": _parse_str_list,
    "trials": int, "seed": int, "out": str,
    "epsilon": float, "max_iter": int,
    "randomization_count": int, "restarts": int, "feas_tol": float,
    "stat_tol": float, "max_sweeps": int, "grid_points": int, "jobs": int,
}


def _add_config_flags(parser):
    parser.add_argument("--config", metavar="FILE",
                        help="flat key = value config file")
    for key, typ in _FLAG_TYPES.items():
        parser.add_argument(f"--{key}", type=typ, default=None,
                            help=f"override config key '{key}'")
    parser.add_argument("--timing", action=argparse.BooleanOptionalAction,
                        default=None,
                        help="measure per-scheme runtime_ms (breaks byte-level "
                             "reproducibility of the CSV)")


def build_parser():
    parser = argparse.ArgumentParser(
        prog="irsbeam",
        description="Joint transmit/reflect beamforming simulator")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)
    for name, (experiment, help_text) in _COMMANDS.items():
        p = sub.add_parser(name, help=help_text)
        p.set_defaults(experiment=experiment)
        _add_config_flags(p)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        file_entries = load_config_file(args.config) if args.config else {}
        overrides = {key: getattr(args, key) for key in CONFIG_KEYS
                     if getattr(args, key, None) is not None}
        cfg = make_config(args.experiment, file_entries, overrides)
        rows = RUNNERS[cfg.experiment](cfg)
        n_trial_rows = sum(1 for r in rows if r.trial != MEAN_TRIAL)
        print(f"{cfg.experiment}: wrote {len(rows)} rows "
              f"({n_trial_rows} trial rows) to {cfg.out}")
        return 0
    except (ConfigError, InvalidInputError, OutOfModelError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except (ConvergenceFailureError, DegenerateChannelError,
            DegenerateSolutionError, FloatingPointError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 3
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return 4


if __name__ == "__main__":
    sys.exit(main())
