"""Monte Carlo sweep orchestration, flat config files, and CSV output.

Reproducibility contract: every output is a pure function of the
SweepConfig. Each (sweep point, trial) pair owns two Philox streams keyed
off the config seed (an even one for the channel draw, the following odd
one for optimizer randomness), and rows are sorted before writing, so the
CSV bytes do not depend on the worker count. Wall-clock timing is
diagnostic and off by default precisely because it would break that
contract; with timing disabled runtime_ms is written as 0.0.

CSV schema: scheme,d_m,N,trial,snr_db,iterations,runtime_ms with UTF-8, LF
line endings, and round-trip-exact float formatting. Per-(scheme, d, N)
aggregate rows (dB of the trial-mean linear SNR) use trial = -1.
Convergence traces emit one row per iteration, with the iteration index in
the iterations column. An SNR of zero is serialized as -inf.
"""

import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, fields

import numpy as np

from .alternating import AltOptConfig, alternating_optimize
from .baselines import SCHEME_IDS, ap_irs_mrt, ap_user_mrt, no_irs
from .channels import Geometry, PathLossParams, RngSeed, generate_channels
from .errors import ConfigError
from .model import SystemParams, received_power, snr_db
from .oracle import brute_force_oracle
from .sdr import (SdrOptions, build_homogenized, build_phi, centralized_optimize,
                  solve_diag_sdp)

CSV_HEADER = "scheme,d_m,N,trial,snr_db,iterations,runtime_ms"
MEAN_TRIAL = -1  # trial index of aggregate rows

EXPERIMENTS = ("distance_sweep", "elements_sweep", "convergence_trace",
               "oracle_check")


@dataclass
class TrialResult:
    """One CSV row; snr_linear is kept alongside for aggregation only."""

    scheme: str
    d_m: float
    n: int
    trial: int
    snr_db: float
    iterations: int = 0
    runtime_ms: float = 0.0
    snr_linear: float = 0.0

    def csv_line(self):
        return (f"{self.scheme},{float(self.d_m)},{self.n},{self.trial},"
                f"{float(self.snr_db)},{self.iterations},{float(self.runtime_ms)}")

    def sort_key(self):
        return (self.scheme, self.d_m, self.n, self.trial, self.iterations)


@dataclass
class SweepConfig:
    """Everything a sweep run depends on. Flat key = value config files use
    exactly these field names; every key is also a CLI flag (CLI wins)."""

    experiment: str = "distance_sweep"
    # geometry / surface layout
    d: float = 50.0
    d0: float = 51.0
    dv: float = 2.0
    nx: int = 5
    ny: int = 10
    spacing: float = 0.5
    # system
    m: int = 8
    p_bar_dbm: float = 5.0
    sigma2_dbm: float = -80.0
    # propagation
    ref_loss_db: float = 30.0
    alpha_direct: float = 3.0
    alpha_los: float = 2.0
    penetration_db: float = 10.0
    gain_ap_dbi: float = 0.0
    gain_user_dbi: float = 0.0
    gain_irs_element_dbi: float = 5.0
    # sweep axes and size
    d_values: tuple = (15.0, 25.0, 35.0, 43.0, 47.0, 50.0)
    n_values: tuple = (10, 20, 30, 40, 50, 60)
    trials: int = 500
    schemes: tuple = SCHEME_IDS
    seed: int = 0
    out: str = "results.csv"
    # distributed stopping rule
    epsilon: float = 1e-4
    max_iter: int = 30
    # relaxation solver / rounding
    randomization_count: int = 1000
    restarts: int = 3
    feas_tol: float = 1e-6
    stat_tol: float = 1e-7
    max_sweeps: int = 5000
    # oracle
    grid_points: int = 64
    # execution
    jobs: int = 1
    timing: bool = False

    # -- derived accessors -------------------------------------------------

    def p_bar_watts(self):
        return float(10.0 ** ((self.p_bar_dbm - 30.0) / 10.0))

    def sigma2_watts(self):
        return float(10.0 ** ((self.sigma2_dbm - 30.0) / 10.0))

    def path_loss(self):
        return PathLossParams(
            ref_loss_db=self.ref_loss_db, alpha_direct=self.alpha_direct,
            alpha_los=self.alpha_los, penetration_db=self.penetration_db,
            gain_ap_dbi=self.gain_ap_dbi, gain_user_dbi=self.gain_user_dbi,
            gain_irs_element_dbi=self.gain_irs_element_dbi)

    def sdr_options(self):
        return SdrOptions(randomization_count=self.randomization_count,
                          restarts=self.restarts, feas_tol=self.feas_tol,
                          stat_tol=self.stat_tol, max_sweeps=self.max_sweeps)

    def alt_config(self):
        return AltOptConfig(epsilon=self.epsilon, max_iter=self.max_iter)

    # -- validation ----------------------------------------------------------

    def validate(self):
        def bad(key, msg):
            raise ConfigError(f"config key '{key}': {msg}", key=key)

        if self.experiment not in EXPERIMENTS:
            bad("experiment", f"must be one of {EXPERIMENTS}")
        for key in ("m", "nx", "ny", "trials", "max_iter", "randomization_count",
                    "restarts", "max_sweeps", "jobs", "grid_points"):
            v = getattr(self, key)
            if int(v) != v or v < 1:
                bad(key, f"must be a positive integer, got {v!r}")
        if int(self.seed) != self.seed or not 0 <= self.seed < 2 ** 63:
            bad("seed", f"must be an integer in [0, 2^63), got {self.seed!r}")
        if not self.d0 > 0:
            bad("d0", f"must be positive, got {self.d0!r}")
        if not 0.0 <= self.d <= self.d0:
            bad("d", f"must lie in [0, d0], got {self.d!r}")
        if self.dv < 0:
            bad("dv", f"must be non-negative, got {self.dv!r}")
        if not self.spacing > 0:
            bad("spacing", f"must be positive, got {self.spacing!r}")
        if not self.epsilon > 0:
            bad("epsilon", f"must be positive, got {self.epsilon!r}")
        if self.grid_points < 16:
            bad("grid_points", f"must be >= 16, got {self.grid_points!r}")
        if not self.d_values:
            bad("d_values", "must not be empty")
        for d in self.d_values:
            if not 0.0 <= d <= self.d0:
                bad("d_values", f"distance {d!r} outside [0, d0 = {self.d0}]")
        if not self.n_values:
            bad("n_values", "must not be empty")
        if self.experiment == "oracle_check":
            for n in self.n_values:
                if int(n) != n or not 1 <= n <= 3:
                    bad("n_values", f"oracle check needs N in 1..3, got {n!r}")
        else:
            for n in self.n_values:
                if int(n) != n or n < 1 or n % self.ny:
                    bad("n_values",
                        f"N values must be positive multiples of ny = {self.ny}, got {n!r}")
        if not self.schemes:
            bad("schemes", "must not be empty")
        for s in self.schemes:
            if s not in SCHEME_IDS:
                bad("schemes", f"unknown scheme {s!r}; valid: {', '.join(SCHEME_IDS)}")
        return self


# -- flat key = value config files -------------------------------------------

def _parse_bool(text):
    lowered = text.strip().lower()
    if lowered in ("1", "true", "yes", "on"):
        return True
    if lowered in ("0", "false", "no", "off"):
        return False
    raise ValueError(f"not a boolean: {text!r}")


def _parse_float_list(text):
    toks = [t for t in text.replace(",", " ").split() if t]
    if not toks:
        raise ValueError("empty list")
    return tuple(float(t) for t in toks)


def _parse_int_list(text):
    toks = [t for t in text.replace(",", " ").split() if t]
    if not toks:
        raise ValueError("empty list")
    return tuple(int(t) for t in toks)


def _parse_str_list(text):
    toks = [t.strip() for t in text.split(",") if t.strip()]
    if not toks:
        raise ValueError("empty list")
    return tuple(toks)


_LIST_PARSERS = {"d_values": _parse_float_list, "n_values": _parse_int_list,
                 "schemes": _parse_str_list}


def _key_parsers():
    parsers = {}
    for f in fields(SweepConfig):
        if f.name in _LIST_PARSERS:
            parsers[f.name] = _LIST_PARSERS[f.name]
        elif f.type in (bool, "bool"):
            parsers[f.name] = _parse_bool
        elif f.type in (int, "int"):
            parsers[f.name] = int
        elif f.type in (float, "float"):
            parsers[f.name] = float
        else:
            parsers[f.name] = str
    return parsers


KEY_PARSERS = _key_parsers()
CONFIG_KEYS = tuple(KEY_PARSERS)


def load_config_file(path):
    """Parse a flat key = value file ('#' comments, blank lines ignored).

    Returns the raw string mapping; keys are validated in make_config so the
    offending key can be reported. Later duplicates win.
    """
    entries = {}
    try:
        with open(path, "r", encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path}: {exc}") from exc
    for lineno, line in enumerate(text.splitlines(), 1):
        stripped = line.split("#", 1)[0].strip()
        if not stripped:
            continue
        if "=" not in stripped:
            raise ConfigError(
                f"{path}:{lineno}: expected 'key = value', got {line.strip()!r}")
        key, _, value = stripped.partition("=")
        entries[key.strip()] = value.strip()
    return entries


def make_config(experiment, file_entries=None, overrides=None) -> SweepConfig:
    """Defaults <- config file <- explicit overrides (CLI), then validate."""
    kwargs = {}
    for key, raw in (file_entries or {}).items():
        if key not in KEY_PARSERS:
            raise ConfigError(f"unknown config key '{key}'", key=key)
        try:
            kwargs[key] = KEY_PARSERS[key](raw)
        except (ValueError, TypeError) as exc:
            raise ConfigError(f"config key '{key}': cannot parse {raw!r} ({exc})",
                              key=key) from exc
    for key, value in (overrides or {}).items():
        if key not in KEY_PARSERS:
            raise ConfigError(f"unknown config key '{key}'", key=key)
        if value is not None:
            kwargs[key] = value
    kwargs["experiment"] = experiment
    return SweepConfig(**kwargs).validate()


# -- trial engine -------------------------------------------------------------

def _timed(fn, enabled):
    if not enabled:
        return fn(), 0.0
    start = time.perf_counter()
    out = fn()
    return out, (time.perf_counter() - start) * 1e3


def _trial_rows(cfg, d, nx, ny, point_idx, trial):
    """Rows for every requested scheme on one channel realization."""
    n = nx * ny
    p_bar = cfg.p_bar_watts()
    sigma2 = cfg.sigma2_watts()
    sysp = SystemParams(M=cfg.m, N=n, p_bar=p_bar, sigma2=sigma2)
    geo = Geometry(d=d, d0=cfg.d0, dv=cfg.dv, nx=nx, ny=ny, spacing=cfg.spacing)
    sid = point_idx * cfg.trials + trial
    ch = generate_channels(geo, cfg.path_loss(), sysp, RngSeed(cfg.seed, 2 * sid))
    opt_rng = RngSeed(cfg.seed, 2 * sid + 1).generator()

    want = set(cfg.schemes)
    rows = []

    def emit(scheme, power, iterations, ms):
        lin = power / sigma2
        rows.append(TrialResult(scheme=scheme, d_m=d, n=n, trial=trial,
                                snr_db=snr_db(lin), iterations=iterations,
                                runtime_ms=ms, snr_linear=lin))

    if want & {"centralized", "upper_bound"}:
        if "centralized" in want:
            res, ms = _timed(
                lambda: centralized_optimize(ch, sysp, cfg.sdr_options(), opt_rng),
                cfg.timing)
            emit("centralized", res.achieved_power, 0, ms)
            if "upper_bound" in want:
                emit("upper_bound", res.upper_bound_power, 0, ms)
        else:
            def bound_only():
                prob = build_homogenized(build_phi(ch.h_r, ch.G), ch.h_d)
                sol = solve_diag_sdp(prob.R, feas_tol=cfg.feas_tol,
                                     obj_tol=cfg.stat_tol, restarts=cfg.restarts,
                                     max_sweeps=cfg.max_sweeps, rng=opt_rng)
                return p_bar * (sol.objective + prob.h_d_const)
            bound, ms = _timed(bound_only, cfg.timing)
            emit("upper_bound", bound, 0, ms)
    if "distributed" in want:
        trace, ms = _timed(
            lambda: alternating_optimize(ch, sysp, cfg.alt_config()), cfg.timing)
        emit("distributed", trace.objectives[-1], trace.iterations, ms)
    if "ap_user_mrt" in want:
        (w, theta), ms = _timed(lambda: ap_user_mrt(ch, sysp), cfg.timing)
        emit("ap_user_mrt", received_power(ch, theta, w), 0, ms)
    if "ap_irs_mrt" in want:
        (w, theta), ms = _timed(lambda: ap_irs_mrt(ch, sysp), cfg.timing)
        emit("ap_irs_mrt", received_power(ch, theta, w), 0, ms)
    if "no_irs" in want:
        (_, power), ms = _timed(lambda: no_irs(ch, sysp), cfg.timing)
        emit("no_irs", power, 0, ms)
    return rows


def _convergence_rows(cfg, d, nx, ny, point_idx, trial):
    """One row per iteration of the distributed loop (iterations column =
    iteration index, 0 is the initialization)."""
    n = nx * ny
    sysp = SystemParams(M=cfg.m, N=n, p_bar=cfg.p_bar_watts(),
                        sigma2=cfg.sigma2_watts())
    geo = Geometry(d=d, d0=cfg.d0, dv=cfg.dv, nx=nx, ny=ny, spacing=cfg.spacing)
    sid = point_idx * cfg.trials + trial
    ch = generate_channels(geo, cfg.path_loss(), sysp, RngSeed(cfg.seed, 2 * sid))
    trace = alternating_optimize(ch, sysp, cfg.alt_config())
    sigma2 = cfg.sigma2_watts()
    return [TrialResult(scheme="distributed", d_m=d, n=n, trial=trial,
                        snr_db=snr_db(p / sigma2), iterations=k,
                        snr_linear=p / sigma2)
            for k, p in enumerate(trace.objectives)]


def _oracle_rows(cfg, n, point_idx, trial):
    """Exhaustive-search power vs both optimizers on a tiny (ny = 1) surface."""
    sysp = SystemParams(M=cfg.m, N=n, p_bar=cfg.p_bar_watts(),
                        sigma2=cfg.sigma2_watts())
    geo = Geometry(d=cfg.d, d0=cfg.d0, dv=cfg.dv, nx=n, ny=1, spacing=cfg.spacing)
    sid = point_idx * cfg.trials + trial
    ch = generate_channels(geo, cfg.path_loss(), sysp, RngSeed(cfg.seed, 2 * sid))
    opt_rng = RngSeed(cfg.seed, 2 * sid + 1).generator()
    sigma2 = cfg.sigma2_watts()
    rows = []

    def emit(scheme, power, iterations, ms):
        lin = power / sigma2
        rows.append(TrialResult(scheme=scheme, d_m=cfg.d, n=n, trial=trial,
                                snr_db=snr_db(lin), iterations=iterations,
                                runtime_ms=ms, snr_linear=lin))

    (_, best_power), ms = _timed(
        lambda: brute_force_oracle(ch, sysp, cfg.grid_points), cfg.timing)
    emit("oracle", best_power, 0, ms)
    res, ms = _timed(
        lambda: centralized_optimize(ch, sysp, cfg.sdr_options(), opt_rng),
        cfg.timing)
    emit("centralized", res.achieved_power, 0, ms)
    trace, ms = _timed(
        lambda: alternating_optimize(ch, sysp, cfg.alt_config()), cfg.timing)
    emit("distributed", trace.objectives[-1], trace.iterations, ms)
    return rows


def _run_work(cfg, work, fn):
    if cfg.jobs <= 1:
        chunks = [fn(*item) for item in work]
    else:
        with ThreadPoolExecutor(max_workers=cfg.jobs) as pool:
            chunks = list(pool.map(lambda item: fn(*item), work))
    return [row for chunk in chunks for row in chunk]


def _mean_rows(rows):
    """dB of the trial-mean linear SNR per (scheme, d, N), trial = -1."""
    groups = {}
    for r in rows:
        groups.setdefault((r.scheme, r.d_m, r.n), []).append(r)
    means = []
    for (scheme, d, n), members in groups.items():
        lin = float(np.mean([r.snr_linear for r in members]))
        ms = float(np.mean([r.runtime_ms for r in members]))
        means.append(TrialResult(scheme=scheme, d_m=d, n=n, trial=MEAN_TRIAL,
                                 snr_db=snr_db(lin), iterations=0,
                                 runtime_ms=ms, snr_linear=lin))
    return means


def write_csv(path, rows):
    lines = [CSV_HEADER]
    lines.extend(r.csv_line() for r in rows)
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write("\n".join(lines) + "\n")


def _finalize(cfg, rows, with_means=True):
    if with_means:
        rows = rows + _mean_rows(rows)
    rows.sort(key=TrialResult.sort_key)
    write_csv(cfg.out, rows)
    return rows


# -- experiment runners -------------------------------------------------------

def run_distance_sweep(cfg: SweepConfig):
    """Sweep the receiver position at fixed N = nx * ny."""
    cfg.validate()
    work = [(d, cfg.nx, cfg.ny, pi, t)
            for pi, d in enumerate(cfg.d_values) for t in range(cfg.trials)]
    rows = _run_work(cfg, work, lambda *a: _trial_rows(cfg, *a))
    return _finalize(cfg, rows)


def run_elements_sweep(cfg: SweepConfig):
    """Sweep the element count at fixed distance d; rows of ny elements are
    added nx at a time (nx = N / ny)."""
    cfg.validate()
    work = [(cfg.d, n // cfg.ny, cfg.ny, pi, t)
            for pi, n in enumerate(cfg.n_values) for t in range(cfg.trials)]
    rows = _run_work(cfg, work, lambda *a: _trial_rows(cfg, *a))
    return _finalize(cfg, rows)


def run_convergence_trace(cfg: SweepConfig):
    """Per-iteration received SNR of the distributed loop at (d, N)."""
    cfg.validate()
    work = [(cfg.d, cfg.nx, cfg.ny, 0, t) for t in range(cfg.trials)]
    rows = _run_work(cfg, work, lambda *a: _convergence_rows(cfg, *a))
    return _finalize(cfg, rows, with_means=False)


def run_oracle_check(cfg: SweepConfig):
    """Both optimizers against the exhaustive grid on tiny surfaces."""
    cfg.validate()
    work = [(n, pi, t) for pi, n in enumerate(cfg.n_values)
            for t in range(cfg.trials)]
    rows = _run_work(cfg, work, lambda *a: _oracle_rows(cfg, *a))
    return _finalize(cfg, rows)


RUNNERS = {"distance_sweep": run_distance_sweep,
           "elements_sweep": run_elements_sweep,
           "convergence_trace": run_convergence_trace,
           "oracle_check": run_oracle_check}
