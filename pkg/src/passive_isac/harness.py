"""Monte Carlo experiment drivers: calibration, ROC, trade-off, and map runs.

Every run is reproducible from its configuration alone: trial randomness
derives from (master seed, a CRC32 stream tag, trial index) through
SeedSequence, the run id is a digest of the canonical configuration, and
outputs carry no timestamps. Detection trials synthesize the post-combining
equivalent observation directly (which matches the full antenna-level front
end in law) so that large trial counts stay affordable; the map run
exercises the full front end including delay compensation.

Results land in CurveTable objects (column-oriented float tables with a
sidecar metadata dict). ``to_csv`` writes the numbers; the metadata,
thresholds, and achieved design figures go to a JSON manifest next to it.
"""

from __future__ import annotations

import hashlib
import json
import zlib
from dataclasses import dataclass, field, asdict
from pathlib import Path

import numpy as np
import yaml

from . import __version__ as _version
from .asymptotics import (
    asymptotic_pd,
    asymptotic_threshold,
    kappa_active,
    kappa_general,
)
from .beamform import (
    BeamformerResult,
    comm_only,
    optimize_active,
    optimize_max_pd,
    sweep_gamma_d,
)
from .detector import (
    Threshold,
    active_statistic,
    glrt_statistic,
    threshold_from_samples,
)
from .errors import ConfigError, DimensionMismatch, Infeasible
from .scenario import (
    SPEED_OF_LIGHT,
    ChannelSet,
    ScenarioConfig,
    build_channels,
    steering_vector,
    with_beamformer,
)
from .waveform import (
    _phase_ramp,
    gen_symbols_gaussian,
    gen_symbols_ofdm,
    synth_received,
)

SCHEMES = ("active", "max_pd", "snrd_threshold", "comm_only")

# Trial-count presets. The desk scale finishes in minutes on a laptop; the
# paper scale resolves low false-alarm operating points and runs for hours.
SCALES = {
    "desk": {"pfa": 1e-2, "n_calibration": 10_000, "n_detection": 2_000},
    "paper": {"pfa": 1e-4, "n_calibration": 1_000_000, "n_detection": 100_000},
}


@dataclass
class CurveTable:
    """Column-oriented numeric results with a free-form metadata sidecar."""

    columns: list
    rows: list
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        width = len(self.columns)
        for r in self.rows:
            if len(r) != width:
                raise DimensionMismatch(
                    f"row of width {len(r)} in a table with {width} columns")

    def column(self, name: str) -> np.ndarray:
        try:
            idx = self.columns.index(name)
        except ValueError:
            raise ConfigError(f"no column named {name!r}") from None
        return np.array([row[idx] for row in self.rows], dtype=float)

    def to_csv(self, path) -> None:
        lines = [",".join(self.columns)]
        for row in self.rows:
            lines.append(",".join(f"{float(v):.17g}" for v in row))
        Path(path).write_text("\n".join(lines) + "\n")

    def write_manifest(self, path) -> None:
        Path(path).write_text(json.dumps(self.metadata, indent=2, sort_keys=True) + "\n")


def trial_rng(master_seed: int, tag: str, trial: int) -> np.random.Generator:
    """Independent per-trial generator keyed by (master seed, tag, trial)."""
    key = zlib.crc32(tag.encode("utf-8"))
    return np.random.default_rng(np.random.SeedSequence(master_seed, spawn_key=(key, trial)))


def run_id_for(config: dict) -> str:
    """Deterministic digest of a canonicalized configuration dict."""
    blob = json.dumps(config, sort_keys=True, separators=(",", ":"), default=str)
    return hashlib.sha256(blob.encode("utf-8")).hexdigest()[:16]


# -- configuration ----------------------------------------------------------

_EXPERIMENT_KEYS = {
    "kind", "schemes", "scale", "pfa", "pfa_grid", "n_calibration", "n_detection",
    "gamma_c_db", "gamma_c_grid_db", "rcs_variance", "seed", "n_candidates",
    "sweep_axis", "sweep_values", "snr_t_grid_db", "snr_d_grid_db",
    "grid_extent", "grid_cells", "n_trials", "angle_grid_deg", "design",
    "n_frames", "n_subcarriers", "subcarrier_spacing", "hypothesis",
}


@dataclass
class ExperimentConfig:
    """Bundle of a scene, an experiment recipe, and output naming."""

    scenario: ScenarioConfig
    kind: str = "roc"
    schemes: tuple = SCHEMES
    scale: str = "desk"
    pfa: float | None = None
    pfa_grid: list | None = None
    n_calibration: int | None = None
    n_detection: int | None = None
    gamma_c_db: float = 12.0
    gamma_c_grid_db: list | None = None
    rcs_variance: float | None = None
    seed: int = 0
    n_candidates: int = 1000
    sweep_axis: str = "rcs_dbsm"
    sweep_values: list | None = None
    snr_t_grid_db: list | None = None
    snr_d_grid_db: list | None = None
    grid_extent: list | None = None
    grid_cells: int = 40
    n_trials: int = 100
    angle_grid_deg: list | None = None
    design: str = "active"
    hypothesis: str = "h1"
    n_frames: int = 2
    n_subcarriers: int = 1024
    subcarrier_spacing: float = 30e3
    out_dir: str = "."
    prefix: str = "run"

    def __post_init__(self):
        if self.scale not in SCALES:
            raise ConfigError(f"scale must be one of {sorted(SCALES)}, got {self.scale!r}")
        preset = SCALES[self.scale]
        if self.pfa is None:
            self.pfa = preset["pfa"]
        if self.n_calibration is None:
            self.n_calibration = preset["n_calibration"]
        if self.n_detection is None:
            self.n_detection = preset["n_detection"]
        if self.rcs_variance is None:
            self.rcs_variance = self.scenario.rcs_variance
        self.schemes = tuple(self.schemes)
        unknown = [s for s in self.schemes if s not in SCHEMES]
        if unknown:
            raise ConfigError(f"unknown schemes {unknown}; valid: {list(SCHEMES)}")
        if self.hypothesis not in ("h0", "h1"):
            raise ConfigError(f"hypothesis must be h0 or h1, got {self.hypothesis!r}")

    @property
    def gamma_c(self) -> float:
        return 10.0 ** (self.gamma_c_db / 10.0)

    def as_dict(self) -> dict:
        d = asdict(self)
        d["scenario"] = self.scenario.as_dict()
        d["schemes"] = list(self.schemes)
        return d

    def run_id(self) -> str:
        return run_id_for(self.as_dict())


def load_config(path) -> ExperimentConfig:
    """Read a YAML config with scenario / experiment / output sections."""
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path}: {exc}") from exc
    try:
        raw = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        raise ConfigError(f"config file {path} is not valid YAML: {exc}") from exc
    if not isinstance(raw, dict):
        raise ConfigError("config file must hold a mapping")
    unknown = set(raw) - {"scenario", "experiment", "output"}
    if unknown:
        raise ConfigError(f"unknown top-level config sections: {sorted(unknown)}")
    scen_kwargs = dict(raw.get("scenario") or {})
    for key in ("bs_position", "target_position", "target_velocity"):
        if key in scen_kwargs:
            scen_kwargs[key] = tuple(scen_kwargs[key])
    for key in ("sr_positions", "cu_positions"):
        if key in scen_kwargs:
            scen_kwargs[key] = tuple(tuple(p) for p in scen_kwargs[key])
    try:
        scenario = ScenarioConfig(**scen_kwargs)
    except TypeError as exc:
        raise ConfigError(f"bad scenario section: {exc}") from exc
    exp = dict(raw.get("experiment") or {})
    unknown = set(exp) - _EXPERIMENT_KEYS
    if unknown:
        raise ConfigError(f"unknown experiment keys: {sorted(unknown)}")
    out = dict(raw.get("output") or {})
    unknown = set(out) - {"directory", "prefix"}
    if unknown:
        raise ConfigError(f"unknown output keys: {sorted(unknown)}")
    return ExperimentConfig(
        scenario=scenario,
        out_dir=out.get("directory", "."),
        prefix=out.get("prefix", "run"),
        **exp,
    )


# -- designs ----------------------------------------------------------------

def compute_design(scheme: str, channels: ChannelSet, gamma_c: float, p_t: float,
                   *, n_candidates: int = 1000, rng=0) -> BeamformerResult:
    """Run the named transmit design on a prepared channel set."""
    if scheme == "max_pd":
        return optimize_max_pd(channels, gamma_c, p_t, n_candidates=n_candidates, rng=rng)
    if scheme == "active":
        return optimize_active(channels, gamma_c, p_t, n_candidates=n_candidates, rng=rng)
    if scheme == "comm_only":
        return comm_only(channels, gamma_c, p_t, n_candidates=n_candidates, rng=rng)
    if scheme == "snrd_threshold":
        # the best point of the SNR-floor sweep, judged by noncentrality
        points = sweep_gamma_d(channels, gamma_c, p_t, n_candidates=n_candidates, rng=rng)
        feasible = [r for _, r in points if r is not None]
        if not feasible:
            raise Infeasible("no feasible SNR-floor design in the sweep range")
        return max(feasible, key=lambda r: r.kappa_achieved)
    raise ConfigError(f"unknown scheme {scheme!r}")


def design_summary(result: BeamformerResult) -> dict:
    return {
        "design": result.design,
        "kappa": result.kappa_achieved,
        "power": result.power,
        "sinr_db": [float(10 * np.log10(s)) for s in result.sinrs],
        "snr_d": result.snr_d,
        "gamma_d_used": result.gamma_d_used,
    }


def _active_rows(channels: ChannelSet, w: np.ndarray) -> np.ndarray:
    """Equivalent receiver rows of the known-waveform benchmark.

    The benchmark receiver points its whole n_r-element array at the target,
    so each receiver contributes one combined row with full coherent gain
    sqrt(n_r) on the target return, and the direct path is assumed removed.
    """
    n_r = channels.config.n_r if channels.config is not None else channels.b_t1.shape[1]
    gain = np.sqrt(n_r) * channels.alpha_t
    return gain[:, None] * (channels.a_t.conj() @ w)[None, :]


def _equiv_obs(h_t, h_d, symbols, sigma_r2, hypothesis, rng):
    """Stacked 2M x L equivalent observation for one trial."""
    m = h_d.shape[0]
    l = symbols.shape[1]
    y = rng.standard_normal((2 * m, l)) + 1j * rng.standard_normal((2 * m, l))
    y *= np.sqrt(sigma_r2 / 2.0)
    y[m:] += h_d @ symbols
    if hypothesis == "h1":
        y[:m] += h_t @ symbols
    return y


def _passive_trial_stat(h_t, h_d, symbols, sigma_r2, hypothesis, rng, c):
    y = _equiv_obs(h_t, h_d, symbols, sigma_r2, hypothesis, rng)
    return glrt_statistic(y, sigma_r2, c).statistic


def _rcs_draw(rng, variance):
    g = (rng.standard_normal() + 1j * rng.standard_normal()) / np.sqrt(2.0)
    return g * np.sqrt(variance)


def _scheme_samplers(scheme, channels, design, config):
    """(h0_stat, h1_stat) callables taking a Generator, for one scheme."""
    scen = config.scenario
    c, l, s2 = scen.c, scen.block_length, scen.sigma_r2
    if scheme == "active":
        h_rows = _active_rows(channels, design.w)
        m = h_rows.shape[0]

        def h0_stat(rng):
            s = gen_symbols_gaussian(rng, c, l).data
            y = rng.standard_normal((m, l)) + 1j * rng.standard_normal((m, l))
            y *= np.sqrt(s2 / 2.0)
            return active_statistic(y, s, s2)

        def h1_stat(rng):
            g = _rcs_draw(rng, config.rcs_variance)
            s = gen_symbols_gaussian(rng, c, l).data
            y = rng.standard_normal((m, l)) + 1j * rng.standard_normal((m, l))
            y *= np.sqrt(s2 / 2.0)
            y += (g * h_rows) @ s
            return active_statistic(y, s, s2)

        return h0_stat, h1_stat

    ch_w = with_beamformer(channels, design.w)

    def h0_stat(rng):
        s = gen_symbols_gaussian(rng, c, l).data
        return _passive_trial_stat(ch_w.h_t_tilde, ch_w.h_d_tilde, s, s2, "h0", rng, c)

    def h1_stat(rng):
        g = _rcs_draw(rng, config.rcs_variance)
        s = gen_symbols_gaussian(rng, c, l).data
        return _passive_trial_stat(g * ch_w.h_t_tilde, ch_w.h_d_tilde, s, s2,
                                   "h1", rng, c)

    return h0_stat, h1_stat


# -- runs -------------------------------------------------------------------

def run_roc(config: ExperimentConfig) -> CurveTable:
    """Detection-rate curves over a false-alarm grid for each scheme.

    Thresholds come from H0 Monte Carlo (one calibration batch per scheme),
    detection rates from H1 trials with a fresh reflectivity draw per trial.
    """
    scen = config.scenario
    ch = build_channels(scen)
    pfa_grid = sorted(float(p) for p in
                      (config.pfa_grid or [1e-3, 2e-3, 5e-3, 1e-2, 2e-2, 5e-2, 1e-1]))
    thresholds: dict = {}
    designs: dict = {}
    pd_cols: dict = {}
    se_cols: dict = {}
    for scheme in config.schemes:
        res = compute_design(scheme, ch, config.gamma_c, scen.p_t,
                             n_candidates=config.n_candidates, rng=config.seed)
        designs[scheme] = design_summary(res)
        h0_stat, h1_stat = _scheme_samplers(scheme, ch, res, config)
        h0 = np.array([h0_stat(trial_rng(config.seed, scheme + ":h0", t))
                       for t in range(config.n_calibration)])
        h1 = np.array([h1_stat(trial_rng(config.seed, scheme + ":h1", t))
                       for t in range(config.n_detection)])
        rhos, pds, ses = [], [], []
        for pfa in pfa_grid:
            rho = threshold_from_samples(h0, pfa)
            hit = float(np.mean(h1 > rho))
            rhos.append(rho)
            pds.append(hit)
            ses.append(float(np.sqrt(hit * (1.0 - hit) / len(h1))))
        thresholds[scheme] = [
            Threshold(rho=r, pfa_target=p, n_trials=config.n_calibration,
                      method="monte_carlo", seed=config.seed).as_dict()
            for r, p in zip(rhos, pfa_grid)]
        pd_cols[scheme] = pds
        se_cols[scheme] = ses

    columns = ["pfa"]
    for scheme in config.schemes:
        columns += [f"pd_{scheme}", f"se_{scheme}"]
    rows = []
    for i, pfa in enumerate(pfa_grid):
        row = [pfa]
        for scheme in config.schemes:
            row += [pd_cols[scheme][i], se_cols[scheme][i]]
        rows.append(row)
    meta = {
        "kind": "roc",
        "run_id": config.run_id(),
        "version": _version,
        "config": config.as_dict(),
        "designs": designs,
        "thresholds": thresholds,
    }
    return CurveTable(columns=columns, rows=rows, metadata=meta)


def run_tradeoff(config: ExperimentConfig) -> CurveTable:
    """Sensing performance versus the communication SINR floor.

    Sweeps gamma_c, redesigns each scheme at every point, and reports the
    achieved noncentrality (scaled by the mean reflectivity power) and the
    asymptotic detection rate at the config false-alarm level. Infeasible
    points are flagged in a dedicated column, not dropped.
    """
    scen = config.scenario
    ch = build_channels(scen)
    grid_db = config.gamma_c_grid_db or [float(v) for v in np.arange(0.0, 22.0, 2.0)]
    nu = 2 * scen.m * scen.c
    rho = asymptotic_threshold(config.pfa, nu)
    columns = ["gamma_c_db"]
    for scheme in config.schemes:
        columns += [f"kappa_{scheme}", f"pd_{scheme}", f"feasible_{scheme}"]
    rows = []
    designs: dict = {}
    for g_db in grid_db:
        gamma_c = 10.0 ** (float(g_db) / 10.0)
        row = [float(g_db)]
        for scheme in config.schemes:
            try:
                res = compute_design(scheme, ch, gamma_c, scen.p_t,
                                     n_candidates=config.n_candidates, rng=config.seed)
            except Infeasible:
                row += [float("nan"), float("nan"), 0.0]
                continue
            kap = res.kappa_achieved * config.rcs_variance
            row += [kap, asymptotic_pd(rho, nu, kap), 1.0]
            designs.setdefault(scheme, {})[f"{g_db:g}"] = design_summary(res)
        rows.append(row)
    meta = {
        "kind": "tradeoff",
        "run_id": config.run_id(),
        "version": _version,
        "config": config.as_dict(),
        "designs": designs,
        "asymptotic_threshold": rho,
    }
    return CurveTable(columns=columns, rows=rows, metadata=meta)


def run_sweep(config: ExperimentConfig) -> CurveTable:
    """Asymptotic detection rate along a scalar axis (reflectivity or power)."""
    scen = config.scenario
    axis = config.sweep_axis
    if axis not in ("rcs_dbsm", "p_t_dbw"):
        raise ConfigError(f"sweep_axis must be rcs_dbsm or p_t_dbw, got {axis!r}")
    values = config.sweep_values
    if values is None:
        values = [float(v) for v in (np.arange(-20.0, 10.1, 2.0) if axis == "rcs_dbsm"
                                     else np.arange(-30.0, 0.1, 2.0))]
    nu = 2 * scen.m * scen.c
    rho = asymptotic_threshold(config.pfa, nu)
    columns = ["value_db"]
    for scheme in config.schemes:
        columns += [f"kappa_{scheme}", f"pd_{scheme}", f"feasible_{scheme}"]
    rows = []
    ch = build_channels(scen)
    base_designs = {}
    if axis == "rcs_dbsm":
        # designs do not depend on the reflectivity; compute each once
        for scheme in config.schemes:
            base_designs[scheme] = compute_design(
                scheme, ch, config.gamma_c, scen.p_t,
                n_candidates=config.n_candidates, rng=config.seed)
    for v in values:
        v = float(v)
        row = [v]
        for scheme in config.schemes:
            try:
                if axis == "rcs_dbsm":
                    res = base_designs[scheme]
                    kap = res.kappa_achieved * 10.0 ** (v / 10.0)
                else:
                    res = compute_design(scheme, ch, config.gamma_c,
                                         10.0 ** (v / 10.0),
                                         n_candidates=config.n_candidates,
                                         rng=config.seed)
                    kap = res.kappa_achieved * config.rcs_variance
            except Infeasible:
                row += [float("nan"), float("nan"), 0.0]
                continue
            row += [kap, asymptotic_pd(rho, nu, kap), 1.0]
        rows.append(row)
    meta = {
        "kind": "sweep",
        "run_id": config.run_id(),
        "version": _version,
        "config": config.as_dict(),
        "axis": axis,
        "asymptotic_threshold": rho,
    }
    return CurveTable(columns=columns, rows=rows, metadata=meta)


def run_contour(config: ExperimentConfig) -> CurveTable:
    """Detection rate over a grid of target-path and direct-path SNRs.

    Channel shapes are drawn once (unit Frobenius norm per matrix) and
    rescaled to each grid point, so the surface isolates the SNR effect.
    Reports the asymptotic rate, an empirical rate from equivalent-channel
    trials, and the known-waveform benchmark's asymptotic rate.
    """
    scen = config.scenario
    m, c, l, s2 = scen.m, scen.c, scen.block_length, scen.sigma_r2
    t_grid = config.snr_t_grid_db or [float(v) for v in np.arange(-30.0, 0.1, 5.0)]
    d_grid = config.snr_d_grid_db or [float(v) for v in np.arange(-20.0, 20.1, 5.0)]
    nu = 2 * m * c
    rho = asymptotic_threshold(config.pfa, nu)
    rng0 = np.random.default_rng(np.random.SeedSequence(config.seed, spawn_key=(0,)))
    shape_t = rng0.standard_normal((m, c)) + 1j * rng0.standard_normal((m, c))
    shape_d = rng0.standard_normal((m, c)) + 1j * rng0.standard_normal((m, c))
    shape_t /= np.linalg.norm(shape_t)
    shape_d /= np.linalg.norm(shape_d)
    rows = []
    for st_db in t_grid:
        for sd_db in d_grid:
            st = 10.0 ** (float(st_db) / 10.0)
            sd = 10.0 ** (float(sd_db) / 10.0)
            h_t = shape_t * np.sqrt(st * m * s2)
            h_d = shape_d * np.sqrt(sd * m * s2)
            kap = kappa_general(h_t, h_d, s2, l)
            pd_asy = asymptotic_pd(rho, nu, kap)
            pd_act = asymptotic_pd(rho, nu, kappa_active(st, m, l))
            hits = 0
            for t in range(config.n_trials):
                rng = trial_rng(config.seed, f"contour:{st_db:g}:{sd_db:g}", t)
                s = gen_symbols_gaussian(rng, c, l).data
                if _passive_trial_stat(h_t, h_d, s, s2, "h1", rng, c) > rho:
                    hits += 1
            rows.append([float(st_db), float(sd_db), kap, pd_asy,
                         hits / config.n_trials, pd_act])
    meta = {
        "kind": "contour",
        "run_id": config.run_id(),
        "version": _version,
        "config": config.as_dict(),
        "asymptotic_threshold": rho,
    }
    return CurveTable(
        columns=["snr_t_db", "snr_d_db", "kappa", "pd_asymptotic",
                 "pd_empirical", "pd_known_waveform"],
        rows=rows, metadata=meta)


def run_beampattern(config: ExperimentConfig) -> CurveTable:
    """Transmit power toward each bearing for every configured scheme."""
    scen = config.scenario
    ch = build_channels(scen)
    angles = config.angle_grid_deg or [float(v) for v in np.arange(-90.0, 90.5, 0.5)]
    spacing = scen.antenna_spacing or scen.carrier_wavelength / 2.0
    designs = {}
    patterns = {}
    for scheme in config.schemes:
        res = compute_design(scheme, ch, config.gamma_c, scen.p_t,
                             n_candidates=config.n_candidates, rng=config.seed)
        designs[scheme] = design_summary(res)
        pattern = []
        for deg in angles:
            a = steering_vector(np.deg2rad(float(deg)), scen.n_t, spacing,
                                scen.carrier_wavelength)
            pattern.append(float(np.real(a.conj() @ res.r_c @ a)))
        patterns[scheme] = pattern
    columns = ["angle_deg"] + [f"power_{s}_dbw" for s in config.schemes]
    rows = []
    for i, deg in enumerate(angles):
        row = [float(deg)]
        for scheme in config.schemes:
            row.append(10.0 * np.log10(max(patterns[scheme][i], 1e-300)))
        rows.append(row)
    meta = {
        "kind": "beampattern",
        "run_id": config.run_id(),
        "version": _version,
        "config": config.as_dict(),
        "designs": designs,
    }
    return CurveTable(columns=columns, rows=rows, metadata=meta)


def run_calibrate(config: ExperimentConfig) -> CurveTable:
    """Monte Carlo threshold calibration for each scheme at the config pfa."""
    scen = config.scenario
    ch = build_channels(scen)
    nu = 2 * scen.m * scen.c
    rho_asy = asymptotic_threshold(config.pfa, nu)
    rows = []
    thresholds = {}
    for scheme in config.schemes:
        res = compute_design(scheme, ch, config.gamma_c, scen.p_t,
                             n_candidates=config.n_candidates, rng=config.seed)
        h0_stat, _ = _scheme_samplers(scheme, ch, res, config)
        samples = np.array([h0_stat(trial_rng(config.seed, scheme + ":cal", t))
                            for t in range(config.n_calibration)])
        rho = threshold_from_samples(samples, config.pfa)
        thresholds[scheme] = Threshold(
            rho=rho, pfa_target=config.pfa, n_trials=config.n_calibration,
            method="monte_carlo", seed=config.seed).as_dict()
        rows.append([rho, rho_asy, float(np.mean(samples)), float(np.var(samples))])
    meta = {
        "kind": "calibrate",
        "run_id": config.run_id(),
        "version": _version,
        "config": config.as_dict(),
        "thresholds": thresholds,
        "schemes": list(config.schemes),
    }
    return CurveTable(
        columns=["rho_monte_carlo", "rho_asymptotic", "stat_mean", "stat_var"],
        rows=rows, metadata=meta)


def _heatmap_grid(scen: ScenarioConfig, extent, n_cells):
    """Cell centers with the true target position exactly on one center."""
    if extent is None:
        half = 50.0
        extent = [scen.target_position[0] - half, scen.target_position[0] + half,
                  scen.target_position[1] - half, scen.target_position[1] + half]
    x0, x1, y0, y1 = (float(v) for v in extent)
    if x1 <= x0 or y1 <= y0:
        raise ConfigError("grid extent must be [x0, x1, y0, y1] with x0 < x1, y0 < y1")
    xs = np.linspace(x0, x1, n_cells, endpoint=False) + (x1 - x0) / (2 * n_cells)
    ys = np.linspace(y0, y1, n_cells, endpoint=False) + (y1 - y0) / (2 * n_cells)
    tx, ty = scen.target_position
    xs += tx - xs[np.argmin(np.abs(xs - tx))]
    ys += ty - ys[np.argmin(np.abs(ys - ty))]
    return xs, ys


def _batched_map_stats(z_t_fft, z_d, delays, sample_rate, sigma_r2, c, block=256):
    """Per-cell detection statistics from precombined receiver rows.

    ``z_t_fft`` holds the FFT of each receiver's combined surveillance row,
    ``z_d`` the already-compensated reference rows. The scene is static, so
    per-cell compensation is a frequency-domain phase ramp (the zero-Doppler
    fast path of the path operator), batched over cells.
    """
    m, l = z_d.shape
    n_cells = delays.shape[1]
    gram_d = (z_d @ z_d.conj().T) / l / sigma_r2
    phi = np.sort(np.linalg.eigvalsh(gram_d))[::-1]
    zeta0 = min(int(np.sum(phi >= 1.0)), c, m)
    phi_term = float(np.sum(phi[:zeta0] - np.log(phi[:zeta0]))) if zeta0 else 0.0

    stats = np.empty(n_cells)
    k = np.arange(l)
    for lo in range(0, n_cells, block):
        hi = min(lo + block, n_cells)
        nb = hi - lo
        comp = np.empty((nb, m, l), dtype=complex)
        for i in range(m):
            # conj of the delay ramp k2 = exp(-2j pi tau fs/L k), per cell
            ramps = np.exp(2j * np.pi * np.outer(delays[i, lo:hi] * sample_rate / l, k))
            comp[:, i, :] = np.fft.ifft(z_t_fft[i][None, :] * ramps, axis=1)
        top = np.einsum("cil,cjl->cij", comp, comp.conj()) / l / sigma_r2
        cross = np.einsum("cil,jl->cij", comp, z_d.conj()) / l / sigma_r2
        gram = np.empty((nb, 2 * m, 2 * m), dtype=complex)
        gram[:, :m, :m] = top
        gram[:, :m, m:] = cross
        gram[:, m:, :m] = np.conj(np.swapaxes(cross, 1, 2))
        gram[:, m:, m:] = gram_d[None, :, :]
        psi = np.linalg.eigvalsh(gram)[:, ::-1]
        above = np.sum(psi >= 1.0, axis=1)
        eps0 = np.minimum(np.minimum(above, c), 2 * m)
        f = psi - np.log(np.clip(psi, 1e-300, None))
        csum = np.concatenate([np.zeros((nb, 1)), np.cumsum(f, axis=1)], axis=1)
        psi_term = np.take_along_axis(csum, eps0[:, None], axis=1)[:, 0]
        stats[lo:hi] = l * (psi_term - phi_term + (zeta0 - eps0))
    return stats


def run_heatmap(config: ExperimentConfig) -> CurveTable:
    """Spatial test-statistic map from the full front end with OFDM symbols.

    One statistic per grid cell and trial: target rows are compensated with
    the cell's hypothesized bistatic delays, reference rows with the known
    direct delays. Reports the per-cell statistic averaged over trials, and
    in the manifest the fraction of trials whose global maximum is the true
    target cell.
    """
    scen = config.scenario
    if scen.c != 1:
        raise ConfigError("heatmap runs use a single-stream scene (c == 1)")
    ch = build_channels(scen)
    res = compute_design(config.design, ch, config.gamma_c, scen.p_t,
                         n_candidates=config.n_candidates, rng=config.seed)
    ch = with_beamformer(ch, res.w)
    m, c = scen.m, scen.c
    xs, ys = _heatmap_grid(scen, config.grid_extent, config.grid_cells)
    gx, gy = np.meshgrid(xs, ys, indexing="ij")
    cells = np.stack([gx.ravel(), gy.ravel()], axis=1)
    n_cells = cells.shape[0]
    bs = np.asarray(scen.bs_position, dtype=float)
    delays = np.empty((m, n_cells))
    for i, sr in enumerate(scen.sr_positions):
        d1 = np.linalg.norm(cells - bs, axis=1)
        d2 = np.linalg.norm(cells - np.asarray(sr, dtype=float), axis=1)
        delays[i] = (d1 + d2) / SPEED_OF_LIGHT
    tx, ty = scen.target_position
    true_idx = int(np.argmin((cells[:, 0] - tx) ** 2 + (cells[:, 1] - ty) ** 2))

    acc = np.zeros(n_cells)
    true_top = 0
    trial_max = []
    l = None
    for t in range(config.n_trials):
        rng = trial_rng(config.seed, "heatmap", t)
        block = gen_symbols_ofdm(rng, config.n_subcarriers, config.subcarrier_spacing,
                                 config.n_frames)
        l = block.l
        raw = synth_received(ch, res.w, block, config.hypothesis, rng).per_sr_raw
        z_t = np.empty((m, l), dtype=complex)
        z_d = np.empty((m, l), dtype=complex)
        for i, (y_t, y_d) in enumerate(raw):
            z_t[i] = ch.q_t[i].conj() @ y_t
            z_d[i] = ch.q_d[i].conj() @ y_d
        for i in range(m):
            ramp = _phase_ramp(-ch.delays["direct"][i] * block.sample_rate / l, l)
            z_d[i] = np.fft.ifft(np.fft.fft(z_d[i]) * ramp.conj())
        z_t_fft = np.fft.fft(z_t, axis=1)
        stats = _batched_map_stats(z_t_fft, z_d, delays, block.sample_rate,
                                   scen.sigma_r2, c)
        acc += stats
        trial_max.append(float(np.max(stats)))
        if int(np.argmax(stats)) == true_idx:
            true_top += 1
    acc /= config.n_trials
    rows = [[float(cells[j, 0]), float(cells[j, 1]), float(acc[j])]
            for j in range(n_cells)]
    meta = {
        "kind": "heatmap",
        "run_id": config.run_id(),
        "version": _version,
        "config": config.as_dict(),
        "design": design_summary(res),
        "true_cell": [float(cells[true_idx, 0]), float(cells[true_idx, 1])],
        "true_cell_top_fraction": true_top / config.n_trials,
        "trial_max_statistic": trial_max,
        "block_length": l,
    }
    return CurveTable(columns=["x_m", "y_m", "mean_statistic"], rows=rows, metadata=meta)


RUNNERS = {
    "roc": run_roc,
    "tradeoff": run_tradeoff,
    "sweep": run_sweep,
    "contour": run_contour,
    "beampattern": run_beampattern,
    "calibrate": run_calibrate,
    "heatmap": run_heatmap,
}


def run_experiment(config: ExperimentConfig) -> tuple:
    """Dispatch on config.kind, write CSV + manifest, return (table, paths)."""
    if config.kind not in RUNNERS:
        raise ConfigError(f"unknown experiment kind {config.kind!r}")
    table = RUNNERS[config.kind](config)
    out_dir = Path(config.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    csv_path = out_dir / f"{config.prefix}_{config.kind}.csv"
    man_path = out_dir / f"{config.prefix}_{config.kind}_manifest.json"
    table.to_csv(csv_path)
    table.write_manifest(man_path)
    return table, (csv_path, man_path)
