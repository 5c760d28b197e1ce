"""Passive target detection and transmit design for multi-static ISAC links."""

__version__ = "0.1.0"

from .asymptotics import (
    AsymptoticPerf,
    asymptotic_pd,
    asymptotic_perf,
    asymptotic_pfa,
    asymptotic_threshold,
    gamma_tail_regularized,
    kappa_active,
    kappa_eigform,
    kappa_general,
    kappa_single_cu,
    marcum_q,
    snr_d,
    snr_t,
)
from .beamform import (
    BeamformerResult,
    comm_only,
    eval_sinr,
    gaussian_randomization,
    kappa_from_covariance,
    optimize_active,
    optimize_max_pd,
    optimize_snrd_threshold,
    quadratic_surrogate,
    quadratic_transform_u,
    snr_d_from_covariance,
    sweep_gamma_d,
)
from .detector import (
    GlrtResult,
    Threshold,
    active_statistic,
    calibrate_threshold,
    decide,
    glrt_statistic,
    threshold_from_samples,
)
from .errors import (
    ConfigError,
    DegenerateGeometry,
    DimensionMismatch,
    IllConditioned,
    Infeasible,
    InsufficientTrials,
    MaxIterations,
    NonConvergence,
    NumericalFailure,
    PassiveIsacError,
    RandomizationFailure,
    SingularGram,
)
from .harness import (
    SCALES,
    SCHEMES,
    CurveTable,
    ExperimentConfig,
    compute_design,
    load_config,
    run_beampattern,
    run_calibrate,
    run_contour,
    run_experiment,
    run_heatmap,
    run_roc,
    run_sweep,
    run_tradeoff,
    trial_rng,
)
from .scenario import (
    ChannelSet,
    ScenarioConfig,
    bearing,
    build_channels,
    path_loss,
    receive_beamformers,
    rescale_reflectivity,
    steering_vector,
    synth_comm_channels,
    with_beamformer,
)
from .sdp import SdpConstraint, SdpProblem, SdpSolution, solve_sdp
from .validate import ALL_CHECKS, format_record, run_validate
from .waveform import (
    DelayDopplerOp,
    Observation,
    SymbolBlock,
    delay_doppler_operator,
    frontend_process,
    gen_symbols_gaussian,
    gen_symbols_ofdm,
    ofdm_demodulate,
    synth_equivalent,
    synth_equivalent_from_matrices,
    synth_received,
)

__all__ = [
    "ALL_CHECKS",
    "AsymptoticPerf",
    "BeamformerResult",
    "ChannelSet",
    "ConfigError",
    "CurveTable",
    "DegenerateGeometry",
    "DelayDopplerOp",
    "DimensionMismatch",
    "ExperimentConfig",
    "GlrtResult",
    "IllConditioned",
    "Infeasible",
    "InsufficientTrials",
    "MaxIterations",
    "NonConvergence",
    "NumericalFailure",
    "Observation",
    "PassiveIsacError",
    "RandomizationFailure",
    "SCALES",
    "SCHEMES",
    "ScenarioConfig",
    "SdpConstraint",
    "SdpProblem",
    "SdpSolution",
    "SingularGram",
    "SymbolBlock",
    "Threshold",
    "active_statistic",
    "asymptotic_pd",
    "asymptotic_perf",
    "asymptotic_pfa",
    "asymptotic_threshold",
    "bearing",
    "build_channels",
    "calibrate_threshold",
    "comm_only",
    "compute_design",
    "decide",
    "delay_doppler_operator",
    "eval_sinr",
    "format_record",
    "frontend_process",
    "gamma_tail_regularized",
    "gaussian_randomization",
    "gen_symbols_gaussian",
    "gen_symbols_ofdm",
    "glrt_statistic",
    "kappa_active",
    "kappa_eigform",
    "kappa_from_covariance",
    "kappa_general",
    "kappa_single_cu",
    "load_config",
    "marcum_q",
    "ofdm_demodulate",
    "optimize_active",
    "optimize_max_pd",
    "optimize_snrd_threshold",
    "path_loss",
    "quadratic_surrogate",
    "quadratic_transform_u",
    "receive_beamformers",
    "rescale_reflectivity",
    "run_beampattern",
    "run_calibrate",
    "run_contour",
    "run_experiment",
    "run_heatmap",
    "run_roc",
    "run_sweep",
    "run_tradeoff",
    "run_validate",
    "snr_d",
    "snr_d_from_covariance",
    "snr_t",
    "steering_vector",
    "solve_sdp",
    "sweep_gamma_d",
    "synth_comm_channels",
    "synth_equivalent",
    "synth_equivalent_from_matrices",
    "synth_received",
    "threshold_from_samples",
    "trial_rng",
    "with_beamformer",
]
