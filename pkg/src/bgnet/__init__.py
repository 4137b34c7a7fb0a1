"""Bayesian Gaussian graphical models with adaptive shrinkage priors.

Block Gibbs samplers for precision matrices under three continuous
shrinkage priors (adaptive elastic net, adaptive lasso, ridge type),
plus threshold-based structure recovery, differential networks between
two cohorts, chain diagnostics, and a replicated synthetic benchmark.
"""

from .bench import (
    BenchmarkReport,
    ClassificationReport,
    LossReport,
    ModelSpec,
    classification_report,
    generate_model,
    loss_report,
    run_benchmark,
    simulate_data,
)
from .diagnostics import MixingReport, chain_mixing_report, inefficiency_factor
from .diffnet import DifferentialNetwork, differential_network, estimate_component
from .errors import (
    BgnetError,
    InputFormatError,
    NotPositiveDefiniteError,
    NumericalDegeneracyError,
)
from .matrices import partial_correlations
from .rng import RNG_ALGORITHM, RngStream
from .samplers import (
    BaePrior,
    BaglPrior,
    BagrPrior,
    ChainConfig,
    PosteriorSummary,
    SamplerState,
    gibbs_sweep_bae,
    gibbs_sweep_bagl,
    gibbs_sweep_bagr,
    init_state,
    prior_from_name,
    run_chain,
    scatter_matrix,
    update_adaptive_bae,
    update_adaptive_bagl,
    update_adaptive_bagr,
)
from .structure import ThresholdSweepResult, calibrate_psi, threshold_edges, wang_rule
from .trace import ChainTrace, load_trace, save_trace

__version__ = "0.1.0"

__all__ = [
    "BaePrior",
    "BaglPrior",
    "BagrPrior",
    "BenchmarkReport",
    "BgnetError",
    "ChainConfig",
    "ChainTrace",
    "ClassificationReport",
    "DifferentialNetwork",
    "InputFormatError",
    "LossReport",
    "MixingReport",
    "ModelSpec",
    "NotPositiveDefiniteError",
    "NumericalDegeneracyError",
    "PosteriorSummary",
    "RNG_ALGORITHM",
    "RngStream",
    "SamplerState",
    "ThresholdSweepResult",
    "calibrate_psi",
    "chain_mixing_report",
    "classification_report",
    "differential_network",
    "estimate_component",
    "generate_model",
    "gibbs_sweep_bae",
    "gibbs_sweep_bagl",
    "gibbs_sweep_bagr",
    "inefficiency_factor",
    "init_state",
    "load_trace",
    "loss_report",
    "partial_correlations",
    "prior_from_name",
    "run_benchmark",
    "run_chain",
    "save_trace",
    "scatter_matrix",
    "simulate_data",
    "threshold_edges",
    "update_adaptive_bae",
    "update_adaptive_bagl",
    "update_adaptive_bagr",
    "wang_rule",
]
