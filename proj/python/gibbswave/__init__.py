"""Spectral sampler and flow for the radial nonlinear wave equation on the
unit ball: Gaussian/Gibbs coefficient ensembles, the smoothed split-step
flow, and the Monte Carlo statistics used to probe measure invariance,
tail exponents, and norm growth."""

from ._core import (  # noqa: F401
    Config,
    ConfigError,
    GaussianStream,
    GibbsSpec,
    KSResult,
    NumericalError,
    RadialQuadrature,
    SimParams,
    TailFit,
    __version__,
    build_basis,
    eigenfunction,
    evolve,
    flow_step,
    free_evolve,
    gibbs_weight,
    hamiltonian,
    ks_two_sample,
    lp_norm_ball,
    make_sim_params,
    moment_growth,
    partition_estimate,
    picard_duhamel,
    run_command,
    sample_gaussian,
    sample_gibbs,
    sobolev_norm,
    spacetime_lp_norm,
    strichartz_ratio,
    tail_fit,
)
