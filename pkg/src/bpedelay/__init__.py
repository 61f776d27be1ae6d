"""Kernel bandit optimisation under stochastically delayed feedback."""

from .algorithms import (
    ALGORITHMS,
    AlgoParams,
    RoundSchedule,
    acquire_round,
    build_schedule,
    close_round,
    run_algorithm,
    run_bpe,
    run_bpe_delay,
    run_gp_ucb_delayed,
    run_gp_ucb_sdf,
)
from .confidence import (
    ConfidenceParams,
    DelayParams,
    beta,
    beta_finite,
    beta_prime,
    interval_continuous,
    interval_finite,
    psi,
    u_T,
)
from .diagnostics import InfoReport, audit_delays, info_gain
from .environment import DelayedEnvironment, DelayModel, RoundRecord, RunTrace
from .kernels import KernelSpec, cross, evaluate, gram
from .posterior import Predictor, VarianceTracker, fit
from .synth import GridDomain, SynthFunction, function_stats, generate_function, make_grid

__version__ = "0.1.0"
