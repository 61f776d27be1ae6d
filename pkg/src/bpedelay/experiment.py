"""Multi-trial orchestration and aggregation of regret curves."""

from __future__ import annotations

import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .algorithms import AlgoParams, run_algorithm
from .config import ExperimentConfig
from .environment import DelayedEnvironment, RunTrace
from .synth import generate_function, import_csv, make_grid

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class Problem:
    """The shared objective of one suite: domain points, values and the RKHS-norm bound."""

    points: np.ndarray
    values: np.ndarray
    C_k: float


@dataclass
class AggregateCurve:
    mean: np.ndarray
    half_std: np.ndarray
    n_trials: int

    @property
    def t(self) -> np.ndarray:
        return np.arange(1, len(self.mean) + 1)


@dataclass
class SuiteResult:
    config: ExperimentConfig
    problem: Problem
    traces: dict = field(default_factory=dict)
    curves: dict = field(default_factory=dict)


def build_problem(cfg: ExperimentConfig) -> Problem:
    if cfg.function_file is not None:
        pts, vals = import_csv(cfg.function_file)
        if pts.shape[1] != cfg.kernel.input_dim:
            raise ValueError(f"function file has dimension {pts.shape[1]}, kernel expects {cfg.kernel.input_dim}")
        return Problem(pts, vals, float(cfg.C_k))
    grid = make_grid(cfg.kernel.input_dim, cfg.grid_size, cfg.bounds)
    f = generate_function(cfg.kernel, grid, cfg.anchors, cfg.weight_sigma, cfg.fn_seed, cfg.target_range)
    C_k = f.rkhs_norm if cfg.C_k is None else cfg.C_k
    return Problem(np.asarray(grid.points), np.asarray(f.values), float(C_k))


def algo_params(cfg: ExperimentConfig, problem: Problem) -> AlgoParams:
    return AlgoParams(
        kernel=cfg.kernel,
        T=cfg.T,
        C_k=problem.C_k,
        sigma=cfg.learner_sigma,
        delta=cfg.delta,
        lam=cfg.lam,
        delay=cfg.delay.params(),
        mode=cfg.mode,
        disc_c=cfg.disc_c,
        psi_combine=cfg.psi_combine,
    )


def make_env(cfg: ExperimentConfig, problem: Problem, trial: int) -> DelayedEnvironment:
    return DelayedEnvironment(problem.values, cfg.noise_sigma, cfg.delay, cfg.trial_seed(trial), problem.points)


def run_trial(cfg: ExperimentConfig, problem: Problem, algorithm: str, trial: int) -> RunTrace:
    env = make_env(cfg, problem, trial)
    return run_algorithm(algorithm, env, algo_params(cfg, problem))


def _job(args):
    return run_trial(*args)


def aggregate(traces: list[RunTrace]) -> AggregateCurve:
    """Mean cumulative regret and half the sample standard deviation across trials."""
    if not traces:
        return AggregateCurve(np.zeros(0), np.zeros(0), 0)
    cum = np.vstack([tr.cum_regret for tr in traces])
    sd = cum.std(axis=0, ddof=1) if len(traces) > 1 else np.zeros(cum.shape[1])
    return AggregateCurve(cum.mean(axis=0), 0.5 * sd, len(traces))


def run_suite(cfg: ExperimentConfig, problem: Problem | None = None) -> SuiteResult:
    """Run every (algorithm, trial) pair on one shared objective.

    Trial i of every algorithm uses seed ``cfg.seed + i``, so noise and delay
    draws are paired across algorithms step by step.
    """
    problem = build_problem(cfg) if problem is None else problem
    jobs = [(cfg, problem, a, i) for a in cfg.algorithms for i in range(cfg.trials)]
    if cfg.parallelism > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=cfg.parallelism) as pool:
            out = list(pool.map(_job, jobs))
    else:
        out = []
        for job in jobs:
            log.info("running %s trial %d", job[2], job[3])
            out.append(_job(job))
    res = SuiteResult(cfg, problem)
    for (_, _, a, _), tr in zip(jobs, out):
        res.traces.setdefault(a, []).append(tr)
    for a, trs in res.traces.items():
        res.curves[a] = aggregate(trs)
    return res
