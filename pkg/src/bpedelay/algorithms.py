"""Round-based pure exploration with delay-padded rounds, plus UCB baselines.

All policies act on a :class:`DelayedEnvironment` with known domain points.
Ties are always broken towards the lowest grid index.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from . import confidence as conf
from .confidence import ConfidenceParams, DelayParams
from .environment import DelayedEnvironment, RoundRecord, RunTrace
from .kernels import KernelSpec
from .posterior import Predictor, VarianceTracker, fit

ALGORITHMS = ("bpe_delay", "bpe", "gp_ucb_delayed", "gp_ucb_sdf")


@dataclass(frozen=True)
class RoundSchedule:
    q: tuple
    t: tuple
    u: float

    @property
    def R(self) -> int:
        return len(self.t)


def _ceil_sqrt(n: int) -> int:
    return math.isqrt(n - 1) + 1 if n > 0 else 0


def build_schedule(T: int, u: float = 0.0) -> RoundSchedule:
    """q_r = ceil(sqrt(T q_{r-1})) from q_0 = 1, t_r = ceil(q_r + u); the last round is cut to hit T."""
    if T < 1:
        raise ValueError(f"T must be >= 1, got {T}")
    if u < 0:
        raise ValueError(f"u must be >= 0, got {u}")
    qs, ts = [], []
    q_prev, used = 1, 0
    while used < T:
        q = _ceil_sqrt(T * q_prev)
        t = min(math.ceil(q + u), T - used)
        qs.append(q)
        ts.append(t)
        used += t
        q_prev = q
    return RoundSchedule(tuple(qs), tuple(ts), float(u))


@dataclass(frozen=True)
class AlgoParams:
    """Learner-side constants.

    ``lam`` defaults to ``sigma``. ``delay`` holds the declared delay constants
    (None means the learner is told there is no delay). ``u`` forces the round
    padding, bypassing the delay constants.
    """

    kernel: KernelSpec
    T: int
    C_k: float = 1.0
    sigma: float = 0.02
    delta: float = 0.1
    lam: float | None = None
    delay: DelayParams | None = None
    mode: str = "finite"
    disc_c: float = 1.0
    psi_combine: str = "min"
    u: float | None = None

    def __post_init__(self):
        if self.T < 1:
            raise ValueError(f"T must be >= 1, got {self.T}")
        if self.mode not in ("finite", "continuous"):
            raise ValueError(f"mode must be 'finite' or 'continuous', got {self.mode!r}")

    @property
    def reg(self) -> float:
        return self.sigma if self.lam is None else self.lam

    def padding(self) -> float:
        if self.u is not None:
            return float(self.u)
        return conf.u_T(self.T, self.delta, self.delay, self.psi_combine)

    def confidence(self, domain) -> ConfidenceParams:
        return ConfidenceParams(
            C_k=self.C_k,
            sigma=self.sigma,
            lam=self.reg,
            delta=self.delta,
            domain_card=len(domain),
            d=self.kernel.input_dim,
            disc_c=self.disc_c,
            k_max=self.kernel.k_max(domain),
        )


def acquire_round(tracker: VarianceTracker, n_picks: int) -> tuple[np.ndarray, np.ndarray]:
    """Pick ``n_picks`` candidates by repeated maximum posterior variance.

    The tracker must carry the round's candidate set and is extended in place
    with each pick. Returns candidate positions and the variance each had when
    picked.
    """
    cands = tracker.candidates
    if cands is None or len(cands) == 0:
        raise ValueError("acquisition needs a non-empty candidate set")
    picks = np.empty(n_picks, dtype=np.int64)
    pick_var = np.empty(n_picks)
    for k in range(n_picks):
        v = tracker.candidate_variance()
        j = int(np.argmax(v))
        picks[k], pick_var[k] = j, v[j]
        tracker.add_point(cands[j])
    return picks, pick_var


def eliminate(lower: np.ndarray, upper: np.ndarray) -> np.ndarray:
    """Boolean mask of candidates whose upper bound reaches the best lower bound."""
    return upper >= lower.max()


def close_round(pred: Predictor, width: float, mode: str = "finite", q: int | None = None) -> tuple[np.ndarray, float]:
    """Survivor mask from the arrived-data predictor over the round's candidates."""
    mu = pred.candidate_mean()
    sd = np.sqrt(pred.candidate_variance())
    if mode == "finite":
        lo, up = conf.interval_finite(mu, sd, width)
    else:
        lo, up = conf.interval_continuous(mu, sd, width, q)
    return eliminate(lo, up), float(sd.max())


def _round_gain(tracker: VarianceTracker, n: int) -> float:
    # 0.5 log det(I + K/lam^2) over the first n inputs, from the factor diagonal
    diag = np.diag(tracker._L[:n, :n])
    return float(np.sum(np.log(diag)) - n * math.log(tracker.lam))


def run_bpe_delay(env: DelayedEnvironment, params: AlgoParams, name: str = "bpe_delay") -> RunTrace:
    """Batch pure exploration with rounds padded by the delay bound u_T(delta)."""
    X = env.domain
    if X is None:
        raise ValueError("environment needs domain points")
    kernel, lam = params.kernel, params.reg
    sched = build_schedule(params.T, params.padding())
    cp = params.confidence(X)
    if params.mode == "finite":
        width = conf.beta_finite(cp, sched.R)
    else:
        cp_round = conf.with_delta(cp, params.delta / (4.0 * sched.R))
    c1 = 2.0 / math.log1p(1.0 / lam**2)

    cand = np.arange(len(X))
    rounds, ks, records = [], [], []
    for r, (q_r, t_r) in enumerate(zip(sched.q, sched.t), start=1):
        start = env.t + 1
        tracker = VarianceTracker(kernel, lam, candidates=X[cand])
        n_first = min(q_r, t_r)
        picks, pick_var = acquire_round(tracker, n_first)
        var_q = tracker.candidate_variance().copy()
        if t_r > n_first:
            more, more_var = acquire_round(tracker, t_r - n_first)
            picks = np.concatenate([picks, more])
            pick_var = np.concatenate([pick_var, more_var])
        for k, j in enumerate(picks, start=1):
            env.query(cand[j])
            rounds.append(r)
            ks.append(k)

        var_sum = float(pick_var[:n_first].sum())
        gain_q = _round_gain(tracker, n_first)
        arrived = [p for p in env.collect_records() if p.issue_time >= start]
        if params.mode == "finite":
            beta_r = width
        else:
            beta_r = conf.beta_prime(cp_round, q_r)
        shrink_ok = None
        if arrived:
            pred = fit(
                kernel,
                lam,
                X[[p.point_index for p in arrived]],
                [p.value for p in arrived],
                candidates=X[cand],
            )
            keep, max_sd = close_round(pred, beta_r, params.mode, q_r)
            first_q = {start + i for i in range(n_first)}
            if first_q <= {p.issue_time for p in arrived}:
                shrink_ok = bool(np.all(pred.candidate_variance() <= var_q + 1e-10))
        else:
            keep = np.ones(len(cand), dtype=bool)
            max_sd = math.sqrt(kernel.k_max(X[cand]))
        records.append(
            RoundRecord(
                r=r,
                q=q_r,
                length=t_r,
                n_candidates=len(cand),
                n_arrived=len(arrived),
                beta=float(beta_r),
                max_sd=max_sd,
                var_sum=var_sum,
                gain_q=gain_q,
                var_sum_ok=bool(var_sum <= c1 * gain_q * (1 + 1e-12) + 1e-12),
                shrink_ok=shrink_ok,
                survivors=cand[keep].copy(),
            )
        )
        cand = cand[keep]

    trace = env.regret_trace(name)
    trace.round = np.asarray(rounds, dtype=np.int64)
    trace.k = np.asarray(ks, dtype=np.int64)
    trace.rounds = records
    return trace


def run_bpe(env: DelayedEnvironment, params: AlgoParams) -> RunTrace:
    """The same machinery with no delay padding (u = 0)."""
    return run_bpe_delay(env, replace(params, u=0.0), name="bpe")


def ucb_width(params: AlgoParams, n_points: int) -> float:
    """beta at delta / (T |X|): a union over steps and domain points."""
    cp = ConfidenceParams(C_k=params.C_k, sigma=params.sigma, lam=params.reg, delta=params.delta)
    return conf._width(cp, math.log(params.T * n_points / params.delta))


def _ucb_pick(pred: Predictor, width: float) -> int:
    score = pred.candidate_mean() + width * np.sqrt(pred.candidate_variance())
    return int(np.argmax(score))


def run_gp_ucb_delayed(env: DelayedEnvironment, params: AlgoParams) -> RunTrace:
    """GP-UCB using only the feedback that has arrived so far."""
    X = env.domain
    if X is None:
        raise ValueError("environment needs domain points")
    width = ucb_width(params, len(X))
    pred = Predictor(VarianceTracker(params.kernel, params.reg, candidates=X))
    for _ in range(params.T):
        for p in env.collect_records():
            pred.add_observation(X[p.point_index], p.value)
        env.query(_ucb_pick(pred, width))
    return env.regret_trace("gp_ucb_delayed")


def run_gp_ucb_sdf(env: DelayedEnvironment, params: AlgoParams, f_min: float) -> RunTrace:
    """GP-UCB over every selected point, with outstanding feedback set to ``f_min``."""
    X = env.domain
    if X is None:
        raise ValueError("environment needs domain points")
    if f_min > float(env.truth.min()):
        raise ValueError(f"f_min={f_min} exceeds the true minimum {float(env.truth.min())}")
    width = ucb_width(params, len(X))
    pred = Predictor(VarianceTracker(params.kernel, params.reg, candidates=X))
    for _ in range(params.T):
        for p in env.collect_records():
            # row i of the predictor holds the query issued at step i + 1
            pred.set_value(p.issue_time - 1, p.value)
        j = _ucb_pick(pred, width)
        env.query(j)
        pred.add_observation(X[j], f_min)
    return env.regret_trace("gp_ucb_sdf")


def run_algorithm(name: str, env: DelayedEnvironment, params: AlgoParams, f_min: float | None = None) -> RunTrace:
    if name == "bpe_delay":
        return run_bpe_delay(env, params)
    if name == "bpe":
        return run_bpe(env, params)
    if name == "gp_ucb_delayed":
        return run_gp_ucb_delayed(env, params)
    if name == "gp_ucb_sdf":
        if f_min is None:
            f_min = float(env.truth.min())
        return run_gp_ucb_sdf(env, params, f_min)
    raise ValueError(f"unknown algorithm {name!r}; expected one of {ALGORITHMS}")
