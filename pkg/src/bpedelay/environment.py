"""Delayed-feedback simulator over a finite domain.

Noise and delays come from two independent seeded substreams indexed by the
time step, so two policies run with the same seed see the same epsilon_t and
tau_t at every step t regardless of which points they query.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from .confidence import DelayParams

DELAY_FAMILIES = ("none", "constant", "poisson", "geometric")

# sub-exponential constants used with Poisson(50) delays in the reference experiments
_POISSON50_XI_B = (9.0, 1.0)


@dataclass(frozen=True)
class DelayModel:
    """An i.i.d. integer delay law plus its declared sub-exponential constants.

    ``param`` is tau0 for ``constant``, the rate for ``poisson`` and the success
    probability for ``geometric`` (support {0, 1, ...}). A Poisson rate of 0 is
    normalised to ``none``.
    """

    family: str = "none"
    param: float = 0.0
    xi: float | None = None
    b: float | None = None
    mean_delay: float | None = None

    def __post_init__(self):
        fam = str(self.family).lower()
        if fam not in DELAY_FAMILIES:
            raise ValueError(f"unknown delay family {self.family!r}; expected one of {DELAY_FAMILIES}")
        if fam == "poisson" and self.param == 0:
            fam = "none"
        object.__setattr__(self, "family", fam)
        p = float(self.param)
        if fam == "constant" and (p < 0 or p != int(p)):
            raise ValueError(f"constant delay must be a non-negative integer, got {self.param}")
        if fam == "poisson" and not p > 0:
            raise ValueError(f"poisson rate must be positive, got {self.param}")
        if fam == "geometric" and not 0 < p < 1:
            raise ValueError(f"geometric p must lie in (0, 1), got {self.param}")
        if self.mean_delay is not None and not np.isclose(self.mean_delay, self.analytic_mean, rtol=1e-12, atol=1e-12):
            raise ValueError(
                f"declared mean delay {self.mean_delay} does not match the {fam} law's mean {self.analytic_mean}"
            )

    @property
    def analytic_mean(self) -> float:
        p = float(self.param)
        if self.family == "constant":
            return p
        if self.family == "poisson":
            return p
        if self.family == "geometric":
            return (1.0 - p) / p
        return 0.0

    @property
    def is_delay_free(self) -> bool:
        return self.family == "none" or (self.family == "constant" and self.param == 0)

    def params(self) -> DelayParams | None:
        """Declared (xi, b, E[tau]); None for the delay-free law."""
        if self.is_delay_free:
            return None
        xi, b = self.xi, self.b
        if xi is None or b is None:
            if self.family == "poisson" and self.param == 50:
                xi, b = _POISSON50_XI_B
            elif self.family == "constant":
                # a constant is sub-exponential for any positive constants
                xi, b = 1.0, 1.0
            else:
                raise ValueError(f"delay family {self.family}({self.param}) needs explicit xi and b")
        return DelayParams(xi=float(xi), b=float(b), mean_delay=self.analytic_mean)

    def sample(self, rng: np.random.Generator, size: int) -> np.ndarray:
        if self.family == "none":
            return np.zeros(size, dtype=np.int64)
        if self.family == "constant":
            return np.full(size, int(self.param), dtype=np.int64)
        if self.family == "poisson":
            return rng.poisson(self.param, size).astype(np.int64)
        return rng.geometric(self.param, size).astype(np.int64) - 1


class Pending(NamedTuple):
    issue_time: int
    arrival_time: int
    point_index: int
    value: float


class _StepStream:
    """Per-step draws from a generator, materialised in fixed-size blocks."""

    BLOCK = 4096

    def __init__(self, rng: np.random.Generator, draw):
        self._rng = rng
        self._draw = draw
        self._buf = np.zeros(0)

    def __getitem__(self, t: int):
        # steps are 1-based
        while t > len(self._buf):
            self._buf = np.concatenate([self._buf, self._draw(self._rng, self.BLOCK)])
        return self._buf[t - 1]


@dataclass
class RoundRecord:
    """Summary of one elimination round."""

    r: int
    q: int
    length: int
    n_candidates: int
    n_arrived: int
    beta: float
    max_sd: float
    var_sum: float
    gain_q: float
    var_sum_ok: bool
    shrink_ok: bool | None
    survivors: np.ndarray


@dataclass
class RunTrace:
    """Per-step record of one run.

    ``arrival[t-1]`` is the step at which the feedback for step t arrives; it
    may exceed the horizon. ``round`` is 0 for policies without rounds.
    """

    algorithm: str
    chosen: np.ndarray
    inst_regret: np.ndarray
    arrival: np.ndarray
    round: np.ndarray
    k: np.ndarray
    x_star: int
    rounds: list[RoundRecord] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.chosen)

    @property
    def t(self) -> np.ndarray:
        return np.arange(1, len(self.chosen) + 1)

    @property
    def cum_regret(self) -> np.ndarray:
        return np.cumsum(self.inst_regret)

    @property
    def delays(self) -> np.ndarray:
        return self.arrival - self.t

    @property
    def final_regret(self) -> float:
        return float(self.inst_regret.sum())


class DelayedEnvironment:
    """Objective on a finite domain with Gaussian noise and stochastic delays.

    Parameters
    ----------
    truth : array_like
        Objective values, one per domain point.
    noise_sigma : float
        Standard deviation of the Gaussian observation noise.
    delay : DelayModel
    seed : int
    domain : array_like, optional
        Point coordinates aligned with ``truth``.
    """

    def __init__(self, truth, noise_sigma: float, delay: DelayModel | None = None, seed: int = 0, domain=None):
        self.truth = np.asarray(truth, dtype=float).copy()
        self.truth.setflags(write=False)
        if self.truth.ndim != 1 or self.truth.size == 0:
            raise ValueError("truth must be a non-empty vector")
        if noise_sigma < 0:
            raise ValueError(f"noise_sigma must be >= 0, got {noise_sigma}")
        self.noise_sigma = float(noise_sigma)
        self.delay = delay if delay is not None else DelayModel()
        self.seed = int(seed)
        self.domain = None if domain is None else np.asarray(domain, dtype=float)
        if self.domain is not None and len(self.domain) != len(self.truth):
            raise ValueError("domain and truth lengths differ")
        self.x_star = int(np.argmax(self.truth))
        self.f_star = float(self.truth[self.x_star])
        noise_ss, delay_ss = np.random.SeedSequence(self.seed).spawn(2)
        sig = self.noise_sigma
        self._noise = _StepStream(np.random.default_rng(noise_ss), lambda g, n: sig * g.standard_normal(n))
        self._delays = _StepStream(np.random.default_rng(delay_ss), self.delay.sample)
        self.t = 0
        self._queue: list[tuple[int, int, Pending]] = []
        self._chosen: list[int] = []
        self._arrival: list[int] = []

    def __len__(self) -> int:
        return len(self.truth)

    def query(self, point_index: int) -> None:
        """Advance the clock by one step and issue a query at ``point_index``."""
        i = int(point_index)
        if not 0 <= i < len(self.truth):
            raise ValueError(f"point index {point_index} outside [0, {len(self.truth)})")
        self.t += 1
        t = self.t
        y = self.truth[i] + float(self._noise[t])
        arrive = t + int(self._delays[t])
        heapq.heappush(self._queue, (arrive, t, Pending(t, arrive, i, y)))
        self._chosen.append(i)
        self._arrival.append(arrive)

    def collect_records(self) -> list[Pending]:
        """Remove and return every pending record with arrival_time <= t, in issue order."""
        out = []
        while self._queue and self._queue[0][0] <= self.t:
            out.append(heapq.heappop(self._queue)[2])
        out.sort(key=lambda p: p.issue_time)
        return out

    def collect(self) -> list[tuple[int, float]]:
        return [(p.point_index, p.value) for p in self.collect_records()]

    @property
    def pending(self) -> int:
        return len(self._queue)

    def regret_trace(self, algorithm: str = "") -> RunTrace:
        chosen = np.array(self._chosen, dtype=np.int64)
        n = len(chosen)
        return RunTrace(
            algorithm=algorithm,
            chosen=chosen,
            inst_regret=self.f_star - self.truth[chosen] if n else np.zeros(0),
            arrival=np.array(self._arrival, dtype=np.int64),
            round=np.zeros(n, dtype=np.int64),
            k=np.zeros(n, dtype=np.int64),
            x_star=self.x_star,
        )
