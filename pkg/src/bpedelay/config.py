"""Experiment configuration: INI sections parsed into a frozen dataclass.

Example::

    [experiment]
    algorithms = bpe_delay, gp_ucb_sdf
    T = 2000
    trials = 10
    delta = 0.1
    seed = 0

    [kernel]
    family = se
    lengthscale = 0.8

    [grid]
    d = 2
    grid_size = 50
    bounds = 0, 5

    [noise]
    noise_sigma = 0.02

    [delay]
    family = poisson
    param = 50
    xi = 9
    b = 1

See ``configs/reference.ini`` for every key.
"""

from __future__ import annotations

import configparser
from dataclasses import dataclass, field, replace
from pathlib import Path

from .algorithms import ALGORITHMS
from .environment import DELAY_FAMILIES, DelayModel
from .kernels import KernelSpec


class ConfigError(ValueError):
    """Invalid or missing configuration value."""


@dataclass(frozen=True)
class ExperimentConfig:
    algorithms: tuple = ("bpe_delay",)
    T: int = 2000
    trials: int = 10
    delta: float = 0.1
    seed: int = 0
    parallelism: int = 1
    out: str = "results"

    kernel: KernelSpec = field(default_factory=lambda: KernelSpec("se", 0.8, input_dim=2))
    grid_size: int = 50
    bounds: tuple = (0.0, 5.0)

    anchors: int = 100
    weight_sigma: float = 1.0
    target_range: float | None = 1.5
    function_seed: int | None = None
    function_file: str | None = None

    noise_sigma: float = 0.02
    delay: DelayModel = field(default_factory=DelayModel)

    lam: float | None = None
    sigma: float | None = None
    C_k: float | None = None
    disc_c: float = 1.0
    mode: str = "finite"
    psi_combine: str = "min"

    def __post_init__(self):
        if self.T < 1:
            raise ConfigError(f"[experiment] T: must be >= 1, got {self.T}")
        if self.trials < 1:
            raise ConfigError(f"[experiment] trials: must be >= 1, got {self.trials}")
        if not 0 < self.delta < 1:
            raise ConfigError(f"[experiment] delta: must lie in (0, 1), got {self.delta}")
        if self.parallelism < 1:
            raise ConfigError(f"[experiment] parallelism: must be >= 1, got {self.parallelism}")
        if not self.algorithms:
            raise ConfigError("[experiment] algorithms: at least one algorithm required")
        for a in self.algorithms:
            if a not in ALGORITHMS:
                raise ConfigError(f"[experiment] algorithms: unknown {a!r}; expected one of {', '.join(ALGORITHMS)}")
        if self.grid_size < 1:
            raise ConfigError(f"[grid] grid_size: must be >= 1, got {self.grid_size}")
        if self.anchors < 1:
            raise ConfigError(f"[function] anchors: must be >= 1, got {self.anchors}")
        if self.noise_sigma < 0:
            raise ConfigError(f"[noise] noise_sigma: must be >= 0, got {self.noise_sigma}")
        if self.lam is not None and not self.lam > 0:
            raise ConfigError(f"[confidence] lambda: must be positive, got {self.lam}")
        if self.mode not in ("finite", "continuous"):
            raise ConfigError(f"[confidence] mode: must be finite or continuous, got {self.mode!r}")
        if self.psi_combine not in ("min", "max"):
            raise ConfigError(f"[confidence] psi: must be min or max, got {self.psi_combine!r}")
        if self.function_file is not None and self.C_k is None:
            raise ConfigError("[confidence] C_k: required when [function] file is given")
        if self.learner_sigma <= 0:
            raise ConfigError("[confidence] sigma: learner noise scale must be positive")

    @property
    def learner_sigma(self) -> float:
        return self.noise_sigma if self.sigma is None else self.sigma

    @property
    def fn_seed(self) -> int:
        return self.seed if self.function_seed is None else self.function_seed

    def trial_seed(self, i: int) -> int:
        return self.seed + i

    def with_overrides(self, **kw) -> "ExperimentConfig":
        kw = {k: v for k, v in kw.items() if v is not None}
        return replace(self, **kw) if kw else self


_SECTIONS = {
    "experiment": {"algorithms", "algorithm", "t", "trials", "delta", "seed", "parallelism", "out"},
    "kernel": {"family", "lengthscale", "nu", "output_scale"},
    "grid": {"d", "grid_size", "bounds"},
    "function": {"anchors", "weight_sigma", "target_range", "seed", "file"},
    "noise": {"noise_sigma"},
    "delay": {"family", "param", "xi", "b", "mean_delay"},
    "confidence": {"lambda", "sigma", "c_k", "disc_c", "mode", "psi"},
}


def _get(section, key, conv, default, name=None):
    raw = section.get(key) if section is not None else None
    if raw is None or raw.strip() == "":
        return default
    try:
        return conv(raw.strip())
    except ValueError as exc:
        raise ConfigError(f"[{name}] {key}: cannot parse {raw!r} ({exc})") from None


def _floats(raw: str) -> tuple:
    return tuple(float(v) for v in raw.replace(";", ",").split(","))


def parse_config(text: str, base_dir: Path | None = None) -> ExperimentConfig:
    cp = configparser.ConfigParser(inline_comment_prefixes=("#", ";"))
    try:
        cp.read_string(text)
    except configparser.Error as exc:
        raise ConfigError(f"malformed config: {exc}") from None
    for sec in cp.sections():
        if sec.lower() not in _SECTIONS:
            raise ConfigError(f"unknown section [{sec}]; expected one of {', '.join(_SECTIONS)}")
        extra = set(k.lower() for k in cp[sec]) - _SECTIONS[sec.lower()]
        if extra:
            raise ConfigError(f"[{sec}] unknown key(s): {', '.join(sorted(extra))}")
    sec = {s.lower(): cp[s] for s in cp.sections()}
    ex, kn, gr, fn, nz, dl, cf = (sec.get(s) for s in _SECTIONS)

    d = _get(gr, "d", int, 2, "grid")
    if d < 1:
        raise ConfigError(f"[grid] d: must be >= 1, got {d}")
    algos = _get(ex, "algorithms", lambda s: tuple(a.strip() for a in s.split(",") if a.strip()), None, "experiment")
    if algos is None:
        algos = _get(ex, "algorithm", lambda s: (s,), ("bpe_delay",), "experiment")
    try:
        kernel = KernelSpec(
            family=_get(kn, "family", str, "se", "kernel"),
            lengthscale=_get(kn, "lengthscale", float, 0.8, "kernel"),
            output_scale=_get(kn, "output_scale", float, 1.0, "kernel"),
            nu=_get(kn, "nu", float, 2.5, "kernel"),
            input_dim=d,
        )
    except ValueError as exc:
        raise ConfigError(f"[kernel] {exc}") from None

    fam = _get(dl, "family", str, "none", "delay").lower()
    if fam not in DELAY_FAMILIES:
        raise ConfigError(f"[delay] family: unknown {fam!r}; expected one of {', '.join(DELAY_FAMILIES)}")
    try:
        delay = DelayModel(
            family=fam,
            param=_get(dl, "param", float, 0.0, "delay"),
            xi=_get(dl, "xi", float, None, "delay"),
            b=_get(dl, "b", float, None, "delay"),
            mean_delay=_get(dl, "mean_delay", float, None, "delay"),
        )
        delay.params()
    except ValueError as exc:
        raise ConfigError(f"[delay] {exc}") from None

    bounds = _get(gr, "bounds", _floats, (0.0, 5.0), "grid")
    if len(bounds) not in (2, 2 * d):
        raise ConfigError(f"[grid] bounds: need 2 or {2 * d} numbers, got {len(bounds)}")
    if len(bounds) == 2 * d:
        bounds = tuple(zip(bounds[::2], bounds[1::2]))

    ffile = _get(fn, "file", str, None, "function")
    if ffile is not None and base_dir is not None and not Path(ffile).is_absolute():
        ffile = str(base_dir / ffile)
    tr = _get(fn, "target_range", str, "1.5", "function")
    return ExperimentConfig(
        algorithms=algos,
        T=_get(ex, "t", int, 2000, "experiment"),
        trials=_get(ex, "trials", int, 10, "experiment"),
        delta=_get(ex, "delta", float, 0.1, "experiment"),
        seed=_get(ex, "seed", int, 0, "experiment"),
        parallelism=_get(ex, "parallelism", int, 1, "experiment"),
        out=_get(ex, "out", str, "results", "experiment"),
        kernel=kernel,
        grid_size=_get(gr, "grid_size", int, 50, "grid"),
        bounds=bounds,
        anchors=_get(fn, "anchors", int, 100, "function"),
        weight_sigma=_get(fn, "weight_sigma", float, 1.0, "function"),
        target_range=None if tr.lower() == "none" else _get(fn, "target_range", float, 1.5, "function"),
        function_seed=_get(fn, "seed", int, None, "function"),
        function_file=ffile,
        noise_sigma=_get(nz, "noise_sigma", float, 0.02, "noise"),
        delay=delay,
        lam=_get(cf, "lambda", float, None, "confidence"),
        sigma=_get(cf, "sigma", float, None, "confidence"),
        C_k=_get(cf, "c_k", float, None, "confidence"),
        disc_c=_get(cf, "disc_c", float, 1.0, "confidence"),
        mode=_get(cf, "mode", str, "finite", "confidence"),
        psi_combine=_get(cf, "psi", str, "min", "confidence"),
    )


def load_config(path) -> ExperimentConfig:
    p = Path(path)
    try:
        text = p.read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc.strerror}") from None
    return parse_config(text, base_dir=p.parent)
