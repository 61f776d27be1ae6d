"""Confidence-width multipliers, delay padding and interval construction."""

from __future__ import annotations

import math
from dataclasses import dataclass, replace


@dataclass(frozen=True)
class ConfidenceParams:
    """Constants entering the confidence widths.

    ``C_k`` bounds the RKHS norm of the objective, ``sigma`` is the noise
    sub-Gaussian scale, ``lam`` the regulariser. ``domain_card``, ``d``,
    ``disc_c`` and ``k_max`` only matter for the finite-domain and
    discretised (continuous-domain) widths.
    """

    C_k: float
    sigma: float
    lam: float
    delta: float
    domain_card: int = 1
    d: int = 1
    disc_c: float = 1.0
    k_max: float = 1.0

    def __post_init__(self):
        if self.C_k < 0:
            raise ValueError(f"C_k must be non-negative, got {self.C_k}")
        if not (self.sigma > 0 and self.lam > 0 and self.disc_c > 0 and self.k_max > 0):
            raise ValueError("sigma, lam, disc_c and k_max must be positive")
        if not 0 < self.delta <= 1:
            raise ValueError(f"delta must lie in (0, 1], got {self.delta}")
        if self.domain_card < 1 or self.d < 1:
            raise ValueError("domain_card and d must be >= 1")


@dataclass(frozen=True)
class DelayParams:
    """Sub-exponential description of the delay law: scale ``xi``, tail ``b``, mean."""

    xi: float
    b: float
    mean_delay: float = 0.0

    def __post_init__(self):
        if not (self.xi > 0 and self.b > 0):
            raise ValueError(f"xi and b must be positive, got xi={self.xi}, b={self.b}")
        if self.mean_delay < 0:
            raise ValueError(f"mean_delay must be >= 0, got {self.mean_delay}")


def _width(p: ConfidenceParams, log_inv_delta: float) -> float:
    return p.C_k + (p.sigma / p.lam) * math.sqrt(2.0 * max(log_inv_delta, 0.0))


def beta(p: ConfidenceParams) -> float:
    """C_k + (sigma / lam) * sqrt(2 log(1/delta))."""
    return _width(p, -math.log(p.delta))


def beta_finite(p: ConfidenceParams, R: int) -> float:
    """``beta`` at delta / (4 R |X|): the uniform width over a finite domain and R rounds."""
    if R < 1:
        raise ValueError(f"R must be >= 1, got {R}")
    return _width(p, math.log(4.0 * R * p.domain_card / p.delta))


def rkhs_norm_bound(p: ConfidenceParams, t: int, delta: float) -> float:
    """High-probability bound on the RKHS norm of the posterior mean after t points."""
    return p.C_k + (max(p.sigma, p.k_max) * math.sqrt(t) / p.lam) * math.sqrt(2.0 * math.log(2.0 * t / delta))


def log_disc_size(p: ConfidenceParams, t: int) -> float:
    """log of the discretisation size c * C~^d * t^d, with C~ taken at delta/2."""
    c_tilde = rkhs_norm_bound(p, t, p.delta / 2.0)
    return math.log(p.disc_c) + p.d * (math.log(c_tilde) + math.log(t))


def beta_prime(p: ConfidenceParams, t: int) -> float:
    """Uniform width over a continuous domain: ``beta`` at delta / (2 Gamma_t).

    Gamma_t is handled in log space so large ``d`` or ``t`` never overflow.
    """
    if t < 1:
        raise ValueError(f"t must be >= 1, got {t}")
    return _width(p, math.log(2.0) + log_disc_size(p, t) - math.log(p.delta))


def psi(t: int, delta: float, dp: DelayParams, combine: str = "min") -> float:
    """Delay deviation bound min{sqrt(2 xi^2 L), 2 b L} with L = log(3t / (2 delta)).

    ``combine="max"`` takes the larger branch instead, which is the form a
    standard sub-exponential (Bernstein) tail bound produces.
    """
    if t < 1:
        raise ValueError(f"t must be >= 1, got {t}")
    if not 0 < delta < 1:
        raise ValueError(f"delta must lie in (0, 1), got {delta}")
    L = math.log(3.0 * t / (2.0 * delta))
    gauss = math.sqrt(2.0 * dp.xi**2 * L)
    expo = 2.0 * dp.b * L
    if combine == "min":
        return min(gauss, expo)
    if combine == "max":
        return max(gauss, expo)
    raise ValueError(f"combine must be 'min' or 'max', got {combine!r}")


def u_T(T: int, delta: float, dp: DelayParams | None, combine: str = "min") -> float:
    """Round padding E[tau] + psi_T(delta / 2); zero when ``dp`` is None (no delay)."""
    if T < 1:
        raise ValueError(f"T must be >= 1, got {T}")
    if dp is None:
        return 0.0
    return dp.mean_delay + psi(T, delta / 2.0, dp, combine)


def interval_finite(mu, sd, beta_t):
    """(mu - beta * sd, mu + beta * sd); accepts scalars or arrays."""
    if _any_negative(sd):
        raise ValueError("standard deviation must be non-negative")
    w = beta_t * sd
    return mu - w, mu + w


def interval_continuous(mu, sd, beta_p, q: int):
    """Discretisation-corrected interval: mu -/+ (2/q + beta' (sd + 2/sqrt(q)))."""
    if q < 1:
        raise ValueError(f"q must be >= 1, got {q}")
    if _any_negative(sd):
        raise ValueError("standard deviation must be non-negative")
    w = 2.0 / q + beta_p * (sd + 2.0 / math.sqrt(q))
    return mu - w, mu + w


def _any_negative(sd) -> bool:
    try:
        return bool((sd < 0).any())
    except AttributeError:
        return sd < 0


def with_delta(p: ConfidenceParams, delta: float) -> ConfidenceParams:
    return replace(p, delta=delta)
