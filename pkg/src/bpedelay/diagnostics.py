"""Realised information gain, effective dimension and delay-envelope audits."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.linalg import cholesky, solve_triangular

from .confidence import DelayParams, psi
from .environment import RunTrace
from .kernels import KernelSpec


@dataclass(frozen=True)
class InfoReport:
    realized_gain: float
    effective_dim: float
    increments: np.ndarray


def info_gain(kernel: KernelSpec, lam: float, points) -> InfoReport:
    """0.5 log det(I + K / lam^2) and tr(K (K + lam^2 I)^{-1}) from one Cholesky factor.

    The per-point increments are 0.5 log(1 + sigma_{s-1}^2(x_s) / lam^2); with
    ``L L^T = K + lam^2 I`` they equal ``log L_ss - log lam``.
    """
    if not lam > 0:
        raise ValueError(f"lambda must be positive, got {lam}")
    pts = np.asarray(points, dtype=float)
    if pts.size == 0:
        return InfoReport(0.0, 0.0, np.zeros(0))
    pts = kernel._as_points(pts)
    n = len(pts)
    A = kernel.matrix(pts, pts)
    A[np.diag_indices(n)] += lam**2
    L = cholesky(A, lower=True)
    inc = np.log(np.diag(L)) - math.log(lam)
    # tr(K A^{-1}) = n - lam^2 tr(A^{-1}) = n - lam^2 ||L^{-1}||_F^2
    Linv = solve_triangular(L, np.eye(n), lower=True)
    eff = n - lam**2 * float(np.sum(Linv * Linv))
    return InfoReport(float(inc.sum()), float(max(eff, 0.0)), inc)


@dataclass(frozen=True)
class DelayAudit:
    n_steps: int
    violations: int
    fraction: float
    violated: bool


def audit_delays(trace: RunTrace, dp: DelayParams | None, delta: float, combine: str = "min") -> DelayAudit:
    """Count steps whose delay exceeds E[tau] + psi_t(delta).

    ``violated`` flags a run outside the event {tau_t <= E[tau] + psi_t(delta) for all t}.
    ``dp=None`` declares a delay-free law: any positive delay is a violation.
    """
    tau = trace.delays
    n = len(tau)
    if dp is None:
        bad = int(np.sum(tau > 0))
    else:
        bound = np.array([dp.mean_delay + psi(t, delta, dp, combine) for t in range(1, n + 1)])
        bad = int(np.sum(tau > bound))
    return DelayAudit(n, bad, bad / n if n else 0.0, bad > 0)


def variance_sum_constant(lam: float) -> float:
    """c1 = 2 / log(1 + 1/lam^2): the variance-sum to information-gain ratio bound."""
    return 2.0 / math.log1p(1.0 / lam**2)
