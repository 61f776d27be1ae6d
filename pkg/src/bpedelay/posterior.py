"""Kernel ridge / GP posterior over a set of inputs.

``VarianceTracker`` only needs the chosen inputs, so it can be used while
feedback is still outstanding. ``Predictor`` adds observation values on top
of a tracker to give the posterior mean.

Both keep the lower Cholesky factor ``L`` of ``K + lam^2 I``. When a fixed
candidate set is supplied, the matrix ``V = L^{-1} K(X, candidates)`` is kept
alongside so that posterior statistics over all candidates cost O(t * m)
per update instead of a fresh solve.
"""

from __future__ import annotations

import logging

import numpy as np
from scipy.linalg import cholesky, solve_triangular

from .kernels import KernelSpec

log = logging.getLogger(__name__)


def _clamp_variance(var: np.ndarray, prior: np.ndarray) -> np.ndarray:
    neg = var < 0
    if neg.any():
        worst = float(var[neg].min())
        if worst < -1e-10 * float(prior.max(initial=1.0)):
            log.debug("clamped %d negative posterior variances (min %.3e)", int(neg.sum()), worst)
    return np.clip(var, 0.0, prior)


class VarianceTracker:
    """Posterior variance from a growing set of inputs.

    Parameters
    ----------
    kernel : KernelSpec
    lam : float
        Regulariser; the factorised matrix is ``K + lam**2 I``.
    candidates : array_like, optional
        Fixed points whose variances are maintained incrementally.
    """

    def __init__(self, kernel: KernelSpec, lam: float, candidates=None):
        if not lam > 0:
            raise ValueError(f"lambda must be positive, got {lam}")
        self.kernel = kernel
        self.lam = float(lam)
        self._n = 0
        self._cap = 16
        self._X = np.zeros((self._cap, kernel.input_dim))
        self._L = np.zeros((self._cap, self._cap))
        if candidates is None:
            self._C = None
            self._V = None
            self._cvar = None
            self._cprior = None
        else:
            self._C = kernel._as_points(candidates).copy()
            self._cprior = kernel.diag(self._C)
            self._V = np.zeros((self._cap, len(self._C)))
            self._cvar = self._cprior.copy()

    @classmethod
    def from_points(cls, kernel: KernelSpec, lam: float, points, candidates=None) -> "VarianceTracker":
        """Build the factor in one shot rather than by repeated rank-one extension."""
        tr = cls(kernel, lam, candidates)
        pts = np.asarray(points, dtype=float)
        if pts.size == 0:
            return tr
        pts = kernel._as_points(pts)
        n = len(pts)
        tr._grow(n)
        K = kernel.matrix(pts, pts)
        K[np.diag_indices(n)] += tr.lam**2
        tr._L[:n, :n] = cholesky(K, lower=True)
        tr._X[:n] = pts
        tr._n = n
        if tr._C is not None:
            V = solve_triangular(tr._L[:n, :n], kernel.matrix(pts, tr._C), lower=True)
            tr._V[:n] = V
            tr._cvar = tr._cprior - np.einsum("ij,ij->j", V, V)
        return tr

    def _grow(self, need: int) -> None:
        if need <= self._cap:
            return
        cap = max(need, 2 * self._cap)
        X = np.zeros((cap, self._X.shape[1]))
        X[: self._n] = self._X[: self._n]
        L = np.zeros((cap, cap))
        L[: self._n, : self._n] = self._L[: self._n, : self._n]
        self._X, self._L = X, L
        if self._V is not None:
            V = np.zeros((cap, self._V.shape[1]))
            V[: self._n] = self._V[: self._n]
            self._V = V
        self._cap = cap

    def __len__(self) -> int:
        return self._n

    @property
    def inputs(self) -> np.ndarray:
        return self._X[: self._n].copy()

    @property
    def factor(self) -> np.ndarray:
        """Lower-triangular ``L`` with ``L @ L.T == K + lam^2 I``."""
        return self._L[: self._n, : self._n].copy()

    @property
    def candidates(self):
        return None if self._C is None else self._C.copy()

    def add_point(self, x) -> "VarianceTracker":
        """Append one input with a rank-one extension of the factor; O(t^2 + t m)."""
        x = self.kernel._as_points(x)
        if len(x) != 1:
            raise ValueError("add_point takes a single point")
        n = self._n
        self._grow(n + 1)
        L = self._L[:n, :n]
        kx = self.kernel.matrix(self._X[:n], x)[:, 0] if n else np.zeros(0)
        ell = solve_triangular(L, kx, lower=True) if n else kx
        # the pivot is sigma_n^2(x) + lam^2 >= lam^2 in exact arithmetic
        piv = float(self.kernel.diag(x)[0]) + self.lam**2 - float(ell @ ell)
        piv = np.sqrt(max(piv, self.lam**2))
        self._L[n, :n] = ell
        self._L[n, n] = piv
        self._X[n] = x[0]
        if self._C is not None:
            kc = self.kernel.matrix(x, self._C)[0]
            v = (kc - ell @ self._V[:n]) / piv
            self._V[n] = v
            self._cvar = self._cvar - v * v
        self._n = n + 1
        return self

    def _solve(self, points) -> tuple[np.ndarray, np.ndarray]:
        pts = self.kernel._as_points(points)
        if self._n == 0:
            return pts, np.zeros((0, len(pts)))
        W = solve_triangular(self._L[: self._n, : self._n], self.kernel.matrix(self._X[: self._n], pts), lower=True)
        return pts, W

    def variance(self, points) -> np.ndarray:
        """Posterior variance at each point, clamped to ``[0, k(x, x)]``."""
        pts, W = self._solve(points)
        prior = self.kernel.diag(pts)
        return _clamp_variance(prior - np.einsum("ij,ij->j", W, W), prior)

    def std(self, points) -> np.ndarray:
        return np.sqrt(self.variance(points))

    def candidate_variance(self) -> np.ndarray:
        """Variance over the candidate set, maintained incrementally."""
        if self._C is None:
            raise ValueError("tracker was built without candidates")
        return _clamp_variance(self._cvar, self._cprior)


class Predictor:
    """Posterior mean and variance given inputs with observed values."""

    def __init__(self, tracker: VarianceTracker, values=()):
        values = np.asarray(values, dtype=float).reshape(-1)
        if len(values) != len(tracker):
            raise ValueError(f"{len(values)} values for {len(tracker)} inputs")
        self.tracker = tracker
        self._y = list(values)
        self._w = None

    @property
    def kernel(self) -> KernelSpec:
        return self.tracker.kernel

    @property
    def lam(self) -> float:
        return self.tracker.lam

    @property
    def inputs(self) -> np.ndarray:
        return self.tracker.inputs

    @property
    def values(self) -> np.ndarray:
        return np.array(self._y, dtype=float)

    def __len__(self) -> int:
        return len(self._y)

    def add_observation(self, x, y: float) -> "Predictor":
        self.tracker.add_point(x)
        self._y.append(float(y))
        self._w = None
        return self

    def set_value(self, i: int, y: float) -> None:
        """Overwrite the i-th observation (inputs unchanged)."""
        self._y[i] = float(y)
        self._w = None

    def _whitened(self) -> np.ndarray:
        # w = L^{-1} y, so mean(x) = k_X(x)^T L^{-T} w
        if self._w is None:
            n = len(self._y)
            L = self.tracker._L[:n, :n]
            self._w = solve_triangular(L, np.asarray(self._y), lower=True) if n else np.zeros(0)
        return self._w

    def mean(self, points) -> np.ndarray:
        pts, W = self.tracker._solve(points)
        if len(self) == 0:
            return np.zeros(len(pts))
        return W.T @ self._whitened()

    def variance(self, points) -> np.ndarray:
        return self.tracker.variance(points)

    def std(self, points) -> np.ndarray:
        return self.tracker.std(points)

    def candidate_mean(self) -> np.ndarray:
        tr = self.tracker
        if tr._C is None:
            raise ValueError("predictor was built without candidates")
        if len(self) == 0:
            return np.zeros(len(tr._C))
        return tr._V[: len(self)].T @ self._whitened()

    def candidate_variance(self) -> np.ndarray:
        return self.tracker.candidate_variance()


def fit(kernel: KernelSpec, lam: float, inputs, values, candidates=None) -> Predictor:
    """Posterior over ``(inputs, values)`` with regulariser ``lam``.

    mean(x) = k_X(x)^T (K + lam^2 I)^{-1} y and
    variance(x) = k(x, x) - k_X(x)^T (K + lam^2 I)^{-1} k_X(x).
    """
    if not lam > 0:
        raise ValueError(f"lambda must be positive, got {lam}")
    values = np.asarray(values, dtype=float).reshape(-1)
    pts = np.asarray(inputs, dtype=float)
    n_in = 0 if pts.size == 0 else len(kernel._as_points(pts))
    if n_in != len(values):
        raise ValueError(f"{n_in} inputs but {len(values)} values")
    return Predictor(VarianceTracker.from_points(kernel, lam, pts, candidates), values)
