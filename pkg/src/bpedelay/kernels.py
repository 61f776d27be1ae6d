"""Positive definite kernels on R^d: squared exponential, Matern, linear."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

FAMILIES = ("se", "matern", "linear")
MATERN_NUS = (0.5, 1.5, 2.5)

_ALIASES = {
    "se": "se",
    "squaredexponential": "se",
    "squared_exponential": "se",
    "rbf": "se",
    "matern": "matern",
    "linear": "linear",
}


@dataclass(frozen=True)
class KernelSpec:
    """An immutable kernel description.

    Parameters
    ----------
    family : str
        One of ``"se"``, ``"matern"`` or ``"linear"``.
    lengthscale : float
        Isotropic lengthscale; ignored by the linear kernel.
    output_scale : float
        Multiplies the kernel, so stationary kernels satisfy k(x, x) = output_scale.
    nu : float
        Matern smoothness, restricted to the closed forms 0.5, 1.5 and 2.5.
    input_dim : int
        Dimension of the inputs.
    """

    family: str = "se"
    lengthscale: float = 1.0
    output_scale: float = 1.0
    nu: float = 2.5
    input_dim: int = 1

    def __post_init__(self):
        fam = _ALIASES.get(str(self.family).lower())
        if fam is None:
            raise ValueError(f"unknown kernel family {self.family!r}; expected one of {FAMILIES}")
        object.__setattr__(self, "family", fam)
        if not self.lengthscale > 0:
            raise ValueError(f"lengthscale must be positive, got {self.lengthscale}")
        if not self.output_scale > 0:
            raise ValueError(f"output_scale must be positive, got {self.output_scale}")
        if fam == "matern" and float(self.nu) not in MATERN_NUS:
            raise ValueError(f"Matern nu must be one of {MATERN_NUS}, got {self.nu}")
        if int(self.input_dim) < 1:
            raise ValueError(f"input_dim must be >= 1, got {self.input_dim}")

    @property
    def stationary(self) -> bool:
        return self.family != "linear"

    def _as_points(self, x) -> np.ndarray:
        a = np.asarray(x, dtype=float)
        if a.ndim == 0:
            a = a.reshape(1, 1)
        elif a.ndim == 1:
            if a.size % self.input_dim:
                raise ValueError(f"expected points of dimension {self.input_dim}, got shape {a.shape}")
            a = a.reshape(-1, self.input_dim)
        if a.ndim != 2 or a.shape[-1] != self.input_dim:
            raise ValueError(f"expected points of dimension {self.input_dim}, got shape {a.shape}")
        return a

    def _from_sqdist(self, sq: np.ndarray) -> np.ndarray:
        s, ell = self.output_scale, self.lengthscale
        if self.family == "se":
            return s * np.exp(-0.5 * sq / ell**2)
        r = np.sqrt(sq) / ell
        if self.nu == 0.5:
            return s * np.exp(-r)
        if self.nu == 1.5:
            z = np.sqrt(3.0) * r
            return s * (1.0 + z) * np.exp(-z)
        z = np.sqrt(5.0) * r
        return s * (1.0 + z + z * z / 3.0) * np.exp(-z)

    def matrix(self, a, b) -> np.ndarray:
        """Kernel matrix ``K[i, j] = k(a[i], b[j])``."""
        a, b = self._as_points(a), self._as_points(b)
        if self.family == "linear":
            # elementwise products summed in a fixed order keep k(x, y) == k(y, x) exactly
            return self.output_scale * (a[:, None, :] * b[None, :, :]).sum(axis=-1)
        diff = a[:, None, :] - b[None, :, :]
        return self._from_sqdist((diff * diff).sum(axis=-1))

    def diag(self, a) -> np.ndarray:
        """``k(x, x)`` for each row of ``a``."""
        a = self._as_points(a)
        if self.family == "linear":
            return self.output_scale * (a * a).sum(axis=-1)
        return np.full(a.shape[0], self.output_scale)

    def k_max(self, domain=None) -> float:
        """Largest prior variance over ``domain`` (required for the linear kernel)."""
        if self.stationary:
            return float(self.output_scale)
        if domain is None:
            raise ValueError("k_max of a linear kernel needs the domain points")
        return float(self.diag(domain).max())

    @classmethod
    def from_config(cls, cfg: dict, input_dim: int) -> "KernelSpec":
        return cls(
            family=cfg.get("family", "se"),
            lengthscale=float(cfg.get("lengthscale", 1.0)),
            output_scale=float(cfg.get("output_scale", 1.0)),
            nu=float(cfg.get("nu", 2.5)),
            input_dim=input_dim,
        )


def evaluate(kernel: KernelSpec, x, x2) -> float:
    """Scalar ``k(x, x2)`` for two single points."""
    a, b = kernel._as_points(x), kernel._as_points(x2)
    if a.shape[0] != 1 or b.shape[0] != 1:
        raise ValueError("evaluate expects single points; use gram or cross for sets")
    return float(kernel.matrix(a, b)[0, 0])


def gram(kernel: KernelSpec, points) -> np.ndarray:
    """Symmetric kernel matrix over ``points``; a 0x0 array when empty."""
    pts = np.asarray(points, dtype=float)
    if pts.size == 0:
        return np.zeros((0, 0))
    return kernel.matrix(pts, pts)


def cross(kernel: KernelSpec, points, x) -> np.ndarray:
    """Vector ``[k(p, x) for p in points]``."""
    pts = np.asarray(points, dtype=float)
    if pts.size == 0:
        kernel._as_points(x)
        return np.zeros(0)
    return kernel.matrix(pts, x)[:, 0]
