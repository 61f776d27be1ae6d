"""Grid domains and synthetic RKHS objectives built as finite kernel expansions."""

from __future__ import annotations

import csv
import itertools
from dataclasses import dataclass

import numpy as np

from .kernels import KernelSpec


@dataclass(frozen=True)
class GridDomain:
    """Uniform lattice with both endpoints on every axis, listed in row-major order."""

    d: int
    resolution: int
    lower: tuple
    upper: tuple
    points: np.ndarray

    def __len__(self) -> int:
        return len(self.points)


def make_grid(d: int, resolution: int, bounds=(0.0, 1.0)) -> GridDomain:
    """``resolution**d`` points; ``bounds`` is one (lo, hi) pair or one pair per axis."""
    if d < 1 or resolution < 1:
        raise ValueError("d and resolution must be >= 1")
    b = np.asarray(bounds, dtype=float)
    if b.shape == (2,):
        b = np.tile(b, (d, 1))
    if b.shape != (d, 2) or np.any(b[:, 1] < b[:, 0]):
        raise ValueError(f"bounds must be (lo, hi) or {d} such pairs with lo <= hi")
    axes = [np.linspace(lo, hi, resolution) for lo, hi in b]
    pts = np.array(list(itertools.product(*axes)), dtype=float).reshape(-1, d)
    pts.setflags(write=False)
    return GridDomain(d, resolution, tuple(b[:, 0]), tuple(b[:, 1]), pts)


@dataclass(frozen=True)
class SynthFunction:
    """f(x) = sum_i weights[i] * k(x, anchors[i]), cached on a grid."""

    kernel: KernelSpec
    anchors: np.ndarray
    weights: np.ndarray
    values: np.ndarray
    rkhs_norm: float

    def __call__(self, x) -> np.ndarray:
        return self.kernel.matrix(x, self.anchors) @ self.weights

    @classmethod
    def from_expansion(cls, kernel: KernelSpec, anchors, weights, grid: GridDomain) -> "SynthFunction":
        anchors = kernel._as_points(anchors).copy()
        weights = np.asarray(weights, dtype=float).reshape(-1).copy()
        if len(anchors) != len(weights):
            raise ValueError("one weight per anchor required")
        quad = float(weights @ kernel.matrix(anchors, anchors) @ weights)
        values = kernel.matrix(grid.points, anchors) @ weights
        for a in (anchors, weights, values):
            a.setflags(write=False)
        return cls(kernel, anchors, weights, values, float(np.sqrt(max(quad, 0.0))))


def generate_function(
    kernel: KernelSpec,
    grid: GridDomain,
    m: int = 100,
    weight_sigma: float = 1.0,
    seed: int = 0,
    target_range: float | None = 1.5,
) -> SynthFunction:
    """Random kernel expansion with anchors uniform on the grid's box.

    Weights are i.i.d. N(0, weight_sigma^2). If ``target_range`` is set, the
    weights are scaled so that max - min over the grid equals it; the RKHS
    norm scales with them.
    """
    if m < 1:
        raise ValueError(f"need at least one anchor, got m={m}")
    rng = np.random.default_rng(seed)
    lo, hi = np.asarray(grid.lower), np.asarray(grid.upper)
    anchors = rng.uniform(lo, hi, size=(m, grid.d))
    weights = rng.normal(0.0, weight_sigma, size=m)
    if target_range is not None:
        vals = kernel.matrix(grid.points, anchors) @ weights
        span = float(vals.max() - vals.min())
        if span > 0:
            weights = weights * (target_range / span)
    return SynthFunction.from_expansion(kernel, anchors, weights, grid)


def function_stats(values) -> tuple[int, float, float, float]:
    """(argmax index, max, min, max - min); ties go to the lowest index."""
    v = np.asarray(getattr(values, "values", values), dtype=float)
    i = int(np.argmax(v))
    hi, lo = float(v[i]), float(v.min())
    return i, hi, lo, hi - lo


def export_csv(values, points, path) -> None:
    """Write ``index, x0..x{d-1}, value`` rows; floats use round-trip repr."""
    v = np.asarray(getattr(values, "values", values), dtype=float)
    pts = np.asarray(points, dtype=float).reshape(len(v), -1)
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["index", *[f"x{j}" for j in range(pts.shape[1])], "value"])
        for i, (p, y) in enumerate(zip(pts, v)):
            w.writerow([i, *map(repr, p.tolist()), repr(float(y))])


def import_csv(path) -> tuple[np.ndarray, np.ndarray]:
    """Inverse of :func:`export_csv`: returns (points, values) ordered by index."""
    with open(path, newline="", encoding="utf-8") as fh:
        rows = list(csv.reader(fh))
    if not rows:
        raise ValueError(f"{path}: empty function file")
    header = rows[0]
    if header[0] != "index" or header[-1] != "value" or len(header) < 3:
        raise ValueError(f"{path}: expected header index,x0,...,value")
    body = sorted(rows[1:], key=lambda r: int(r[0]))
    if [int(r[0]) for r in body] != list(range(len(body))):
        raise ValueError(f"{path}: indices must be 0..n-1")
    pts = np.array([[float(c) for c in r[1:-1]] for r in body]).reshape(len(body), len(header) - 2)
    vals = np.array([float(r[-1]) for r in body])
    return pts, vals
