"""Shared argument handling for the experiment scripts."""

from __future__ import annotations

import argparse
import logging
from pathlib import Path

from bpedelay.config import ExperimentConfig, load_config
from bpedelay.kernels import KernelSpec

ROOT = Path(__file__).resolve().parents[1]
LENGTHSCALES = (0.8, 1.0)


def parser(description: str, out: str) -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(description=description)
    ap.add_argument("--config", default=str(ROOT / "configs" / "reference.ini"))
    ap.add_argument("--T", type=int, default=None)
    ap.add_argument("--trials", type=int, default=None)
    ap.add_argument("--grid-size", type=int, default=None)
    ap.add_argument("--jobs", type=int, default=None)
    ap.add_argument("--out", default=str(ROOT / "results" / out))
    return ap


def base_config(args) -> ExperimentConfig:
    logging.basicConfig(level=logging.WARNING, format="%(message)s")
    cfg = load_config(args.config)
    return cfg.with_overrides(T=args.T, trials=args.trials, grid_size=args.grid_size, parallelism=args.jobs)


def with_lengthscale(cfg: ExperimentConfig, ell: float) -> ExperimentConfig:
    k = cfg.kernel
    return cfg.with_overrides(kernel=KernelSpec(k.family, ell, k.output_scale, k.nu, k.input_dim))
