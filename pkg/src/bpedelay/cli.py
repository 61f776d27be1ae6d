"""Command line entry point: ``bpedelay {run,compare,gen-fn,schedule}``."""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from .algorithms import ALGORITHMS, build_schedule
from .config import ConfigError, ExperimentConfig, load_config
from .confidence import DelayParams, u_T
from .experiment import run_suite
from .output import emit_csv, emit_svg
from .synth import export_csv, generate_function, make_grid

log = logging.getLogger("bpedelay")


def _fmt(seq) -> str:
    return "[" + ",".join(str(v) for v in seq) + "]"


def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--seed", type=int, default=None, help="base seed (overrides the config)")
    p.add_argument("--out", default=None, help="output directory or file")
    p.add_argument("--quiet", action="store_true", help="suppress progress output")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="bpedelay", description="Kernel bandits with delayed feedback.")
    sub = ap.add_subparsers(dest="cmd", required=True)

    p = sub.add_parser("run", help="run the configured algorithm(s)")
    p.add_argument("config")
    p.add_argument("--trials", type=int, default=None)
    p.add_argument("--jobs", type=int, default=None, help="parallel worker processes")
    _common(p)

    p = sub.add_parser("compare", help="run several algorithms on matched environments")
    p.add_argument("config")
    p.add_argument("--algorithms", default=None, help=f"comma list from {','.join(ALGORITHMS)}")
    p.add_argument("--trials", type=int, default=None)
    p.add_argument("--jobs", type=int, default=None, help="parallel worker processes")
    _common(p)

    p = sub.add_parser("gen-fn", help="export a synthetic objective as CSV")
    p.add_argument("--config", default=None)
    _common(p)

    p = sub.add_parser("schedule", help="print the round schedule")
    p.add_argument("--T", type=int, required=True)
    p.add_argument("--u", type=float, default=None, help="round padding; default derives it from the delay")
    p.add_argument("--delta", type=float, default=0.1)
    p.add_argument("--mean-delay", type=float, default=0.0)
    p.add_argument("--xi", type=float, default=9.0)
    p.add_argument("--b", type=float, default=1.0)
    _common(p)
    return ap


def _run(args, compare: bool) -> int:
    cfg = load_config(args.config)
    algos = None
    if compare:
        if getattr(args, "algorithms", None):
            algos = tuple(a.strip() for a in args.algorithms.split(",") if a.strip())
        elif len(cfg.algorithms) < 2:
            algos = ALGORITHMS
    try:
        cfg = cfg.with_overrides(seed=args.seed, out=args.out, trials=args.trials, parallelism=args.jobs, algorithms=algos)
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    res = run_suite(cfg)
    paths = emit_csv(res, cfg.out)
    svg = Path(cfg.out) / "regret.svg"
    emit_svg(res.curves, svg)
    for a, c in res.curves.items():
        log.info("%-15s final mean regret %.4f (+/- %.4f)", a, c.mean[-1], c.half_std[-1])
    log.info("wrote %s and %s", ", ".join(str(p) for p in paths.values()), svg)
    return 0


def _gen_fn(args) -> int:
    cfg = load_config(args.config) if args.config else ExperimentConfig()
    if args.seed is not None:
        cfg = cfg.with_overrides(function_seed=args.seed)
    grid = make_grid(cfg.kernel.input_dim, cfg.grid_size, cfg.bounds)
    f = generate_function(cfg.kernel, grid, cfg.anchors, cfg.weight_sigma, cfg.fn_seed, cfg.target_range)
    out = Path(args.out or "function.csv")
    out.parent.mkdir(parents=True, exist_ok=True)
    export_csv(f.values, grid.points, out)
    log.info("wrote %s (%d points, rkhs norm %.6g)", out, len(grid), f.rkhs_norm)
    return 0


def _schedule(args) -> int:
    if args.u is not None:
        u = args.u
    elif args.mean_delay > 0:
        u = u_T(args.T, args.delta, DelayParams(args.xi, args.b, args.mean_delay))
    else:
        u = 0.0
    s = build_schedule(args.T, u)
    print(f"u={s.u:g}")
    print(f"R={s.R}")
    print(f"q={_fmt(s.q)}")
    print(f"t={_fmt(s.t)}")
    return 0


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    logging.basicConfig(level=logging.WARNING if args.quiet else logging.INFO, format="%(message)s")
    try:
        if args.cmd == "run":
            return _run(args, compare=False)
        if args.cmd == "compare":
            return _run(args, compare=True)
        if args.cmd == "gen-fn":
            return _gen_fn(args)
        return _schedule(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
