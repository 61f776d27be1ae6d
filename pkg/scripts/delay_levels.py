"""Regret of BPE-Delay and GP-UCB-SDF as the Poisson delay mean varies over 0, 25, 50.

    python scripts/delay_levels.py --trials 10
"""

from pathlib import Path

import numpy as np

from _common import LENGTHSCALES, base_config, parser, with_lengthscale
from bpedelay.environment import DelayModel
from bpedelay.experiment import AggregateCurve, run_suite
from bpedelay.output import emit_csv, emit_svg

LEVELS = (0, 25, 50)


def main():
    ap = parser(__doc__.splitlines()[0], "delay_levels")
    ap.add_argument("--algorithms", default="bpe_delay,gp_ucb_sdf")
    args = ap.parse_args()
    algos = tuple(args.algorithms.split(","))
    cfg = base_config(args).with_overrides(algorithms=algos)
    for ell in LENGTHSCALES:
        curves: dict[str, dict[str, AggregateCurve]] = {a: {} for a in algos}
        for lam in LEVELS:
            delay = DelayModel("poisson", lam, xi=cfg.delay.xi, b=cfg.delay.b) if lam else DelayModel("none")
            res = run_suite(with_lengthscale(cfg, ell).with_overrides(delay=delay))
            emit_csv(res, Path(args.out) / f"l{ell:g}" / f"lambda{lam}")
            for a in algos:
                curves[a][f"lambda={lam}"] = res.curves[a]
                finals = [t.final_regret for t in res.traces[a]]
                print(f"l={ell:g} {a:<11} lambda={lam:<3} final regret {np.mean(finals):8.1f}")
        for a in algos:
            emit_svg(curves[a], Path(args.out) / f"l{ell:g}" / f"{a}.svg", title=f"{a}, SE l={ell:g}")


if __name__ == "__main__":
    main()
