"""BPE-Delay against GP-UCB-SDF on the two SE objectives under Poisson(50) delays.

Writes one CSV/SVG bundle per objective and prints paired final regrets.

    python scripts/compare_sdf.py --trials 10 --grid-size 30
"""

from pathlib import Path

import numpy as np

from _common import LENGTHSCALES, base_config, parser, with_lengthscale
from bpedelay.output import emit_csv, emit_svg
from bpedelay.experiment import run_suite


def main():
    args = parser(__doc__.splitlines()[0], "compare_sdf").parse_args()
    cfg = base_config(args).with_overrides(algorithms=("bpe_delay", "gp_ucb_sdf"))
    for ell in LENGTHSCALES:
        res = run_suite(with_lengthscale(cfg, ell))
        out = Path(args.out) / f"l{ell:g}"
        emit_csv(res, out)
        emit_svg(res.curves, out / "regret.svg", title=f"SE l={ell:g}, Poisson({cfg.delay.param:g}) delay")
        a = np.array([t.final_regret for t in res.traces["bpe_delay"]])
        b = np.array([t.final_regret for t in res.traces["gp_ucb_sdf"]])
        print(f"l={ell:g}: BPE-Delay {a.mean():.1f}  GP-UCB-SDF {b.mean():.1f}  "
              f"paired wins {int(np.sum(a < b))}/{len(a)}")


if __name__ == "__main__":
    main()
