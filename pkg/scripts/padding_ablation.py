"""BPE-Delay against BPE (no round padding) on matched Poisson(50) environments.

    python scripts/padding_ablation.py --trials 10
"""

from pathlib import Path

import numpy as np

from _common import LENGTHSCALES, base_config, parser, with_lengthscale
from bpedelay.experiment import run_suite
from bpedelay.output import emit_csv, emit_svg


def main():
    args = parser(__doc__.splitlines()[0], "padding_ablation").parse_args()
    cfg = base_config(args).with_overrides(algorithms=("bpe_delay", "bpe"))
    for ell in LENGTHSCALES:
        res = run_suite(with_lengthscale(cfg, ell))
        out = Path(args.out) / f"l{ell:g}"
        emit_csv(res, out)
        emit_svg(res.curves, out / "regret.svg", title=f"padding ablation, SE l={ell:g}")
        a = np.array([t.final_regret for t in res.traces["bpe_delay"]])
        b = np.array([t.final_regret for t in res.traces["bpe"]])
        print(f"l={ell:g}: BPE-Delay {a.mean():.1f}  BPE {b.mean():.1f}  paired wins {int(np.sum(a <= b))}/{len(a)}")


if __name__ == "__main__":
    main()
