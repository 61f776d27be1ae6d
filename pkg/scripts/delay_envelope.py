"""Monte Carlo check of the high-probability delay envelope E[tau] + psi_t(delta).

Reports, for each way of combining the two envelope branches, the fraction of
runs in which some step's delay exceeds the envelope.

    python scripts/delay_envelope.py --runs 500 --T 2000 --mean 50
"""

import argparse

import numpy as np

from bpedelay.confidence import DelayParams, psi
from bpedelay.environment import DelayModel


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--runs", type=int, default=500)
    ap.add_argument("--T", type=int, default=2000)
    ap.add_argument("--mean", type=float, default=50.0)
    ap.add_argument("--xi", type=float, default=9.0)
    ap.add_argument("--b", type=float, default=1.0)
    ap.add_argument("--delta", type=float, default=0.1)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    model = DelayModel("poisson", args.mean, xi=args.xi, b=args.b)
    dp = DelayParams(args.xi, args.b, args.mean)
    rng = np.random.default_rng(args.seed)
    tau = model.sample(rng, args.runs * args.T).reshape(args.runs, args.T)
    t = np.arange(1, args.T + 1)
    for combine in ("min", "max"):
        env = args.mean + np.array([psi(s, args.delta, dp, combine) for s in t])
        over = tau > env
        print(
            f"psi={combine}: envelope at t=T {env[-1]:.2f}; runs with a violation "
            f"{over.any(axis=1).mean():.3f}; mean violating steps per run {over.sum(axis=1).mean():.2f} "
            f"(target <= {args.delta})"
        )


if __name__ == "__main__":
    main()
