"""Seeded Monte-Carlo run of the Bell-measurement estimator.

For each (n, alpha) it draws random channels, estimates every eigenvalue with
the planned number of shots, and reports how often the worst error exceeds eps.
"""

import argparse
import csv
import math
import sys

import numpy as np

from pauliprobe.channel import random_channel
from pauliprobe.probes import AlphaProbe, estimate_all_eigenvalues, plan_samples, sample_outcomes
from pauliprobe.seeding import derive_seed


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--n-values", default="3,4")
    ap.add_argument("--alphas", default="1,0.5,0.25")
    ap.add_argument("--eps", type=float, default=0.1)
    ap.add_argument("--delta", type=float, default=0.05)
    ap.add_argument("--seeds", type=int, default=200)
    args = ap.parse_args()

    allowed = args.delta + 3 * math.sqrt(args.delta * (1 - args.delta) / args.seeds)
    out = csv.writer(sys.stdout, lineterminator="\n")
    out.writerow(["n", "alpha", "shots", "failures", "failure_rate", "allowed_rate", "worst_error"])
    for n in (int(v) for v in args.n_values.split(",")):
        for alpha in (float(v) for v in args.alphas.split(",")):
            probe = AlphaProbe(n, alpha)
            shots = plan_samples(probe, args.eps, args.delta, n)
            errors = []
            for seed in range(args.seeds):
                ch = random_channel(n, derive_seed(seed, 0))
                rec = sample_outcomes(ch, probe, shots, derive_seed(seed, 1))
                errors.append(np.abs(estimate_all_eigenvalues(rec) - ch.eigenvalues).max())
            errors = np.array(errors)
            failures = int((errors > args.eps).sum())
            out.writerow([n, alpha, shots, failures, failures / args.seeds, allowed, float(errors.max())])


if __name__ == "__main__":
    main()
