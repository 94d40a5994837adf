"""Lower and upper sample-complexity bounds over an (n, k, w) grid, as CSV."""

import argparse
import csv
import sys

from pauliprobe.bounds import BoundQuery, lower_bound_N, upper_bound_N


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--max-n", type=int, default=12)
    ap.add_argument("--eps", type=float, default=0.1)
    ap.add_argument("--delta", type=float, default=0.05)
    args = ap.parse_args()

    out = csv.writer(sys.stdout, lineterminator="\n")
    out.writerow(["n", "k", "w", "lower_N", "upper_N", "gap"])
    for n in range(1, args.max_n + 1):
        for k in range(n + 1):
            for w in range(1, n + 1):
                q = BoundQuery(n, k, w, args.eps, args.delta)
                lo, hi = lower_bound_N(q), upper_bound_N(q)
                out.writerow([n, k, w, repr(lo), repr(hi), repr(hi / lo)])


if __name__ == "__main__":
    main()
