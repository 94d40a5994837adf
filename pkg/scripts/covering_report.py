"""Greedy stabilizer covers for every (n, w) up to a size limit, with their size bounds."""

import argparse
import csv
import sys

from pauliprobe.covering import cn_upper_bound, greedy_cover, measured_sigma, sigma_formula, uniform_family, verify_covering
from pauliprobe.pauli import count_paulis_of_weight


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--max-n", type=int, default=4)
    ap.add_argument("--k", type=int, default=0)
    ap.add_argument("--argmax", action="store_true")
    args = ap.parse_args()

    out = csv.writer(sys.stdout, lineterminator="\n")
    out.writerow(["n", "k", "w", "family_size", "sigma_measured", "sigma_formula", "exact", "greedy_size", "cn_bound", "coverage"])
    for n in range(max(1, args.k), args.max_n + 1):
        for w in range(1, n + 1):
            fam = uniform_family(n, args.k, w)
            sigma = measured_sigma(next(iter(fam)), w)
            formula, exact = sigma_formula(n, args.k, w)
            cover = greedy_cover(n, args.k, w, argmax=args.argmax)
            bound = cn_upper_bound(count_paulis_of_weight(n, w), sigma)
            frac = verify_covering(cover).covered_fraction
            out.writerow([n, args.k, w, len(fam), sigma, formula, exact, len(cover.groups), bound, frac])


if __name__ == "__main__":
    main()
