#!/usr/bin/env python3
"""Measure concrete systems against the asymptotic formulas.

Two tables: the finite-size gap of the banded family on the sqrt(2)-space
parameter ray, and the chain-density race between that family and the
height-two tower of cubes (the conjectured-extremal bucket order, which the
banded family overtakes already at desk-scale n).

Usage: python scripts/finite_size_scan.py [--sizes 8,12,16,20,24]
"""

import argparse

from chainfold import analysis


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--sizes", default="8,12,16,20,24")
    args = parser.parse_args()
    sizes = tuple(int(t) for t in args.sizes.split(","))

    print("banded family on the sqrt(2)-space ray  (formula: lg S = 0.5,"
          f" lg P = {analysis.banded_bounds(analysis.SQRT2_PARAMS)[1]:.6f})")
    print(f"{'n':>4} {'lg S':>10} {'lg P':>10} {'dS':>10} {'dP':>10}")
    for r in analysis.finite_size_rows(sizes):
        print(
            f"{r['n']:>4} {r['lg_s']:>10.6f} {r['lg_p']:>10.6f} "
            f"{r['margin_s']:>10.6f} {r['margin_p']:>10.6f}"
        )

    print("\nchain-density race (P values; smaller is denser):")
    print(f"{'n':>4} {'tower P':>10} {'banded P':>10} {'formula P':>10}")
    for r in analysis.jlr_rows(sizes):
        print(
            f"{r['n']:>4} {r['tower_p']:>10.6f} {r['banded_p']:>10.6f} "
            f"{r['formula_p']:>10.6f}"
        )
    print("\ntower P climbs toward 2; the banded family stays denser and the")
    print("formula value sits between them, so the bucket-order family is not")
    print("extremal at these sizes.")


if __name__ == "__main__":
    main()
