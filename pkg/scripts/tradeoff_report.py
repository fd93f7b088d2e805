#!/usr/bin/env python3
"""Print the headline tradeoff numbers and the curve envelope summary.

Usage: python scripts/tradeoff_report.py [--grid N] [--csv FILE]
"""

import argparse

from chainfold import analysis


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--grid", type=int, default=512)
    parser.add_argument("--csv", help="also write the full curve here")
    args = parser.parse_args()

    pts = analysis.reference_points()
    print("anchor points (x = lg S, P = 2^lgP):")
    for name, (x, lg_p) in sorted(pts.items()):
        s, p = 2**x, 2**lg_p
        print(f"  {name:<14s} S = {s:.6f}  P = {p:.6f}  S^2 P = {s * s * p:.6f}")

    print("\nsingle-point products:")
    _, lg_p = analysis.banded_bounds(analysis.SQRT2_PARAMS)
    print(f"  sqrt(2)-space banded family: S T = {2 * 2**lg_p:.6f}  (< 3.572)")
    lg_s, lg_p = analysis.core_bounds(analysis.CORE_PARAMS)
    print(f"  self-intersecting family:   S^2 P = {2 ** (2 * lg_s + lg_p):.6f}  (< 3.864)")
    print(f"  low-space interpolation constant: {analysis.interpolation_constant():.4f}")

    rows = analysis.emit_curve(args.grid)
    best = min(rows, key=lambda r: r.st_upper)
    print(f"\ncurve over {len(rows)} grid points:")
    print(f"  best S T = {best.st_upper:.6f} at S = {best.s:.6f} ({best.source})")
    interior = [r for r in rows if 2 < r.t_upper < 4]
    print(f"  max interior S T = {max(r.st_upper for r in interior):.6f} (< 4)")
    print(f"  min lower-bound S T = {min(r.st_lower for r in rows):.6f} (>= 3)")

    if args.csv:
        analysis.write_curve_csv(rows, args.csv)
        print(f"\ncurve written to {args.csv}")


if __name__ == "__main__":
    main()
