#!/usr/bin/env python3
"""Race the exact solvers on one seeded instance and check they agree.

Usage: python scripts/solver_race.py [--n 9] [--seed 0] [--trials 70]
"""

import argparse
import time
from math import comb

from chainfold import solver, verify
from chainfold.constructions import powerset


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--n", type=int, default=9)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--trials", type=int, default=None,
                        help="split samples (default: exhaustive)")
    args = parser.parse_args()

    inst = solver.random_instance(args.n, args.seed)
    trials = args.trials or comb(args.n, args.n // 2)
    block_size, families = verify.framework_plan(args.n)
    runs = [
        ("brute", lambda: solver.brute_force(inst)),
        ("held-karp", lambda: solver.held_karp(inst)),
        ("restricted(powerset)", lambda: solver.restricted_dp(inst, powerset(args.n))),
        ("divide&conquer d=1", lambda: solver.gurevich_shelah(inst, 1)),
        ("divide&conquer d=2", lambda: solver.gurevich_shelah(inst, 2)),
        ("random-split", lambda: solver.random_split_solver(inst, 0.445, trials, args.seed)),
        ("framework", lambda: solver.framework_solver(inst, block_size, families)),
    ]
    print(f"n = {args.n}, seed = {args.seed}, split trials = {trials}")
    values = set()
    for name, fn in runs:
        t0 = time.time()
        sol = fn()
        dt = (time.time() - t0) * 1000
        values.add(sol.value)
        entries = f" table={sol.table_entries}" if sol.table_entries else ""
        print(f"  {name:<22s} value={sol.value}  {dt:8.1f} ms{entries}")
    print("all agree" if len(values) == 1 else f"DISAGREEMENT: {sorted(values)}")


if __name__ == "__main__":
    main()
