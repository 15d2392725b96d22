#!/usr/bin/env python3
"""Sweep the three worst-case regimes and print makespans vs their bounds.

Usage: python3 scripts/regime_sweep.py [--out results.csv]
"""

import argparse
import sys
from fractions import Fraction

from coflow.experiment import ExperimentConfig, emit_table1, run_experiment, write_csv


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", help="also write the raw rows as CSV")
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    configs = [
        # B = 2: hypercube territory, makespan log2 n. The auto dispatcher
        # VLB-lifts (n^3 sub-commodities), so it only runs at small n here.
        ExperimentConfig(
            n_values=(4, 16, 64, 256), load_values=(Fraction(2),),
            algorithms=("hypercube",), seed=args.seed,
        ),
        ExperimentConfig(
            n_values=(4, 16), load_values=(Fraction(2),),
            algorithms=("auto",), seed=args.seed,
        ),
        # 2 < B <= n: elementary basis, makespan d (n^(1/d) - 1) ceil(B/n^(1/d)).
        ExperimentConfig(
            n_values=(16, 81, 256), load_values=(Fraction(4),),
            algorithms=("elementary-basis",), seed=args.seed,
        ),
        # B > n: round robin, makespan (n-1) ceil(B/n).
        ExperimentConfig(
            n_values=(4, 8), load_values=(Fraction(64),),
            algorithms=("round-robin",), seed=args.seed,
        ),
    ]
    rows = []
    for cfg in configs:
        rows.extend(run_experiment(cfg))
    for row in rows:
        print(
            f"n={row['n']:>4} B={row['B']:>3} {row['algorithm']:<17} "
            f"feasible={row['feasible']} makespan={row['makespan']:>4} "
            f"lb={row['lower_bound_max']:>3} ratio={row['ratio_makespan']}"
        )
    print()
    print(emit_table1(rows))
    if args.out:
        write_csv(rows, args.out)
        print(f"\nwrote {len(rows)} rows to {args.out}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
