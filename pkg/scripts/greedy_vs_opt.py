#!/usr/bin/env python3
"""Compare greedy total completion against the exact LP optimum on a corpus
of tiny random instances, and check the dual certificates along the way.

Usage: python3 scripts/greedy_vs_opt.py [--count 50] [--seed 0]
"""

import argparse
import sys
from fractions import Fraction

from coflow.certificates import build_certificate, check_certificate
from coflow.direct import greedy_schedule
from coflow.generators import random_sparse_instance
from coflow.oracle import opt_direct_fractional


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--count", type=int, default=50)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    worst = Fraction(0)
    certified = 0
    for k in range(args.count):
        n = 2 + (k % 3)
        inst = random_sparse_instance(n, Fraction(2), seed=args.seed + k)
        if inst.total_demand == 0:
            continue
        _, trace = greedy_schedule(inst)
        opt = opt_direct_fractional(inst)
        if opt > 0:
            ratio = trace.total_completion / opt
            worst = max(worst, ratio)
        cert = build_certificate(trace)
        report = check_certificate(inst, trace, cert)
        if report.ok:
            certified += 1
        print(
            f"[{k:>3}] n={n} alg={trace.total_completion} opt={opt} "
            f"ratio={float(trace.total_completion / opt) if opt else 0:.3f} "
            f"cert={'ok' if report.ok else 'FAIL'}"
        )
    print(f"\nworst ratio {float(worst):.4f} (guarantee: 16); "
          f"{certified} certificates checked out")
    return 0


if __name__ == "__main__":
    sys.exit(main())
