#!/usr/bin/env python3
"""Convergence of truncated spectral sums for the two quarter-scale IFS measures.

For each system prints, per depth n, the worst deficit 1 - S_n(t) over the
21-point grid on [0, 1], its ratio to the previous depth, and the largest
value seen (which must stay under the Bessel bound 1 + 1e-6).

    python scripts/convergence_study.py --max-depth 14
"""
import argparse

import numpy as np

from spectrapair.ifs import gamma_slice, spectral_sum

SYSTEMS = {"B={0,2}": (4, (0, 2)), "B={0,10}": (4, (0, 10))}


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--max-depth", type=int, default=12)
    ap.add_argument("--factors-K", type=int, default=40)
    ap.add_argument("--points", type=int, default=21)
    args = ap.parse_args()
    ts = np.linspace(0.0, 1.0, args.points)
    for name, (R, B) in SYSTEMS.items():
        print(f"# R={R} {name} L={{0,1}} K={args.factors_K}")
        print(f"{'n':>3} {'|Gamma_n|':>10} {'max deficit':>14} {'ratio':>8} {'max sum':>20}")
        prev = None
        for n in range(4, args.max_depth + 1):
            g = gamma_slice(R, (0, 1), n)
            sums = np.array([spectral_sum(R, B, g, t, args.factors_K) for t in ts])
            deficit = float(np.max(1.0 - sums))
            ratio = f"{deficit / prev:.3f}" if prev else ""
            print(f"{n:>3} {len(g):>10} {deficit:>14.3e} {ratio:>8} {sums.max():>20.15f}")
            prev = deficit
        print()


if __name__ == "__main__":
    main()
