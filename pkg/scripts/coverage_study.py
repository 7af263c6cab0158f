#!/usr/bin/env python3
"""Confidence interval coverage study.

Builds a synthetic table with a known number of matching rows, repeats the
full assessment over many master seeds, and reports how often the interval
contains the true count. With alpha=0.05 the nominal level is 90%; small
sample sizes trade some coverage for speed.
"""

import argparse
import time

import numpy as np

from qbs.aqp import Condition, QuerySpec, TableData, assess
from qbs.bootstrap import MODES, MODE_ORACLE


def build_table(total_rows: int, matching: int, shuffle_seed: int) -> TableData:
    flags = np.zeros(total_rows, dtype=int)
    flags[:matching] = 1
    np.random.Generator(np.random.PCG64(shuffle_seed)).shuffle(flags)
    return TableData(("id", "flag"), tuple((i, int(f)) for i, f in enumerate(flags)))


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--rows", type=int, default=10000)
    parser.add_argument("--matching", type=int, default=5000)
    parser.add_argument("-n", type=int, default=8, help="sample size (power of two)")
    parser.add_argument("-B", type=int, default=1000)
    parser.add_argument("--alpha", type=float, default=0.05)
    parser.add_argument("--seeds", type=int, default=100, help="number of master seeds")
    parser.add_argument("--mode", choices=sorted(MODES), default=MODE_ORACLE)
    args = parser.parse_args()

    table = build_table(args.rows, args.matching, shuffle_seed=6)
    query = QuerySpec("COUNT", (Condition("flag", "=", 1),))

    hits = 0
    degenerate = 0
    started = time.perf_counter()
    for seed in range(args.seeds):
        report = assess(
            table, query, n=args.n, B=args.B, alpha=args.alpha, mode=args.mode, seed=seed
        )
        hits += report.ci_lower <= args.matching <= report.ci_upper
        degenerate += report.se_b == 0.0
    elapsed = time.perf_counter() - started

    print(
        f"mode={args.mode} n={args.n} B={args.B} alpha={args.alpha} "
        f"true_count={args.matching}"
    )
    print(
        f"coverage: {hits}/{args.seeds} = {hits / args.seeds:.1%} "
        f"(nominal {1 - 2 * args.alpha:.0%}); {degenerate} degenerate samples; "
        f"{elapsed:.1f}s"
    )


if __name__ == "__main__":
    main()
