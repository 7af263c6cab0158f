#!/usr/bin/env python3
"""Resampler demo: 1024 shots over an 8-cell array with alternating bits.

Every odd address stores 1 and every even address stores 0, so the data
qubit column separates the two halves of the histogram cleanly.
"""

import argparse

from qbs.circuit import register_value
from qbs.qram import BitDataArray, build_qsa
from qbs.rng import fresh_seed
from qbs.sim import sample


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--shots", type=int, default=1024)
    parser.add_argument("--seed", type=int, default=None)
    parser.add_argument(
        "--bits",
        type=int,
        nargs="+",
        default=[0, 1, 0, 1, 0, 1, 0, 1],
        help="stored bit per address (power-of-two count)",
    )
    args = parser.parse_args()
    seed = args.seed if args.seed is not None else fresh_seed()

    data = BitDataArray(tuple(args.bits))
    a = data.address_width
    counts = sample(build_qsa(data), shots=args.shots, seed=seed)

    print(f"shots={args.shots} seed={seed} addresses={len(data.bits)}")
    print(f"{'address':>8} {'decimal':>8} {'data':>5} {'count':>6}")
    rows = sorted(
        (register_value(int(bits, 2), range(0, a)), bits, count)
        for bits, count in counts.entries.items()
    )
    mismatches = 0
    for address, bits, count in rows:
        data_bit = register_value(int(bits, 2), range(a, a + 1))
        mismatches += data_bit != data.bits[address]
        print(f"{format(address, f'0{a}b'):>8} {address:>8} {data_bit:>5} {count:>6}")
    print(
        "data column matches the stored array"
        if mismatches == 0
        else f"{mismatches} mismatching rows"
    )


if __name__ == "__main__":
    main()
