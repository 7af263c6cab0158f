#!/usr/bin/env python3
"""Counter demo: total the set bits of a control pattern in one shot.

The default pattern 00011111 (five ones) decodes to 0101. Pass
--exhaustive to sweep every pattern instead.
"""

import argparse

from qbs.counter import CounterSpec, measure_counter


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--controls", default="00011111", help="control bits, MSB first")
    parser.add_argument("--exhaustive", action="store_true")
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args()

    p = len(args.controls)
    spec = CounterSpec.for_controls(p)

    if args.exhaustive:
        wrong = 0
        for pattern in range(1 << p):
            _, value = measure_counter(spec, pattern, seed=args.seed)
            if value != bin(pattern).count("1"):
                wrong += 1
        print(f"{(1 << p) - wrong}/{1 << p} correct (p={p}, q={spec.q})")
        return

    pattern = int(args.controls, 2)
    full, value = measure_counter(spec, pattern, seed=args.seed)
    print(f"p={p} q={spec.q} seed={args.seed}")
    print(f"full bitstring measured  {full}")
    print(f"control bits measured    {full[spec.q:]}")
    print(f"counter bits measured    {full[: spec.q]}  -> {value}")


if __name__ == "__main__":
    main()
