#!/usr/bin/env python3
"""Print the accessory-dimension grid e(m, n) and its doubling c = 2e.

The table is exact integer arithmetic; the final column re-checks that
adding apparent points never moves the net count.
"""

import argparse

from fuchskit.moduli import dimensions


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--max-order", type=int, default=5)
    ap.add_argument("--max-points", type=int, default=6)
    args = ap.parse_args()

    header = f"{'m':>3} {'n':>3} {'params':>7} {'conds':>6} {'e':>4} {'c':>4}  N-blind"
    print(header)
    print("-" * len(header))
    for m in range(1, args.max_order + 1):
        for n in range(2, args.max_points + 1):
            rep = dimensions(m, n)
            blind = all(
                dimensions(m, n, N).parameter_count
                - dimensions(m, n, N).condition_count == rep.net_dimension
                for N in range(5))
            print(f"{m:>3} {n:>3} {rep.parameter_count:>7} "
                  f"{rep.condition_count:>6} {rep.net_dimension:>4} "
                  f"{rep.doubled_dimension:>4}  {'yes' if blind else 'NO'}")


if __name__ == "__main__":
    main()
