#!/usr/bin/env python3
"""Stress the two apparency decision procedures against each other.

The determinant route evaluates resonance-matrix determinant orders; the
series oracle actually runs the recursion and looks at the obstructions.
They must never disagree.  Disagreements print immediately and make the
script exit nonzero.
"""

import argparse
import random
import sys
import time

from fuchskit.algebra import scalar
from fuchskit.frobenius import (
    annihilator_from_solutions,
    apparent_check,
    frobenius_oracle,
)
from fuchskit.operator import DomainError
from fuchskit.sampling import prescribed_exponent_operator, random_polynomial

LADDERS = {2: [(2, 0), (3, 0), (3, 1), (4, 1)],
           3: [(3, 1, 0), (4, 2, 0), (4, 2, 1), (5, 3, 1)]}


def draw(rng):
    m = rng.choice((2, 3))
    if rng.random() < 0.4:
        degs = sorted(rng.sample(range(m + 2), m))
        basis = []
        for d in degs:
            cs = [scalar(0)] * d + [scalar(1)]
            if d and rng.random() < 0.5:
                lower = random_polynomial(rng, d - 1, max_num=3)
                for i, c in enumerate(lower.coeffs):
                    cs[i] = cs[i] + c
            basis.append(cs)
        op = annihilator_from_solutions(basis)
        if op.order != m or not op.apparent_points:
            raise DomainError("degenerate draw")
        return op, op.apparent_points[0]
    return prescribed_exponent_operator(rng, m, rng.choice(LADDERS[m])), scalar(0)


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--count", type=int, default=200)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    rng = random.Random(args.seed)
    t0 = time.monotonic()
    done = apparent = disagreements = 0
    while done < args.count:
        try:
            op, point = draw(rng)
        except DomainError:
            continue
        a = apparent_check(op, point).is_apparent
        b = frobenius_oracle(op, point).is_apparent
        if a != b:
            disagreements += 1
            print(f"DISAGREE det={a} series={b} on {op}")
        apparent += a
        done += 1
    dt = time.monotonic() - t0
    print(f"{done} instances, {apparent} apparent, "
          f"{disagreements} disagreements, {dt:.1f}s")
    return 1 if disagreements else 0


if __name__ == "__main__":
    sys.exit(main())
