"""Measure how close Rademacher moments come to the Khintchine constants.

For each p, reports the worst S(p)^(1/p) / ||c|| over random coefficient
vectors next to the sharp constant B_p and the cruder sqrt(p), then the
exact ratio constant C(k, N) next to (k/2)^k.

    python scripts/khintchine_constants.py --trials 200 --n-max 14
"""

import argparse
import math
from fractions import Fraction

from lpsparse.khintchine import haagerup_constant, khintchine_sum_exhaustive, multinomial_ratio_max
from lpsparse.rng import generator
from lpsparse.suites import random_rademacher


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--trials", type=int, default=200)
    ap.add_argument("--n-max", type=int, default=14)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--p", type=float, nargs="+", default=[1, 2, 3, 4, 6, 8, 12])
    args = ap.parse_args(argv)

    vecs = [random_rademacher(generator(args.seed, i), args.n_max) for i in range(args.trials)]
    # equal coefficients approach the Gaussian extremal case
    vecs.append([1.0] * args.n_max)

    print(f"{'p':>6} {'max S^(1/p)/|c|':>16} {'B_p':>10} {'sqrt(p)':>10}")
    for p in args.p:
        worst = max(khintchine_sum_exhaustive(c, p) ** (1 / p) / math.hypot(*c) for c in vecs)
        print(f"{p:>6g} {worst:>16.6f} {haagerup_constant(p):>10.6f} {math.sqrt(p):>10.6f}")

    print()
    print(f"{'k':>3} {'C(k, N)':>12} {'(k/2)^k':>10}")
    for k in range(1, 7):
        C = multinomial_ratio_max(k, args.n_max)
        print(f"{k:>3} {str(C):>12} {str(Fraction(k, 2) ** k):>10}")


if __name__ == "__main__":
    main()
