"""Sparsify random instances and tabulate witness length, attempts and error.

    python scripts/cls_witness_sizes.py --trials 20 --k-max 50 --m-max 100
"""

import argparse

import numpy as np

from lpsparse.cls_sparsifier import choose_L, sparsify
from lpsparse.rng import generator
from lpsparse.suites import random_sparsification


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--trials", type=int, default=20)
    ap.add_argument("--k-max", type=int, default=50)
    ap.add_argument("--m-max", type=int, default=100)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--p", type=float, nargs="+", default=[2, 3, 4])
    ap.add_argument("--eps", type=float, nargs="+", default=[0.5, 0.75, 1.0])
    args = ap.parse_args(argv)

    print(f"{'p':>4} {'eps':>5} {'L':>5} {'mean att':>9} {'max att':>8} {'mean err':>10} {'eps^p':>8}")
    for p in args.p:
        insts = [random_sparsification(generator(args.seed, i), p, args.k_max, args.m_max)
                 for i in range(args.trials)]
        for eps in args.eps:
            res = [sparsify(inst, eps, seed=i) for i, inst in enumerate(insts)]
            att = np.array([r.attempts for r in res])
            err = np.array([r.error_p for r in res])
            print(f"{p:>4g} {eps:>5g} {choose_L(p, eps):>5} {att.mean():>9.2f} {att.max():>8} "
                  f"{err.mean():>10.4f} {eps**p:>8.4f}")


if __name__ == "__main__":
    main()
