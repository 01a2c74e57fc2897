"""Table of solver / closed-form ratios over a grid of genera and (d1, d2)."""

import argparse

from rcsiegel.laplace import OperatorParams
from rcsiegel.rcsolve import (choie_eholzer_n2, closed_v2, closed_v4, cohen_n1, proportional_equal,
                              solve_recursion)


def rows(max_n):
    for n in range(1, max_n + 1):
        for d1, d2 in [(n, n), (2 * n, 2 * n), (2 * n, 2 * n + 4), (2 * n + 1, 2 * n + 2)]:
            yield "v2", n, 2, d1, d2, closed_v2(n, d1, d2)
            yield "v4", n, 4, d1, d2, closed_v4(n, d1, d2)
    for v in range(1, 7):
        for d1, d2 in [(8, 12), (4, 4), (2, 6)]:
            yield "cohen", 1, 2 * v, d1, d2, cohen_n1(v, d1, d2)
        for d1, d2 in [(4, 4), (6, 8), (5, 9)]:
            yield "genus2", 2, 2 * v, d1, d2, choie_eholzer_n2(v, d1, d2)


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--max-n", type=int, default=4)
    args = ap.parse_args()
    print(f"{'form':<14}{'n':>3}{'v':>4}{'d1':>4}{'d2':>4}  ratio")
    for kind, n, v, d1, d2, ref in rows(args.max_n):
        c = proportional_equal(solve_recursion(OperatorParams(n, v, d1, d2)), ref)
        print(f"{kind:<14}{n:>3}{v:>4}{d1:>4}{d2:>4}  {'MISMATCH' if c is None else c}")


if __name__ == "__main__":
    main()
