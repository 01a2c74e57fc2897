"""Plausible formula variants checked against the Laplacian itself.

  * the coefficient recursion with alternate pair-sum signs vs the derived one;
  * the genus-2 neighbour relations on the product-formula coefficients;
  * the genus-2 mixed vector construction with its two pairings of S, S'.
"""

from rcsiegel.laplace import OperatorParams, structural_defect
from rcsiegel.rcsolve import genus2_product_table, neighbour_relation_failures, solve_recursion
from rcsiegel.vectorops import VecPoly, compare_explicit_42, harmonicity_report, mixed_generating


def recursion():
    print("coefficient recursion: structural Laplacian terms left over")
    for n, v, d1, d2 in [(1, 4, 4, 6), (2, 4, 4, 4), (2, 6, 6, 8), (3, 4, 6, 6)]:
        p = OperatorParams(n, v, d1, d2)
        row = []
        for variant in ("alternate", "derived"):
            expr = solve_recursion(p, check=False, variant=variant)
            row.append(len(structural_defect(expr, d1, d2)))
        print(f"  n={n} v={v} d=({d1},{d2})  alternate: {row[0]:3d}  derived: {row[1]:3d}")


def neighbour_relations():
    print("genus-2 neighbour relations: failing positions")
    for v in range(1, 6):
        t = genus2_product_table(v, 6, 8)
        print(f"  v={v}  with p+1: {len(neighbour_relation_failures(t, 6, 8)):3d}"
              f"  with 2v-p-1: {len(neighbour_relation_failures(t, 6, 8, p_factor='2v-p-1')):3d}")


def mixed():
    print("mixed (m+2, 2) family: all components harmonic?")
    for m in (0, 2, 4):
        for d1, d2 in [(6, 6), (6, 8)]:
            res = []
            for pairing in ("same-side", "cross"):
                vp = VecPoly.from_generating(mixed_generating(m, d1, d2, pairing=pairing), 2, m, 2)
                res.append(all(harmonicity_report(vp, d1, d2).values()))
            print(f"  m={m} d=({d1},{d2})  same-side pairing: {res[0]!s:5}  cross pairing: {res[1]}")
    for d1, d2 in [(4, 4), (6, 8), (5, 9)]:
        print(f"  m=2 coefficient table, d=({d1},{d2}): {compare_explicit_42(d1, d2)}")


if __name__ == "__main__":
    recursion()
    neighbour_relations()
    mixed()
