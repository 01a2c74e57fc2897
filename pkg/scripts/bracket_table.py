"""Genus-one brackets of Eisenstein series against the known cusp forms."""

import argparse

from rcsiegel.brackets import delta, eisenstein, proportionality, rc_bracket_genus1


def cusp_basis_vector(weight, N):
    # dim S_k = 1 for k in {12, 16, 18, 20, 22, 26}: delta * E_{k-12}
    if weight == 12:
        return delta(N)
    if weight - 12 in (4, 6, 8, 10, 14):
        return delta(N) * eisenstein(weight - 12, N)
    return None


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--terms", type=int, default=30)
    args = ap.parse_args()
    N = args.terms
    print(f"{'k':>3}{'l':>3}{'t':>3}{'weight':>7}  a(0)  ratio to delta*E")
    for k, l in [(4, 6), (4, 4), (6, 6), (4, 8), (6, 8)]:
        for t in range(0, 6):
            b = rc_bracket_genus1(eisenstein(k, N), eisenstein(l, N), t)
            ref = cusp_basis_vector(b.weight, N)
            ratio = proportionality(b, ref) if ref is not None else "-"
            print(f"{k:>3}{l:>3}{t:>3}{b.weight:>7}  {str(b[0]):>4}  {ratio}")


if __name__ == "__main__":
    main()
