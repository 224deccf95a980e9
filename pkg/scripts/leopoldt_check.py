"""L_p(1, chi) against the class number formula side for many (D, p)."""

import argparse

from starkcl.classgroup import class_group
from starkcl.lfunction import fit_series, leopoldt_rhs, quadratic_character
from starkcl.quadfield import chi, make_field
from starkcl.stark import fundamental_radicands


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("limit", type=int, nargs="?", default=100)
    ap.add_argument("--precision", type=int, default=32)
    ap.add_argument("--primes", type=int, nargs="+", default=[3, 5, 7, 11, 13])
    args = ap.parse_args()
    N = args.precision
    worst = N
    for D in fundamental_radicands(args.limit):
        K = make_field(D)
        h = class_group(K.delta).h
        for p in args.primes:
            if K.delta % p == 0:
                continue
            lhs = fit_series(quadratic_character(K), p, N=N).evaluate(1)
            d = lhs - leopoldt_rhs(K, p, h, N)
            agree = d.absprec if d.is_zero else d.val
            worst = min(worst, agree)
            kind = "split" if chi(K.delta, p) == 1 else "inert"
            print(f"D={D:<5} p={p:<3} {kind:<6} h={h:<3} agreement {agree} digits")
    print(f"worst agreement: {worst} of {N}")


if __name__ == "__main__":
    main()
