#!/usr/bin/env python3
"""Tabulate positive roots of a trinomial family c1 x^e1 + c2 x^e2 = 1.

Sweeps the coefficients along c1 = c2 = c and prints, for each c, the
number of sign changes, the discriminant (when the exponents make the
root count conditional), and all positive roots with their residuals.
With the default exponents (1, -1) the family is the quadratic
c x^2 - x + c = 0, and the root count flips at c = 1/2.

Usage:
    python3 scripts/trinomial_table.py --e1 1 --e2 -1
    python3 scripts/trinomial_table.py --e1 3 --e2 -2 --steps 12
"""

import argparse
import sys
from fractions import Fraction

from polycone import TrinomialProblem, solve_trinomial


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--e1", type=Fraction, default=Fraction(1))
    ap.add_argument("--e2", type=Fraction, default=Fraction(-1))
    ap.add_argument("--steps", type=int, default=9)
    args = ap.parse_args(argv)

    print("\t".join(["c", "sign_changes", "discriminant", "roots", "residuals"]))
    for i in range(1, args.steps + 1):
        c = Fraction(i, args.steps + 1)
        prob = TrinomialProblem(args.e1, args.e2, c, c)
        sol = solve_trinomial(prob)
        disc = "-" if sol.discriminant is None else f"{float(sol.discriminant):.6g}"
        roots = ", ".join(
            f"{float(r):.9g}" + (f" (x{m})" if m > 1 else "")
            for r, m in sol.roots
        ) or "none"
        resid = ", ".join(f"{prob.residual(float(r)):.2g}" for r, _ in sol.roots) or "-"
        print(f"{c}\t{prob.sign_changes()}\t{disc}\t{roots}\t{resid}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
