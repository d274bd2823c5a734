#!/usr/bin/env python3
"""Reduce a system file and print its structure and parametrization.

Loads a .sys file, reduces it over its stored (or standard) slice, and
prints the class structure, the dependency count, the binomial conditions,
and — once the conditions are solved — the explicit description of the
positive solution set.

Usage:
    python3 scripts/reduce_and_parametrize.py [systems/two_component.sys]
"""

import argparse
import sys

from polycone import (
    binomial_conditions,
    describe_solution_set,
    parse_system,
    reduce_system,
    solve_on_slice,
)


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument(
        "path",
        nargs="?",
        default="systems/two_component.sys",
        help="system file to reduce",
    )
    args = ap.parse_args(argv)

    with open(args.path, encoding="utf-8") as fh:
        sf = parse_system(fh.read())
    system = sf.system
    red = reduce_system(system, sf.simplex)

    print(f"variables      : {', '.join(system.variables)}")
    print(f"monomials      : {system.m} in {system.ell} class(es)")
    print(f"difference dim : {red.difference_dim}")
    print(f"freedom        : {red.freedom}")
    print(f"generic        : {'yes' if red.is_generic else 'no'}")

    conds = binomial_conditions(red)
    if conds:
        print("\nbinomial conditions on the slice:")
        for c in conds:
            print(f"  {c}")
        sol = solve_on_slice(red)
        for i, branch in enumerate(sol.branches):
            print(f"\nbranch {i} (path {', '.join(branch.path) or '-'}):")
            for sym, expr in branch.solved:
                print(f"  {sym} = {expr}")
            for sym, val in branch.fixed:
                print(f"  {sym} = {val}")
            if branch.free:
                print(f"  free: {', '.join(branch.free)}")
            for c in branch.region:
                print(f"  where {c}")
            for r in branch.residual:
                print(f"  residual {r}")
    else:
        print("\nno conditions remain; every slice point lifts to a solution")

    desc = describe_solution_set(red)
    print("\nsolution set over the slice coordinates:")
    print(desc)
    return 0


if __name__ == "__main__":
    sys.exit(main())
