#!/usr/bin/env python3
"""Sample the multistationarity region of the autocatalytic network.

Solves the trinomial-equation / tetranomial-inequality system, samples
verified solutions, and prints one row per sample with the rate constant
k1 and the total concentration xbar = x1 + x2 — the classic picture of
the parameter region where the network admits several steady states.

Usage:
    python3 scripts/multistationarity_region.py --count 400 --seed 7
    python3 scripts/multistationarity_region.py --plot region.png
"""

import argparse
import sys

from polycone import parse_system, reduce_system, sample_solutions, solve_on_slice


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--path", default="systems/multistationarity.sys")
    ap.add_argument("--count", type=int, default=400)
    ap.add_argument("--seed", type=int, default=7)
    ap.add_argument("--plot", metavar="PNG", help="write a scatter plot")
    args = ap.parse_args(argv)

    with open(args.path, encoding="utf-8") as fh:
        sf = parse_system(fh.read())
    red = reduce_system(sf.system, sf.simplex)
    sol = solve_on_slice(red)
    (branch,) = sol.branches
    print(f"# freedom {red.freedom}; free coordinates {', '.join(branch.free)}")
    for sym, expr in branch.solved:
        print(f"# {sym} = {expr}")

    pts = sample_solutions(red, sol, count=args.count, seed=args.seed)
    names = red.system.variables
    idx = {v: i for i, v in enumerate(names)}
    print("\t".join(["k1", "xbar", "defect"]))
    rows = []
    for pt in pts:
        k1 = float(pt.x[idx["k1"]])
        xbar = float(pt.x[idx["x1"]]) + float(pt.x[idx["x2"]])
        rows.append((k1, xbar))
        print(f"{k1:.9g}\t{xbar:.9g}\t{pt.max_defect:.3g}")

    if args.plot:
        import matplotlib

        matplotlib.use("Agg")
        import matplotlib.pyplot as plt

        fig, ax = plt.subplots(figsize=(5, 4))
        ax.scatter([r[0] for r in rows], [r[1] for r in rows], s=6, alpha=0.6)
        ax.set_xlabel("k1")
        ax.set_ylabel("xbar = x1 + x2")
        ax.set_title("sampled multistationarity region")
        fig.tight_layout()
        fig.savefig(args.plot, dpi=150)
        print(f"# wrote {args.plot}", file=sys.stderr)
    return 0


if __name__ == "__main__":
    sys.exit(main())
