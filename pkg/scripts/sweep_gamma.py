#!/usr/bin/env python3
"""Sweep the pair-efficiency plane and record the squeezing-over-attenuation
gain gamma = eps_eff / min(e13, e24), plus the solved squeezing parameter.

Writes sweep.csv next to this script by default.
"""

import argparse
import pathlib

from eightport.compensation import sweep


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--grid", type=int, default=200)
    ap.add_argument("--out", default=str(pathlib.Path(__file__).parent / "sweep.csv"))
    args = ap.parse_args()

    res = sweep(n=args.grid, lo=0.01, hi=1.0)
    with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("e13,e24,a,eps_eff,gamma\n")
        for row in res["rows"]:
            fh.write(",".join(f"{v:.12g}" for v in row) + "\n")
    print(f"wrote {len(res['rows'])} rows to {args.out}")
    print(f"max gamma = {res['max_gamma']:.6f} at {res['argmax']}")


if __name__ == "__main__":
    main()
