#!/usr/bin/env python3
"""Phase distributions of a coherent signal under the three measurement
scenarios (ideal detectors, squeezing compensation, beam-splitter balancing)
for one unequal pair configuration, with their minimum windowed variances.
"""

import argparse
import pathlib

import numpy as np

from eightport import fock
from eightport.compensation import compensate
from eightport.phase import min_variance, phase_distribution, phase_matrix
from eightport.smearing import DiagonalState, geometric_state


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--e13", type=float, default=0.5)
    ap.add_argument("--e24", type=float, default=1.0)
    ap.add_argument("--amplitude", type=float, default=1.0)
    ap.add_argument("--cutoff", type=int, default=64)
    ap.add_argument("--out", default=str(pathlib.Path(__file__).parent / "phase_dist.csv"))
    args = ap.parse_args()

    rho = fock.projector(fock.coherent_state(args.amplitude, args.cutoff))
    rep = compensate(args.e13, args.e24)
    generators = {
        "ideal": DiagonalState(lambdas=np.eye(1, args.cutoff, 0).ravel()),
        "squeeze": geometric_state(rep.eps_eff, args.cutoff),
        "beamsplitter": geometric_state(min(args.e13, args.e24), args.cutoff),
    }
    dists = {}
    for label, gen in generators.items():
        dist = phase_distribution(rho, phase_matrix(gen, 32))
        v, phi = min_variance(dist)
        dists[label] = dist
        print(f"{label:>13}: var_min = {v:.6f} at alpha = {phi:.4f}")

    grid = dists["ideal"].grid
    with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("alpha," + ",".join(f"p_{k}" for k in generators) + "\n")
        for i in range(grid.size):
            row = [grid[i]] + [dists[k].density[i] for k in generators]
            fh.write(",".join(f"{v:.12g}" for v in row) + "\n")
    print(f"wrote {args.out}")


if __name__ == "__main__":
    main()
