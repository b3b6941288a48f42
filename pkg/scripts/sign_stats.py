"""Fraction of positive A_rw eigenvalues on Erdos-Renyi graphs across seeds and densities."""
import argparse

import numpy as np

from spectral_svd import analysis as an
from spectral_svd import graph as g


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--n", type=int, default=200)
    parser.add_argument("--p", type=float, nargs="+", default=[0.03, 0.05, 0.1, 0.3])
    parser.add_argument("--seeds", type=int, default=20)
    args = parser.parse_args()

    print(f"{'p':>6} {'mean':>8} {'min':>8} {'max':>8}")
    for p in args.p:
        fr = np.array([
            an.eigen_sign_stats(g.generate("erdos_renyi", [args.n, p], seed)).positive_fraction
            for seed in range(args.seeds)
        ])
        print(f"{p:6.3f} {fr.mean():8.4f} {fr.min():8.4f} {fr.max():8.4f}")


if __name__ == "__main__":
    main()
