"""Sweep every k on a graph and tabulate the optimality check of the
spectral-clustering reconstruction.

    python scripts/theorem2_sweep.py barbell 5,5
    python scripts/theorem2_sweep.py erdos_renyi 30,0.2 --seed 4
"""
import argparse

from spectral_svd import analysis as an
from spectral_svd import graph as g


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("family")
    parser.add_argument("params", help="comma-separated generator parameters")
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--tolerance", type=float, default=an.DEFAULT_TOLERANCE)
    args = parser.parse_args()

    params = [float(p) if "." in p else int(p) for p in args.params.split(",")]
    graph = g.generate(args.family, params, args.seed)
    print(f"{'k':>3} {'cond':>5} {'tie':>5} {'sc_error':>12} {'best_error':>12} verdict")
    for rep in an.theorem2_sweep(graph, args.tolerance):
        flag = "" if rep.has_abs_tie_at_k or (rep.verdict is an.Verdict.EQUAL) == rep.condition_holds else "  <- biconditional fails"
        print(f"{rep.k:>3} {str(rep.condition_holds):>5} {str(rep.has_abs_tie_at_k):>5} "
              f"{rep.sc_reconstruction_error:12.4e} {rep.best_error:12.4e} {rep.verdict.value}{flag}")


if __name__ == "__main__":
    main()
