"""Wall-clock time and accuracy of the dense symmetric eigensolver and SVD."""
import argparse
import time

import numpy as np

from spectral_svd.linalg import residuals, svd, symmetric_evd


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("sizes", type=int, nargs="*", default=[100, 250, 500, 1000])
    parser.add_argument("--svd", action="store_true", help="also time the SVD (2N embedding)")
    args = parser.parse_args()

    rng = np.random.default_rng(0)
    for n in args.sizes:
        a = rng.standard_normal((n, n))
        m = (a + a.T) / 2
        t0 = time.perf_counter()
        dec = symmetric_evd(m, check=False)
        t_evd = time.perf_counter() - t0
        res = residuals(m, dec.eigenvalues, dec.eigenvectors).max() / np.linalg.norm(m)
        orth = np.abs(dec.eigenvectors.T @ dec.eigenvectors - np.eye(n)).max()
        line = f"N={n:5d}  evd {t_evd:7.2f}s  residual {res:.2e}  ortho {orth:.2e}"
        if args.svd:
            t0 = time.perf_counter()
            svd(a, check=False)
            line += f"  svd {time.perf_counter() - t0:7.2f}s"
        print(line)


if __name__ == "__main__":
    main()
