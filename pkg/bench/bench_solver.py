"""Compare the numba block-Thomas kernel with the numpy/LAPACK fallback.

    python bench/bench_solver.py [--n 3000] [--repeat 5]

Block sizes match the assembled systems: 1 (Galerkin/SUPG + R11), 2 (R22 or
least squares + R11) and 4 (least squares + R22).
"""
import argparse
import timeit

import numpy as np

from burgers1d import NUMBA_ENABLED, BandedMatrix, solve_block_tridiag


def make_system(n, bs, seed=0):
    rng = np.random.default_rng(seed)
    A = BandedMatrix(rng.normal(size=(n - 1, bs, bs)),
                     rng.normal(size=(n, bs, bs)) + 4 * bs * np.eye(bs),
                     rng.normal(size=(n - 1, bs, bs)))
    return A, rng.normal(size=n * bs)


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--n", type=int, default=3001, help="number of block rows")
    p.add_argument("--repeat", type=int, default=5)
    args = p.parse_args(argv)
    if not NUMBA_ENABLED:
        print("numba disabled (BURGERS1D_DISABLE_NUMBA set or numba missing); numpy only")
    backends = ["numpy"] + (["numba"] if NUMBA_ENABLED else [])
    print(f"{'bs':>3} {'backend':>8} {'best ms':>10} {'speedup':>8}")
    for bs in (1, 2, 4):
        A, b = make_system(args.n, bs)
        best = {}
        for backend in backends:
            solve_block_tridiag(A, b, backend=backend)  # compile / warm up
            number = 3
            t = min(timeit.repeat(lambda: solve_block_tridiag(A, b, backend=backend),
                                  repeat=args.repeat, number=number)) / number
            best[backend] = t
        x_ref = solve_block_tridiag(A, b, backend="numpy")
        for backend in backends:
            dev = np.abs(solve_block_tridiag(A, b, backend=backend) - x_ref).max()
            speed = best["numpy"] / best[backend]
            print(f"{bs:>3} {backend:>8} {best[backend] * 1e3:>10.3f} {speed:>7.1f}x  (max dev {dev:.1e})")


if __name__ == "__main__":
    main()
