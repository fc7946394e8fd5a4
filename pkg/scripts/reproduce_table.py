#!/usr/bin/env python3
"""Maximum heights tau_n and their degrees mu_n, cross-checked three ways.

For each n the streamed value is compared with the height of the
determinant expansion (n <= 8) and with an exhaustive census of all 3^n
entry vectors (n <= --census-max).
"""
import argparse
import time

from bohemian_uht.charpoly import leibniz_oracle
from bohemian_uht.core import ToeplitzSpec, height
from bohemian_uht.maxheight import brute_force_max_height_census, count_max_height, tau_mu_stream


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--n-max", type=int, default=10)
    ap.add_argument("--census-max", type=int, default=10)
    ap.add_argument("--workers", type=int, default=1)
    args = ap.parse_args()

    print(f"{'n':>3} {'tau':>8} {'mu':>3} {'leibniz':>10} {'census tau':>10} {'#max':>6} {'2*3^mu':>6}")
    for r in tau_mu_stream(args.n_max):
        if r.n < 2:
            continue
        lb = height(leibniz_oracle(ToeplitzSpec((-1,) * r.n).to_hessenberg())) if r.n <= 8 else None
        cen = brute_force_max_height_census(r.n, workers=args.workers) if r.n <= args.census_max else None
        print(f"{r.n:>3} {r.tau:>8} {r.mu:>3} {str(lb[0]) if lb else '-':>10} "
              f"{cen.tau if cen else '-':>10} {cen.count if cen else '-':>6} {count_max_height(r.n, r.mu):>6}")


if __name__ == "__main__":
    t0 = time.perf_counter()
    main()
    print(f"# {time.perf_counter() - t0:.2f}s")
