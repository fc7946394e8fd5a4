#!/usr/bin/env python3
"""Golden-ratio behaviour of the maximal-height degree and growth rate.

Streams (tau_n, mu_n) up to --n-max, checks the floor formula and the
Fibonacci-word increments exactly, and reports how fast
log tau_{n+1} - log tau_n approaches log(1 + phi).  Optionally writes the
per-n data as CSV.
"""
import argparse
import csv
import time
from collections import Counter

from bohemian_uht.maxheight import LOG_ONE_PLUS_PHI, fibword_a, log_int, mu_formula, plateau_lengths, tau_mu_stream


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--n-max", type=int, default=3000)
    ap.add_argument("--csv")
    args = ap.parse_args()

    t0 = time.perf_counter()
    recs = list(tau_mu_stream(args.n_max + 1))
    print(f"streamed {len(recs)} records in {time.perf_counter() - t0:.1f}s")

    rows, fails = [], 0
    for prev, cur in zip(recs, recs[1:]):
        n = prev.n
        if n < 3:
            continue
        ratio = log_int(cur.tau) - log_int(prev.tau)
        ok = prev.mu == mu_formula(n) and cur.mu - prev.mu == fibword_a(n + 326)
        fails += not ok
        rows.append((n, prev.mu, cur.mu - prev.mu, ratio, ratio - LOG_ONE_PLUS_PHI))
    print(f"identity failures for 3 <= n <= {args.n_max}: {fails}")
    runs = plateau_lengths([r[1] for r in rows])[1:-1]
    print(f"interior plateau lengths: {dict(sorted(Counter(runs).items()))}")
    for lo in (10, 100, 500, 1000, 2000):
        tail = [abs(r[4]) for r in rows if r[0] >= lo]
        if tail:
            print(f"max |ratio - log(1+phi)| for n >= {lo:5d}: {max(tail):.3e}")

    if args.csv:
        with open(args.csv, "w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["n", "mu", "delta_mu", "ratio", "ratio_minus_limit"])
            for n, mu, d, r, e in rows:
                w.writerow([n, mu, d, f"{r:.15g}", f"{e:.6e}"])


if __name__ == "__main__":
    main()
