"""Maximal characteristic heights, their counting law and golden-ratio sequences."""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from math import isqrt
from typing import Iterable, Iterator, Sequence

import numpy as np

from .charpoly import charpoly_batch
from .core import DomainError, MaxHeightRecord, SizeError, ToeplitzSpec

CENSUS_MAX_N = 12

# log(1 + phi) = log((3 + sqrt 5) / 2)
LOG_ONE_PLUS_PHI = math.log((3 + math.sqrt(5)) / 2)


def tau_mu_stream(n_max: int) -> Iterator[MaxHeightRecord]:
    """Yield (n, tau_n, mu_n) for n = 1..n_max.

    Works on the all -1 family, p_{n,j} = p_{n-1,j-1} + sum_{m=j}^{n-1} p_{m,j},
    keeping only the previous row and the running column sums.
    """
    if n_max < 1:
        raise DomainError("n_max must be >= 1")
    prev = [1]  # row n = 0
    colsum = [1]  # colsum[j] = sum_{m<n} p_{m,j}
    for n in range(1, n_max + 1):
        row = [0] * (n + 1)
        row[0] = colsum[0]
        for j in range(1, n):
            row[j] = prev[j - 1] + colsum[j]
        row[n] = 1
        colsum.append(0)
        for j in range(n + 1):
            colsum[j] += row[j]
        tau, mu = -1, -1
        for j, c in enumerate(row):
            if c >= tau:
                tau, mu = c, j
        yield MaxHeightRecord(n, tau, mu)
        prev = row


def tau_mu_table(n_max: int) -> dict[int, MaxHeightRecord]:
    return {r.n: r for r in tau_mu_stream(n_max)}


def count_max_height(n: int, mu: int | None = None) -> int:
    """Number of {-1,0,1} Toeplitz matrices of order n with maximal height."""
    if n < 2:
        raise DomainError("count_max_height needs n >= 2")
    if mu is None:
        *_, last = tau_mu_stream(n)
        mu = last.mu
    return 2 * 3**mu


@dataclass
class Census:
    tau: int
    count: int
    witnesses: list[ToeplitzSpec] = field(default_factory=list)

    def __iter__(self):
        # allows ``tau, count, witnesses = census``
        return iter((self.tau, self.count, self.witnesses))


def _odometer_block(n: int, start: int, stop: int) -> np.ndarray:
    """Entry vectors for indices [start, stop) of the base-3 odometer
    (digit d -> d - 1, t_1 least significant)."""
    idx = np.arange(start, stop, dtype=np.int64)
    out = np.empty((idx.size, n), dtype=np.int64)
    for k in range(n):
        out[:, k] = idx % 3 - 1
        idx //= 3
    return out


def _census_shard(args: tuple[int, int, int]) -> tuple[int, int, list[tuple[int, ...]]]:
    n, start, stop = args
    T = _odometer_block(n, start, stop)
    heights = np.abs(charpoly_batch(T)).max(axis=1)
    best = int(heights.max())
    hit = np.nonzero(heights == best)[0]
    return best, int(hit.size), [tuple(int(x) for x in T[i]) for i in hit]


def _merge(parts: Iterable[tuple[int, int, list[tuple[int, ...]]]]) -> Census:
    tau, count, wit = -1, 0, []
    for best, c, w in parts:
        if best > tau:
            tau, count, wit = best, c, list(w)
        elif best == tau:
            count += c
            wit.extend(w)
    wit.sort()
    return Census(tau, count, [ToeplitzSpec(t) for t in wit])


def brute_force_max_height_census(n: int, workers: int = 1, shard_size: int = 1 << 15) -> Census:
    """Exhaustively scan all 3^n entry vectors (subdiagonal +1)."""
    if n > CENSUS_MAX_N:
        raise SizeError(f"census is capped at n <= {CENSUS_MAX_N}, got {n}")
    if n < 1:
        raise DomainError("census needs n >= 1")
    total = 3**n
    shards = [(n, a, min(a + shard_size, total)) for a in range(0, total, shard_size)]
    if workers > 1 and len(shards) > 1:
        from multiprocessing import Pool

        with Pool(workers) as pool:
            parts = pool.map(_census_shard, shards)
    else:
        parts = map(_census_shard, shards)
    return _merge(parts)


def max_height_pattern(F: Iterable[int], n: int) -> list[tuple[int, ...]]:
    """Entry vectors predicted to maximise the height for entries drawn from F."""
    values = sorted(set(int(x) for x in F))
    if len(values) < 2:
        raise DomainError("F must contain at least two distinct values")
    a, b = values[0], values[-1]
    out = []
    if abs(a) >= abs(b):
        out.append(tuple([a] * n))
    if abs(b) >= abs(a):
        # b on odd k (1-based), a on even k
        out.append(tuple(b if k % 2 == 1 else a for k in range(1, n + 1)))
    return out


def log_int(x: int) -> float:
    """Natural log of a positive big integer from its bit length and top 64 bits."""
    if x <= 0:
        raise DomainError("log of non-positive integer")
    shift = max(0, x.bit_length() - 64)
    return math.log(x >> shift) + shift * math.log(2)


def growth_ratios(n_max: int) -> list[tuple[int, float]]:
    """Pairs (n, log tau_{n+1} - log tau_n) for n = 1..n_max-1."""
    if n_max < 2:
        raise DomainError("n_max must be >= 2")
    out = []
    prev = None
    for rec in tau_mu_stream(n_max):
        cur = log_int(rec.tau)
        if prev is not None:
            out.append((rec.n - 1, cur - prev))
        prev = cur
    return out


class GoldenFloorContext:
    """Exact floor(m / (phi + 2)) with a memo of integer square roots.

    m / (phi + 2) = (5m - m sqrt 5) / 10 and m sqrt 5 is irrational for m > 0,
    so with k = isqrt(5 m^2) the floor follows from integer arithmetic alone.
    """

    def __init__(self):
        self._cache: dict[int, int] = {}

    def isqrt5m2(self, m: int) -> int:
        k = self._cache.get(m)
        if k is None:
            k = isqrt(5 * m * m)
            self._cache[m] = k
        return k

    def floor_div(self, m: int) -> int:
        if m < 0:
            raise DomainError("m must be non-negative")
        if m == 0:
            return 0
        num = 5 * m - self.isqrt5m2(m)
        q, r = divmod(num, 10)
        return q - 1 if r == 0 else q


_default_ctx = GoldenFloorContext()


def floor_div_golden(m: int) -> int:
    return _default_ctx.floor_div(m)


def fibword_a(n: int) -> int:
    """a(n) = floor((n+2)/(phi+2)) - floor((n+1)/(phi+2))  (OEIS A221150)."""
    if n < 0:
        raise DomainError("n must be non-negative")
    return floor_div_golden(n + 2) - floor_div_golden(n + 1)


def mu_formula(n: int) -> int:
    """floor((n + 327)/(phi + 2)) - 90, the empirical closed form for mu_n (n > 2)."""
    if n <= 2:
        raise DomainError("mu_formula holds for n > 2 only")
    return floor_div_golden(n + 327) - 90


def plateau_lengths(mus: Sequence[int]) -> list[int]:
    """Lengths of maximal runs of equal consecutive values."""
    return [len(list(g)) for _, g in itertools.groupby(mus)]
