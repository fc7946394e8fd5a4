"""Closed forms for the all -1 coefficients and the compositions picture of p_{n,0}."""
from __future__ import annotations

from collections import Counter
from math import comb
from typing import Iterator, Mapping

from .core import DomainError

# A monomial is a sorted tuple of (part, exponent) pairs, e.g. t1^2*t3 -> ((1, 2), (3, 1)).
Monomial = tuple[tuple[int, int], ...]


def T_closed_form(n: int, k: int) -> int:
    """A105306 triangle: sum_j C(k+j, k-1) C(n-k-1, j) for k < n, 1 for k = n."""
    if not 1 <= k <= n:
        raise DomainError(f"need 1 <= k <= n, got n={n}, k={k}")
    if k == n:
        return 1
    return sum(comb(k + j, k - 1) * comb(n - k - 1, j) for j in range(n - k))


def _series_mul(a: list[int], b: list[int], length: int) -> list[int]:
    out = [0] * length
    for i, x in enumerate(a[:length]):
        if x:
            for j in range(min(len(b), length - i)):
                out[i + j] += x * b[j]
    return out


def genfun_coeffs(i: int, length: int) -> list[int]:
    """First ``length`` coefficients of ((1 - x)/(1 - 2x))^(i+1)."""
    if i < 0 or length < 1:
        raise DomainError("need i >= 0 and length >= 1")
    geometric = [2**k for k in range(length)]
    base = _series_mul([1, -1], geometric, length)
    out = [1] + [0] * (length - 1)
    for _ in range(i + 1):
        out = _series_mul(out, base, length)
    return out


def compositions(n: int) -> list[list[int]]:
    """All ordered compositions of n, lexicographic order."""
    if n < 1:
        raise DomainError("n must be >= 1")
    return list(_compositions(n))


def _compositions(n: int) -> Iterator[list[int]]:
    if n == 0:
        yield []
        return
    for first in range(1, n + 1):
        for rest in _compositions(n - first):
            yield [first] + rest


def monomial_of(parts) -> Monomial:
    return tuple(sorted(Counter(parts).items()))


def monomial_parts(m: Monomial) -> tuple[int, ...]:
    return tuple(p for p, e in m for _ in range(e))


class CompositionPolynomial:
    """Sparse polynomial in t_1, t_2, ... with positive integer coefficients."""

    def __init__(self, terms: Mapping[Monomial, int] | None = None):
        self.terms: dict[Monomial, int] = {m: c for m, c in (terms or {}).items() if c}

    def __eq__(self, other) -> bool:
        return isinstance(other, CompositionPolynomial) and self.terms == other.terms

    def __repr__(self) -> str:
        return f"CompositionPolynomial({self})"

    def times_part(self, k: int) -> "CompositionPolynomial":
        out: dict[Monomial, int] = {}
        for m, c in self.terms.items():
            key = monomial_of(monomial_parts(m) + (k,))
            out[key] = out.get(key, 0) + c
        return CompositionPolynomial(out)

    def __add__(self, other: "CompositionPolynomial") -> "CompositionPolynomial":
        out = dict(self.terms)
        for m, c in other.terms.items():
            out[m] = out.get(m, 0) + c
        return CompositionPolynomial(out)

    def evaluate(self, t: Mapping[int, int] | list[int]) -> int:
        """Substitute t_k -> t[k] (mapping) or t[k-1] (list)."""
        get = t.__getitem__ if isinstance(t, Mapping) else (lambda k: t[k - 1])
        total = 0
        for m, c in self.terms.items():
            v = c
            for part, exp in m:
                v *= get(part) ** exp
            total += v
        return total

    def sorted_terms(self) -> list[tuple[Monomial, int]]:
        # total degree descending, then part multiset ascending
        return sorted(self.terms.items(), key=lambda mc: (-len(monomial_parts(mc[0])), monomial_parts(mc[0])))

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        pieces = []
        for m, c in self.sorted_terms():
            factors = [f"t{p}" if e == 1 else f"t{p}^{e}" for p, e in m]
            if not factors:
                pieces.append(str(c))
            elif c == 1:
                pieces.append("*".join(factors))
            else:
                pieces.append(f"{c}*" + "*".join(factors))
        return " + ".join(pieces)


def symbolic_p_n0(n: int) -> CompositionPolynomial:
    """p_{n,0} = sum_k t_k p_{n-k,0} with p_{0,0} = 1, symbolically."""
    if n < 0:
        raise DomainError("n must be >= 0")
    rows = [CompositionPolynomial({(): 1})]
    for m in range(1, n + 1):
        acc = CompositionPolynomial()
        for k in range(1, m + 1):
            acc = acc + rows[m - k].times_part(k)
        rows.append(acc)
    return rows[n]


def composition_counts(n: int) -> dict[Monomial, int]:
    """Number of compositions of n per part multiset."""
    return dict(Counter(monomial_of(c) for c in compositions(n)))
