"""Exact integer polynomials and the matrix descriptors used throughout.

Polynomials are dense, ascending-degree tuples of Python ints, so
coefficients never overflow.  The zero polynomial is the empty tuple.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Iterable, Sequence


class DomainError(ValueError):
    """Raised when an operation is called outside its mathematical domain."""


class SizeError(ValueError):
    """Raised when a brute-force routine is asked for an intractable size."""


def _trim(coeffs: Iterable[int]) -> tuple[int, ...]:
    c = [int(x) for x in coeffs]
    while c and c[-1] == 0:
        c.pop()
    return tuple(c)


@dataclass(frozen=True)
class IntPolynomial:
    """Dense polynomial with arbitrary-precision integer coefficients.

    ``coeffs[j]`` is the coefficient of ``z**j``.  Trailing zeros are
    stripped on construction, so equal polynomials compare equal.
    """

    coeffs: tuple[int, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "coeffs", _trim(self.coeffs))

    @classmethod
    def one(cls) -> "IntPolynomial":
        return cls((1,))

    @property
    def degree(self) -> int:
        """Degree; -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_monic(self) -> bool:
        return bool(self.coeffs) and self.coeffs[-1] == 1

    def __getitem__(self, j: int) -> int:
        if 0 <= j < len(self.coeffs):
            return self.coeffs[j]
        return 0

    def __len__(self) -> int:
        return len(self.coeffs)

    def __neg__(self) -> "IntPolynomial":
        return IntPolynomial(-c for c in self.coeffs)

    def __add__(self, other: "IntPolynomial") -> "IntPolynomial":
        return poly_add(self, other)

    def __sub__(self, other: "IntPolynomial") -> "IntPolynomial":
        return poly_add(self, -other)

    def scale(self, k: int) -> "IntPolynomial":
        return IntPolynomial(k * c for c in self.coeffs)

    def __call__(self, z):
        return poly_eval(self, z)

    def to_json(self) -> str:
        return poly_to_json(self)

    def __str__(self) -> str:
        if not self.coeffs:
            return "0"
        terms = []
        for j in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[j]
            if c == 0:
                continue
            mono = "" if j == 0 else ("z" if j == 1 else f"z^{j}")
            if mono and abs(c) == 1:
                body = mono
            else:
                body = f"{abs(c)}*{mono}" if mono else str(abs(c))
            sign = "-" if c < 0 else "+"
            terms.append((sign, body))
        first_sign, first = terms[0]
        out = ("-" if first_sign == "-" else "") + first
        for sign, body in terms[1:]:
            out += f" {sign} {body}"
        return out


@dataclass(frozen=True)
class ToeplitzSpec:
    """Upper Hessenberg Toeplitz matrix: ``t[k-1]`` sits on superdiagonal k-1.

    ``t[0]`` is the main diagonal; the subdiagonal is the constant ``subdiag``.
    """

    t: tuple[int, ...]
    subdiag: int = 1

    def __post_init__(self):
        object.__setattr__(self, "t", tuple(int(x) for x in self.t))
        if self.subdiag not in (1, -1):
            raise DomainError(f"subdiag must be +1 or -1, got {self.subdiag}")

    @property
    def n(self) -> int:
        return len(self.t)

    def is_bohemian(self) -> bool:
        return all(x in (-1, 0, 1) for x in self.t)

    def matrix(self) -> list[list[int]]:
        n = self.n
        rows = [[0] * n for _ in range(n)]
        for i in range(n):
            for j in range(i, n):
                rows[i][j] = self.t[j - i]
            if i > 0:
                rows[i][i - 1] = self.subdiag
        return rows

    def to_hessenberg(self) -> "HessenbergSpec":
        n = self.n
        upper = tuple(tuple(self.t[j - i] for j in range(i, n)) for i in range(n))
        return HessenbergSpec(upper, self.subdiag)


@dataclass(frozen=True)
class HessenbergSpec:
    """Upper Hessenberg matrix with constant subdiagonal ``subdiag``.

    ``upper[i][j - i]`` holds entry (i, j) for j >= i (0-based), i.e. row i
    stores the diagonal element followed by the rest of the row.
    """

    upper: tuple[tuple[int, ...], ...]
    subdiag: int = 1

    def __post_init__(self):
        upper = tuple(tuple(int(x) for x in row) for row in self.upper)
        n = len(upper)
        for i, row in enumerate(upper):
            if len(row) != n - i:
                raise DomainError(f"row {i} must have {n - i} entries, got {len(row)}")
        object.__setattr__(self, "upper", upper)
        if self.subdiag not in (1, -1):
            raise DomainError(f"subdiag must be +1 or -1, got {self.subdiag}")

    @classmethod
    def from_matrix(cls, rows: Sequence[Sequence[int]], subdiag: int = 1) -> "HessenbergSpec":
        n = len(rows)
        return cls(tuple(tuple(rows[i][j] for j in range(i, n)) for i in range(n)), subdiag)

    @property
    def n(self) -> int:
        return len(self.upper)

    def entry(self, i: int, j: int) -> int:
        """Entry (i, j), 0-based."""
        if j >= i:
            return self.upper[i][j - i]
        if j == i - 1:
            return self.subdiag
        return 0


@dataclass(frozen=True)
class MaxHeightRecord:
    n: int
    tau: int
    mu: int


def poly_add(a: IntPolynomial, b: IntPolynomial) -> IntPolynomial:
    la, lb = len(a.coeffs), len(b.coeffs)
    if la < lb:
        a, b, la, lb = b, a, lb, la
    out = list(a.coeffs)
    for j, c in enumerate(b.coeffs):
        out[j] += c
    return IntPolynomial(out)


def poly_shift_mul(a: IntPolynomial) -> IntPolynomial:
    """Multiply by z."""
    if a.is_zero():
        return a
    return IntPolynomial((0,) + a.coeffs)


def height(p: IntPolynomial) -> tuple[int, int]:
    """Return ``(h, mu)``: the largest absolute coefficient and the largest
    degree at which it occurs."""
    if p.is_zero():
        raise DomainError("height of the zero polynomial is undefined")
    h, mu = -1, -1
    for j, c in enumerate(p.coeffs):
        if abs(c) >= h:
            h, mu = abs(c), j
    return h, mu


def poly_eval(p: IntPolynomial, z):
    """Horner evaluation; exact for int/Fraction arguments."""
    acc = 0
    for c in reversed(p.coeffs):
        acc = acc * z + c
    return acc


def taylor_shift(p: IntPolynomial, d: int) -> IntPolynomial:
    """Return the polynomial q with q(z) = p(z + d)."""
    c = list(p.coeffs)
    n = len(c)
    # repeated synthetic division, O(n^2)
    for i in range(n):
        for j in range(n - 2, i - 1, -1):
            c[j] += d * c[j + 1]
    return IntPolynomial(c)


def poly_to_json(p: IntPolynomial) -> str:
    return json.dumps([str(c) for c in p.coeffs])


def poly_from_json(text: str) -> IntPolynomial:
    data = json.loads(text)
    if not isinstance(data, list) or not all(isinstance(x, str) for x in data):
        raise ValueError("expected a JSON array of decimal strings")
    return IntPolynomial(int(x) for x in data)
