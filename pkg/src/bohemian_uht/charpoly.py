"""Characteristic polynomials of upper Hessenberg (Toeplitz) matrices.

Four exact routes are provided and cross-checked in the test suite:

* ``charpoly_toeplitz``   -- polynomial recurrence P_n = z P_{n-1} - sum s^{k-1} t_k P_{n-k}
* ``charpoly_coeffs``     -- the same recurrence written on coefficients
* ``charpoly_hessenberg`` -- general upper Hessenberg recurrence
* ``leibniz_oracle``      -- determinant by permutation expansion (no recurrence)

plus ``closed_form_maxheight`` for the all -1 family and a vectorised
int64 variant (``charpoly_batch``) used by the enumeration code.
"""
from __future__ import annotations

from fractions import Fraction
from math import comb
import numpy as np

from .core import (
    HessenbergSpec,
    IntPolynomial,
    SizeError,
    ToeplitzSpec,
    poly_add,
    poly_shift_mul,
)

LEIBNIZ_MAX_N = 8


def charpoly_toeplitz_all(spec: ToeplitzSpec) -> list[IntPolynomial]:
    """P_0, ..., P_n for the leading principal submatrices of M."""
    s = spec.subdiag
    rows: list[list[int]] = [[1]]
    for m in range(1, spec.n + 1):
        acc = [0] + rows[m - 1]
        sign = 1
        for k in range(1, m + 1):
            tk = spec.t[k - 1]
            if tk:
                c = -sign * tk
                for j, x in enumerate(rows[m - k]):
                    acc[j] += c * x
            sign *= s
        rows.append(acc)
    return [IntPolynomial(r) for r in rows]


def charpoly_toeplitz(spec: ToeplitzSpec) -> IntPolynomial:
    """det(zI - M) via the polynomial recurrence; keeps P_0..P_n in memory."""
    return charpoly_toeplitz_all(spec)[-1]


def charpoly_coeffs(spec: ToeplitzSpec) -> IntPolynomial:
    """det(zI - M) via the coefficient recurrence on p_{m,j}."""
    n, t, s = spec.n, spec.t, spec.subdiag
    # signed entries w_k = s^{k-1} t_k
    w = [0] * (n + 1)
    sign = 1
    for k in range(1, n + 1):
        w[k] = sign * t[k - 1]
        sign *= s
    p = [[1]]
    for m in range(1, n + 1):
        row = [0] * (m + 1)
        row[m] = 1
        for j in range(m):
            acc = p[m - 1][j - 1] if j >= 1 else 0
            for k in range(1, m - j + 1):
                if w[k]:
                    acc -= w[k] * p[m - k][j]
            row[j] = acc
        p.append(row)
    return IntPolynomial(p[n])


def charpoly_hessenberg(spec: HessenbergSpec) -> IntPolynomial:
    """det(zI - H) via Q_m = z Q_{m-1} - sum_k s^{k-1} h_{m-k+1,m} Q_{m-k}."""
    s = spec.subdiag
    Q = [IntPolynomial.one()]
    for m in range(1, spec.n + 1):
        acc = poly_shift_mul(Q[m - 1])
        sign = 1
        for k in range(1, m + 1):
            # 1-based h_{m-k+1, m}
            h = spec.entry(m - k, m - 1)
            if h:
                acc = poly_add(acc, Q[m - k].scale(-sign * h))
            sign *= s
        Q.append(acc)
    return Q[-1]


def _mul(a: list[int], b: list[int]) -> list[int]:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return out


def leibniz_oracle(spec: HessenbergSpec) -> IntPolynomial:
    """det(zI - H) as the signed sum over permutations of entry products.

    Entries of zI - H are linear polynomials; permutations that hit an
    identically-zero entry are skipped as they contribute nothing.
    """
    n = spec.n
    if n > LEIBNIZ_MAX_N:
        raise SizeError(f"leibniz_oracle is capped at n <= {LEIBNIZ_MAX_N}, got {n}")

    def entry(i: int, j: int) -> list[int]:
        e = -spec.entry(i, j)
        if i == j:
            return [e, 1]
        return [e] if e else []

    table = [[entry(i, j) for j in range(n)] for i in range(n)]
    total = [0] * (n + 1)
    perm: list[int] = []
    used = [False] * n

    def parity(p: list[int]) -> int:
        inv = 0
        for a in range(len(p)):
            for b in range(a + 1, len(p)):
                if p[a] > p[b]:
                    inv += 1
        return -1 if inv & 1 else 1

    def walk(row: int, prod: list[int]) -> None:
        if row == n:
            sgn = parity(perm)
            for j, c in enumerate(prod):
                total[j] += sgn * c
            return
        for col in range(n):
            if used[col] or not table[row][col]:
                continue
            used[col] = True
            perm.append(col)
            walk(row + 1, _mul(prod, table[row][col]))
            perm.pop()
            used[col] = False

    walk(0, [1])
    return IntPolynomial(total)


def closed_form_sequence(n_max: int):
    """Yield P_0, ..., P_{n_max} of the t_k = -1 family from
    (P_n, T_n) = [[z, 1], [z, 2]] (P_{n-1}, T_{n-1}),  P_0 = T_0 = 1."""
    if n_max < 0:
        raise ValueError("n must be non-negative")
    P, T = [1], [1]
    yield IntPolynomial(P)
    for _ in range(n_max):
        zP = [0] + P
        P = [a + b for a, b in zip(zP, T + [0])]
        T = [a + 2 * b for a, b in zip(zP, T + [0])]
        yield IntPolynomial(P)


def closed_form_maxheight(n: int) -> IntPolynomial:
    """P_n for t_k = -1 (subdiagonal +1): first component of
    [[z, 1], [z, 2]]^n (1, 1)."""
    *_, last = closed_form_sequence(n)
    return last


def closed_form_binomial_value(n: int, z) -> Fraction:
    """Evaluate the binomial double-sum closed form of P_n at z, exactly.

    sum_l C(n,2l) (z/2+1)^{n-2l} (1+z^2/4)^l
      + z/2 sum_l C(n,2l+1) (z/2+1)^{n-2l-1} (1+z^2/4)^l
    """
    z = Fraction(z)
    a = z / 2 + 1
    b = 1 + z * z / 4
    even = sum(comb(n, 2 * l) * a ** (n - 2 * l) * b**l for l in range(n // 2 + 1))
    odd = sum(comb(n, 2 * l + 1) * a ** (n - 2 * l - 1) * b**l for l in range((n - 1) // 2 + 1))
    return even + z / 2 * odd


def charpoly_batch(T: np.ndarray, subdiag: int = 1) -> np.ndarray:
    """Vectorised coefficient recurrence for a stack of entry vectors.

    ``T`` has shape (B, n) with small integer entries.  Returns an int64
    array of shape (B, n + 1), ascending degree.  Exact as long as every
    intermediate coefficient fits in int64, which holds for {-1, 0, 1}
    entries up to n = 40 (the all -1 polynomial dominates coefficient-wise).
    """
    T = np.asarray(T, dtype=np.int64)
    if T.ndim != 2:
        raise ValueError("T must be two-dimensional")
    B, n = T.shape
    if n > 40 and np.abs(T).max(initial=0) > 0:
        raise SizeError("int64 batch recurrence is only safe for n <= 40")
    W = T.copy()
    if subdiag == -1:
        W[:, 1::2] *= -1
    P = np.zeros((n + 1, B, n + 1), dtype=np.int64)
    P[0, :, 0] = 1
    for m in range(1, n + 1):
        cur = np.zeros((B, n + 1), dtype=np.int64)
        cur[:, 1:] = P[m - 1, :, :-1]
        for k in range(1, m + 1):
            cur -= W[:, k - 1 : k] * P[m - k]
        P[m] = cur
    return P[n]

