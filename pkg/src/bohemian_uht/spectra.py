"""Eigenvalue densities of the {-1, 0, 1} upper Hessenberg Toeplitz family.

Eigenvalues are computed as roots of the exact characteristic polynomials
with a vectorised Aberth-Ehrlich iteration, made exactly conjugate
symmetric, and binned into a grid that is rendered with log intensity.
"""
from __future__ import annotations

import io
import logging
import math
from collections import Counter
from dataclasses import dataclass, field
from typing import Iterator, Sequence

import numpy as np

from .charpoly import charpoly_batch
from .core import DomainError, IntPolynomial, ToeplitzSpec, taylor_shift

log = logging.getLogger(__name__)

DEFAULT_GRID = 1025
MAX_DEGREE = 64
SNAP_REL = 1e-10
PAIR_TOL = 1e-6
COINCIDE_REL = 1e-6
CLUSTER_SLACK = 100.0
RESTART_OFFSETS = (1.3, 2.2, 0.9)


class RootFindingError(RuntimeError):
    """Aberth iteration did not reach the residual tolerance."""

    def __init__(self, message: str, coeffs=None, spec: ToeplitzSpec | None = None):
        super().__init__(message)
        self.coeffs = coeffs
        self.spec = spec


# -- enumeration ------------------------------------------------------------


def family_size(n: int, zero_diag: bool = False) -> int:
    return 3 ** (n - 1) if zero_diag else 3**n


def family_block(n: int, zero_diag: bool, start: int, stop: int) -> np.ndarray:
    """Entry vectors with odometer indices [start, stop) as an (m, n) array.

    Digits 0, 1, 2 map to -1, 0, +1; t_1 is the fastest digit (t_2 when the
    diagonal is pinned to zero).
    """
    idx = np.arange(start, stop, dtype=np.int64)
    out = np.zeros((idx.size, n), dtype=np.int64)
    first = 1 if zero_diag else 0
    for k in range(first, n):
        out[:, k] = idx % 3 - 1
        idx //= 3
    return out


def enumerate_family(n: int, zero_diag: bool = False) -> Iterator[ToeplitzSpec]:
    if n < 1:
        raise DomainError("n must be >= 1")
    total = family_size(n, zero_diag)
    step = 4096
    for a in range(0, total, step):
        for row in family_block(n, zero_diag, a, min(a + step, total)):
            yield ToeplitzSpec(tuple(int(x) for x in row))


# -- root finding ------------------------------------------------------------


@dataclass
class RootSet:
    roots: np.ndarray
    residual: float


def _horner(C: np.ndarray, Z: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Value and derivative of ascending-coefficient polys C (b, n+1) at Z (b, m)."""
    n = C.shape[1] - 1
    p = np.broadcast_to(C[:, n : n + 1], Z.shape).astype(complex)
    dp = np.zeros_like(p)
    for j in range(n - 1, -1, -1):
        dp = dp * Z + p
        p = p * Z + C[:, j : j + 1]
    return p, dp


def relative_residuals(C: np.ndarray, Z: np.ndarray) -> np.ndarray:
    """|P(z)| / (height * max(1, |z|)^n), per root."""
    n = C.shape[1] - 1
    p, _ = _horner(C, Z)
    h = np.abs(C).max(axis=1, keepdims=True)
    return np.abs(p) / (h * np.maximum(1.0, np.abs(Z)) ** n)


def cauchy_radius(C: np.ndarray, iters: int = 60) -> np.ndarray:
    """Unique positive root of x^n - sum_{j<n} |c_j| x^j (all roots lie inside)."""
    A = np.abs(C[:, :-1])
    n = C.shape[1] - 1
    lo = np.zeros(C.shape[0])
    hi = 1.0 + A.max(axis=1)
    powers = np.arange(n) - n
    for _ in range(iters):
        mid = 0.5 * (lo + hi)
        g = 1.0 - (A * mid[:, None] ** powers).sum(axis=1)
        pos = g > 0
        hi = np.where(pos, mid, hi)
        lo = np.where(pos, lo, mid)
    return hi


def aberth_batch(C: np.ndarray, conv_tol: float = 1e-13, max_iter: int = 800,
                 radius: float | None = None, offset: float = 0.4):
    """Simultaneous Aberth-Ehrlich iteration for monic float polys.

    ``C`` is (B, n+1), ascending, monic.  Returns (roots (B, n), converged (B,)).
    Starting points sit on a circle of the Cauchy radius, shrunk to ``radius``
    when a tighter bound on the roots is known.  A polynomial is finished
    once every root has relative residual <= conv_tol.
    """
    C = np.asarray(C, dtype=float)
    B, n1 = C.shape
    n = n1 - 1
    R = cauchy_radius(C)
    if radius is not None:
        R = np.minimum(R, radius)
    theta = 2 * np.pi * np.arange(n) / n + offset
    Z = R[:, None] * np.exp(1j * theta)[None, :]
    done = np.zeros(B, dtype=bool)
    height = np.abs(C).max(axis=1)
    act = np.arange(B)
    Za, Ca, ha = Z.copy(), C, height
    diag = np.arange(n)
    for _ in range(max_iter):
        if act.size == 0:
            break
        p, dp = _horner(Ca, Za)
        res = np.abs(p) / (ha[:, None] * np.maximum(1.0, np.abs(Za)) ** n)
        fin = (res <= conv_tol).all(axis=1)
        if fin.any():
            Z[act[fin]] = Za[fin]
            done[act[fin]] = True
            keep = ~fin
            act, Za, Ca, ha, p, dp = act[keep], Za[keep], Ca[keep], ha[keep], p[keep], dp[keep]
            if act.size == 0:
                break
        diff = Za[:, :, None] - Za[:, None, :]
        diff[:, diag, diag] = np.inf
        with np.errstate(divide="ignore", invalid="ignore"):
            S = (1.0 / diff).sum(axis=2)
            ratio = p / dp
            w = ratio / (1.0 - ratio * S)
        w = np.where(np.isfinite(w) & (p != 0), w, 0.0)
        Za = Za - w
    if act.size:
        Z[act] = Za
    return Z, done


def _pair_row(z: np.ndarray) -> np.ndarray:
    """Greedy nearest-conjugate matching for one row of roots."""
    up = [i for i in range(len(z)) if z[i].imag > 0]
    lo = [i for i in range(len(z)) if z[i].imag < 0]
    out = z.real + 0j
    if up and lo:
        d = np.abs(z[up][:, None] - np.conj(z[lo])[None, :])
        used_u, used_l = set(), set()
        for flat in np.argsort(d, axis=None, kind="stable"):
            a, b = divmod(int(flat), len(lo))
            if a in used_u or b in used_l:
                continue
            used_u.add(a)
            used_l.add(b)
            # a true conjugate pair is closer to its partner than to the real
            # axis; otherwise both are real roots carrying imaginary noise
            if d[a, b] < max(z[up[a]].imag, -z[lo[b]].imag):
                out[up[a]], out[lo[b]] = z[up[a]], np.conj(z[up[a]])
            if len(used_u) == min(len(up), len(lo)):
                break
    return out


def symmetrize_roots(Z: np.ndarray) -> np.ndarray:
    """Make each row exactly closed under conjugation.

    Near-real roots are snapped to the axis.  Every root in the upper half
    plane is matched with the nearest conjugate of a lower one, and the
    lower root is replaced by the mirror image of its partner; unmatched
    roots, and matches whose gap exceeds their imaginary parts (real roots
    with imaginary noise), are snapped to the real axis.  The common case (sorting by
    imaginary part already pairs the roots) is vectorised; rows with
    clustered roots fall back to a greedy per-row matching.
    """
    Z = np.array(Z, dtype=complex, copy=True)
    if Z.ndim == 1:
        return symmetrize_roots(Z[None, :])[0]
    B, n = Z.shape
    snap = np.abs(Z.imag) < SNAP_REL * (1.0 + np.abs(Z.real))
    Z.imag[snap] = 0.0
    Zs = np.take_along_axis(Z, np.argsort(Z.imag, axis=1, kind="stable"), axis=1)
    n_pos = (Zs.imag > 0).sum(axis=1)
    n_neg = (Zs.imag < 0).sum(axis=1)
    k = n_neg[:, None]
    pos = np.arange(n)[None, :]
    lower = pos < k
    upper = pos >= n - k
    mirror = np.conj(Zs[:, ::-1])  # candidate partner of each lower root
    gap = np.where(lower, np.abs(Zs - mirror), 0.0)
    ok = (n_pos == n_neg) & (gap <= np.minimum(PAIR_TOL * (1.0 + np.abs(Zs)), np.abs(Zs.imag))).all(axis=1)
    out = np.where(lower, mirror, Zs)
    out = np.where(lower | upper, out, out.real + 0j)
    for r in np.flatnonzero(~ok):
        out[r] = _pair_row(Z[r])
    return out


def _taylor(c: np.ndarray, x, upto: int) -> list:
    """Taylor coefficients a_0..a_upto of the ascending polynomial c at x."""
    work = list(c)
    out = []
    for _ in range(upto + 1):
        acc = work[-1]
        nxt = [acc]
        for coef in work[-2::-1]:
            acc = acc * x + coef
            nxt.append(acc)
        out.append(nxt.pop())
        work = nxt[::-1]
    return out


def clusters_consistent(c: np.ndarray, z: np.ndarray) -> bool:
    """False if some group of nearly coincident approximations cannot be a
    root of that multiplicity.

    Approximations closer than COINCIDE_REL * (1 + |z|) are grouped.  For a
    group of k with centroid x and radius r, a genuine k-fold cluster makes
    the Taylor coefficient a_{k-1}(x) of order r * a_k(x); when the group
    sits on a root of lower multiplicity (two approximations on one simple
    root, with another root left uncovered) the ratio is instead of the
    order of the distance to the other roots.
    """
    n = len(z)
    parent = list(range(n))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i in range(n):
        for j in range(i + 1, n):
            if abs(z[i] - z[j]) < COINCIDE_REL * (1.0 + max(abs(z[i]), abs(z[j]))):
                parent[find(i)] = find(j)
    groups: dict[int, list[int]] = {}
    for i in range(n):
        groups.setdefault(find(i), []).append(i)
    eps = np.finfo(float).eps
    for members in groups.values():
        k = len(members)
        if k < 2:
            continue
        x = complex(np.mean(z[members]))
        r = max(abs(z[i] - x) for i in members)
        a = _taylor([complex(v) for v in c], x, k)
        bound = _taylor([abs(float(v)) for v in c], abs(x), k)  # rounding-error scale
        scale = CLUSTER_SLACK * max(r, COINCIDE_REL * (1.0 + abs(x)))
        if abs(a[k - 1]) > scale * abs(a[k]) + 8 * n * eps * bound[k - 1]:
            return False
    return True


def solve_batch(C: np.ndarray, tol: float = 1e-8, max_iter: int = 800,
                radius: float | None = None) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Roots of a stack of monic polynomials, conjugate-symmetrised.

    Returns (roots, per-row max relative residual, per-row ok flag).  A row
    is ok when its residual is <= tol and its near-coincident roots pass
    ``clusters_consistent``; rows failing the latter are re-solved from
    rotated starting circles before being given up on.
    """
    C = np.asarray(C, dtype=float)
    Z, _ = aberth_batch(C, max_iter=max_iter, radius=radius)
    suspect = _coincident_rows(Z)
    bad = np.array([i for i in suspect if not clusters_consistent(C[i], Z[i])], dtype=int)
    for offset in RESTART_OFFSETS:
        if bad.size == 0:
            break
        log.debug("re-solving %d rows with start offset %.2f", bad.size, offset)
        Zr, _ = aberth_batch(C[bad], max_iter=max_iter, radius=radius, offset=offset)
        Z[bad] = Zr
        bad = np.array([i for i in bad if not clusters_consistent(C[i], Z[i])], dtype=int)
    ok = np.ones(len(C), dtype=bool)
    ok[bad] = False
    Z = symmetrize_roots(Z)
    res = relative_residuals(C, Z).max(axis=1)
    ok &= res <= tol
    return Z, res, ok


def _coincident_rows(Z: np.ndarray) -> np.ndarray:
    n = Z.shape[1]
    if n < 2:
        return np.zeros(0, dtype=int)
    D = np.abs(Z[:, :, None] - Z[:, None, :])
    D[:, np.arange(n), np.arange(n)] = np.inf
    lim = COINCIDE_REL * (1.0 + np.abs(Z))
    return np.flatnonzero((D < lim[:, :, None]).any(axis=(1, 2)))


def find_roots(p: IntPolynomial, tol: float = 1e-8, max_iter: int = 800) -> RootSet:
    """All complex roots of a monic integer polynomial (degree 1..64)."""
    if not p.is_monic():
        raise DomainError("find_roots expects a monic polynomial")
    n = p.degree
    if not 1 <= n <= MAX_DEGREE:
        raise DomainError(f"degree must be in 1..{MAX_DEGREE}, got {n}")
    C = np.array([float(c) for c in p.coeffs])[None, :]
    Z, res, ok = solve_batch(C, tol, max_iter)
    if not ok[0]:
        raise RootFindingError(f"no certified root set for {p} (residual {res[0]:.3e}, tol {tol:.1e})",
                               coeffs=p.coeffs)
    return RootSet(Z[0], float(res[0]))


# -- density grid -----------------------------------------------------------


@dataclass
class DensityGrid:
    """Eigenvalue hit counts; ``counts[0]`` is the top (largest imaginary) row.

    The imaginary window is symmetric and ``height`` is odd so that the
    middle row is the real axis and (x, y) <-> (x, -y) is an exact row flip.
    """

    width: int
    height: int
    window: tuple[float, float, float, float]  # re_min, re_max, im_min, im_max
    counts: np.ndarray = None
    total_roots: int = 0
    outside: int = 0
    max_residual: float = 0.0
    real_axis_hits: int = 0

    def __post_init__(self):
        re_min, re_max, im_min, im_max = self.window
        if not (re_max > re_min and im_max > 0 and im_min == -im_max):
            raise DomainError("window must have re_max > re_min and im_min == -im_max > 0")
        if self.height % 2 == 0 and self.height > 0:
            raise DomainError("grid height must be odd (real axis gets its own row)")
        if self.counts is None:
            self.counts = np.zeros((self.height, self.width), dtype=np.int64)

    @property
    def hits(self) -> int:
        return int(self.counts.sum())

    def add_roots(self, Z: np.ndarray) -> None:
        z = np.asarray(Z).ravel()
        re_min, re_max, _, im_max = self.window
        dx = (re_max - re_min) / self.width
        dy = 2.0 * im_max / self.height
        c = self.height // 2
        col = np.floor((z.real - re_min) / dx)
        off = np.floor(np.abs(z.imag) / dy + 0.5)
        inside = (col >= 0) & (col < self.width) & (off <= c)
        col = col[inside].astype(np.int64)
        off = off[inside].astype(np.int64)
        row = np.where(z.imag[inside] > 0, c - off, c + off)
        flat = np.bincount(row * self.width + col, minlength=self.width * self.height)
        self.counts += flat.reshape(self.height, self.width)
        self.total_roots += z.size
        self.outside += int(z.size - inside.sum())
        self.real_axis_hits += int((z.imag == 0).sum())

    def merge(self, other: "DensityGrid") -> "DensityGrid":
        if (self.width, self.height, self.window) != (other.width, other.height, other.window):
            raise DomainError("cannot merge grids with different geometry")
        self.counts += other.counts
        self.total_roots += other.total_roots
        self.outside += other.outside
        self.max_residual = max(self.max_residual, other.max_residual)
        self.real_axis_hits += other.real_axis_hits
        return self

    def is_conjugate_symmetric(self) -> bool:
        return bool(np.array_equal(self.counts, self.counts[::-1]))


def family_eigen_bound(n: int, zero_diag: bool = False) -> float:
    """Upper bound on |lambda| over the whole {-1, 0, 1} family of order n.

    With D = diag(r^i), D^-1 M D has row sums at most
    |t_1| + 1/r + sum_{k=2}^{n} r^(k-1); every r in (0, 1) gives a valid
    bound, so the minimum over a grid of r is rigorous.
    """
    r = np.linspace(0.01, 0.99, 981)
    k = np.arange(1, n)
    tail = (r[:, None] ** k[None, :]).sum(axis=1) if n > 1 else np.zeros_like(r)
    diag = 0.0 if zero_diag else 1.0
    sub = 1.0 / r if n > 1 else np.zeros_like(r)
    return float((diag + sub + tail).min())


def default_window(n: int, zero_diag: bool = False) -> tuple[float, float, float, float]:
    """Square window, bounds rounded up to an integer, containing every eigenvalue."""
    R = family_eigen_bound(n, zero_diag)
    b = float(math.ceil(R))
    if b - R < 1e-9:
        b += 1.0
    return (-b, b, -b, b)


@dataclass
class GridConfig:
    width: int = DEFAULT_GRID
    height: int = DEFAULT_GRID
    window: tuple[float, float, float, float] | None = None
    tol: float = 1e-8
    shard_size: int = 20000
    workers: int = 1


def _density_shard(args) -> DensityGrid:
    n, zero_diag, start, stop, width, height, window, tol = args
    T = family_block(n, zero_diag, start, stop)
    C = charpoly_batch(T).astype(float)
    Z, res, ok = solve_batch(C, tol, radius=family_eigen_bound(n, zero_diag))
    bad = np.flatnonzero(~ok)
    if bad.size:
        i = int(bad[0])
        spec = ToeplitzSpec(tuple(int(x) for x in T[i]))
        raise RootFindingError(
            f"no certified root set for t={spec.t} (residual {res[i]:.3e}, tol {tol:.1e})",
            coeffs=tuple(int(x) for x in C[i]),
            spec=spec,
        )
    grid = DensityGrid(width, height, window)
    grid.add_roots(Z)
    grid.max_residual = float(res.max(initial=0.0))
    return grid


def accumulate_density(n: int, zero_diag: bool = False, config: GridConfig | None = None,
                       progress=None) -> DensityGrid:
    """Bin every eigenvalue of the family into a DensityGrid."""
    cfg = config or GridConfig()
    if n < 1:
        raise DomainError("n must be >= 1")
    window = cfg.window or default_window(n, zero_diag)
    total = family_size(n, zero_diag)
    shards = [
        (n, zero_diag, a, min(a + cfg.shard_size, total), cfg.width, cfg.height, window, cfg.tol)
        for a in range(0, total, cfg.shard_size)
    ]
    grid = DensityGrid(cfg.width, cfg.height, window)
    if cfg.workers > 1 and len(shards) > 1:
        from multiprocessing import Pool

        with Pool(cfg.workers) as pool:
            for i, part in enumerate(pool.imap_unordered(_density_shard, shards)):
                grid.merge(part)
                if progress:
                    progress(i + 1, len(shards))
    else:
        for i, sh in enumerate(shards):
            grid.merge(_density_shard(sh))
            if progress:
                progress(i + 1, len(shards))
    return grid


# -- rendering / dumps --------------------------------------------------------

COLORMAPS = ("gray_r", "gray")


def render_array(grid: DensityGrid, colormap: str = "gray_r") -> np.ndarray:
    """uint8 image, intensity log(1 + count) / log(1 + max count)."""
    if grid.width == 0 or grid.height == 0:
        raise DomainError("cannot render an empty grid")
    if colormap not in COLORMAPS:
        raise DomainError(f"unknown colormap {colormap!r}; choose from {COLORMAPS}")
    counts = grid.counts
    top = counts.max()
    if top > 0:
        v = np.log1p(counts.astype(float)) / math.log1p(float(top))
    else:
        v = np.zeros(counts.shape)
    img = np.rint(v * 255.0).astype(np.uint8)
    if colormap == "gray_r":
        img = 255 - img
    return img


def render_image(grid: DensityGrid, colormap: str = "gray_r", fmt: str = "pgm") -> bytes:
    """PGM (P5) bytes, or PNG bytes when Pillow is installed and fmt='png'."""
    img = render_array(grid, colormap)
    if fmt == "pgm":
        header = f"P5\n{grid.width} {grid.height}\n255\n".encode("ascii")
        return header + img.tobytes()
    if fmt == "png":
        from PIL import Image

        buf = io.BytesIO()
        Image.fromarray(img, mode="L").save(buf, format="PNG")
        return buf.getvalue()
    raise DomainError(f"unknown image format {fmt!r}")


def dump_grid(grid: DensityGrid, path) -> None:
    """Raw counts: ``.npy`` (binary) or ``.csv`` (one row of the image per line)."""
    path = str(path)
    if path.endswith(".csv"):
        np.savetxt(path, grid.counts, fmt="%d", delimiter=",")
    else:
        with open(path, "wb") as fh:
            np.save(fh, grid.counts)


# -- exact structure checks ---------------------------------------------------


def _charpoly_multiset(n: int, zero_diag: bool) -> Counter:
    T = family_block(n, zero_diag, 0, family_size(n, zero_diag))
    return Counter(tuple(int(c) for c in row) for row in charpoly_batch(T))


def distinct_charpolys(n: int) -> int:
    return len(_charpoly_multiset(n, False))


def shift_decomposition_check(n: int) -> bool:
    """Full family charpolys == {Q(z - d) : Q zero-diagonal, d in {-1, 0, 1}} as multisets."""
    if not 1 <= n <= 8:
        raise DomainError("shift_decomposition_check supports 1 <= n <= 8")
    full = _charpoly_multiset(n, False)
    shifted: Counter = Counter()
    for q, mult in _charpoly_multiset(n, True).items():
        Q = IntPolynomial(q)
        for d in (-1, 0, 1):
            shifted[taylor_shift(Q, -d).coeffs] += mult
    return full == shifted
