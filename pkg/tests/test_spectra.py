import io
from collections import Counter

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from bohemian_uht.charpoly import charpoly_batch
from bohemian_uht.core import DomainError, IntPolynomial, ToeplitzSpec
from bohemian_uht.spectra import (
    DensityGrid,
    GridConfig,
    RootFindingError,
    aberth_batch,
    accumulate_density,
    clusters_consistent,
    default_window,
    distinct_charpolys,
    dump_grid,
    enumerate_family,
    family_block,
    family_eigen_bound,
    family_size,
    find_roots,
    render_array,
    render_image,
    shift_decomposition_check,
    solve_batch,
    symmetrize_roots,
)


def test_enumerate_examples():
    assert [s.t for s in enumerate_family(1)] == [(-1,), (0,), (1,)]
    assert [s.t for s in enumerate_family(2, zero_diag=True)] == [(0, -1), (0, 0), (0, 1)]
    assert family_size(14) == 4_782_969
    assert all(s.subdiag == 1 for s in enumerate_family(3))


@pytest.mark.parametrize("n, zero_diag", [(5, False), (8, False), (8, True)])
def test_enumeration_is_a_bijection(n, zero_diag):
    specs = [s.t for s in enumerate_family(n, zero_diag)]
    assert len(specs) == len(set(specs)) == family_size(n, zero_diag)
    if zero_diag:
        assert all(t[0] == 0 for t in specs)


def test_block_slices_concatenate():
    whole = family_block(7, False, 0, 3**7)
    parts = np.vstack([family_block(7, False, a, min(a + 100, 3**7)) for a in range(0, 3**7, 100)])
    assert np.array_equal(whole, parts)


def test_find_roots_examples():
    r = find_roots(IntPolynomial((2, 2, 1)))
    assert sorted(r.roots.tolist(), key=lambda z: z.imag) == [-1 - 1j, -1 + 1j]
    z = find_roots(IntPolynomial([0] * 14 + [1]))
    assert len(z.roots) == 14 and np.abs(z.roots).max() < 1e-1 and z.residual <= 1e-8
    assert find_roots(IntPolynomial((1, 1))).roots.tolist() == [-1]
    with pytest.raises(DomainError):
        find_roots(IntPolynomial((1, 2)))
    with pytest.raises(DomainError):
        find_roots(IntPolynomial((1,)))


def test_find_roots_raises_on_iteration_cap():
    with pytest.raises(RootFindingError) as exc:
        find_roots(IntPolynomial((3, -1, 4, 1, -5, 9, 1)), max_iter=1)
    assert exc.value.coeffs == (3, -1, 4, 1, -5, 9, 1)


bohemian_tail = st.integers(1, 14).flatmap(lambda n: st.lists(st.sampled_from((-1, 0, 1)), min_size=n, max_size=n))


@given(bohemian_tail)
def test_find_roots_reconstructs_polynomial(t):
    p = IntPolynomial(charpoly_batch(np.array([t]))[0].tolist())
    rs = find_roots(p)
    assert len(rs.roots) == p.degree and rs.residual <= 1e-8
    # oracle: numpy's product expansion of the roots rounds back to the integer
    # coefficients.  A root of multiplicity m is only ~eps^(1/m) accurate, so
    # this is asserted only when no cluster has more than 4 members.
    cluster = (np.abs(rs.roots[:, None] - rs.roots[None, :]) < 0.1).sum(axis=1).max()
    if cluster > 4:
        return
    rebuilt = np.poly(rs.roots)[::-1]
    assert np.rint(rebuilt.real).astype(int).tolist() == list(p.coeffs)
    assert np.abs(rebuilt.imag).max() < 1e-3 * max(map(abs, p.coeffs))


def test_find_roots_matches_numpy_roots_on_simple_roots():
    rng = np.random.default_rng(5)
    for _ in range(50):
        t = rng.integers(-1, 2, size=10)
        p = IntPolynomial(charpoly_batch(t[None, :])[0].tolist())
        ref = np.roots(p.coeffs[::-1])
        got = find_roots(p).roots
        gaps = np.abs(ref[:, None] - ref[None, :]) + np.eye(len(ref))
        if gaps.min() < 1e-3:
            continue  # clustered; covered by the reconstruction test
        for r in ref:
            assert np.abs(got - r).min() < 1e-8 * (1 + abs(r))


@given(st.lists(st.complex_numbers(max_magnitude=5, allow_nan=False, allow_infinity=False), min_size=1, max_size=10))
def test_symmetrize_closes_under_conjugation(zs):
    out = symmetrize_roots(np.array(zs))
    assert len(out) == len(zs)
    assert Counter(out.tolist()) == Counter(np.conj(out).tolist())


def test_density_n1():
    g = accumulate_density(1, config=GridConfig(width=9, height=9, window=(-2, 2, -2, 2)))
    assert g.hits == 3
    nz = np.argwhere(g.counts)
    assert sorted(nz[:, 1].tolist()) == [2, 4, 6] and set(nz[:, 0].tolist()) == {4}


def test_density_n2_zero_diag():
    g = accumulate_density(2, True, GridConfig(width=5, height=5, window=(-2.5, 2.5, -2.5, 2.5)))
    expected = np.zeros((5, 5), dtype=np.int64)
    expected[1, 2] = 1  # +i
    expected[3, 2] = 1  # -i
    expected[2, 2] = 2  # 0 twice
    expected[2, 1] = expected[2, 3] = 1  # -1, +1
    assert np.array_equal(g.counts, expected)


def test_density_n2_hits_and_symmetry():
    g = accumulate_density(2)
    assert g.hits == g.total_roots == 18 and g.outside == 0
    assert g.is_conjugate_symmetric()


@pytest.mark.parametrize("n, zero_diag", [(6, False), (9, False), (9, True)])
def test_default_window_contains_family(n, zero_diag):
    g = accumulate_density(n, zero_diag, GridConfig(width=101, height=101))
    assert g.outside == 0 and g.hits == n * family_size(n, zero_diag)
    assert g.is_conjugate_symmetric()
    assert g.max_residual <= 1e-8


def test_eigen_bound_is_valid():
    # oracle: dense eigenvalues of every matrix
    for n in (3, 6):
        b = family_eigen_bound(n)
        for spec in enumerate_family(n):
            assert np.abs(np.linalg.eigvals(np.array(spec.matrix(), dtype=float))).max() <= b + 1e-9
    assert default_window(14) == (-4.0, 4.0, -4.0, 4.0)


def test_workers_do_not_change_result(tmp_path):
    cfg1 = GridConfig(width=65, height=65, shard_size=200, workers=1)
    cfg2 = GridConfig(width=65, height=65, shard_size=200, workers=2)
    a, b = accumulate_density(7, config=cfg1), accumulate_density(7, config=cfg2)
    dump_grid(a, tmp_path / "a.npy")
    dump_grid(b, tmp_path / "b.npy")
    assert (tmp_path / "a.npy").read_bytes() == (tmp_path / "b.npy").read_bytes()
    assert render_image(a) == render_image(b)


def test_grid_requires_odd_height_and_symmetric_window():
    with pytest.raises(DomainError):
        DensityGrid(4, 4, (-1, 1, -1, 1))
    with pytest.raises(DomainError):
        DensityGrid(5, 5, (-1, 1, -1, 2))


def test_render_uniform_and_single_pixel():
    g = DensityGrid(7, 5, (-1, 1, -1, 1))
    assert np.unique(render_array(g, "gray")).tolist() == [0]
    assert np.unique(render_array(g, "gray_r")).tolist() == [255]
    g.counts[1, 3] = 12
    img = render_array(g, "gray")
    assert img[1, 3] == 255 and img.sum() == 255
    assert render_array(g, "gray_r")[1, 3] == 0


def test_render_formats():
    g = DensityGrid(7, 5, (-1, 1, -1, 1))
    g.counts[2, 2] = 3
    pgm = render_image(g)
    assert pgm.startswith(b"P5\n7 5\n255\n") and len(pgm) == len(b"P5\n7 5\n255\n") + 35
    PIL = pytest.importorskip("PIL.Image")
    png = render_image(g, fmt="png")
    assert np.array_equal(np.asarray(PIL.open(io.BytesIO(png))), render_array(g))
    with pytest.raises(DomainError):
        render_image(DensityGrid(0, 0, (-1, 1, -1, 1)))
    with pytest.raises(DomainError):
        render_image(g, colormap="viridis")


def test_dump_csv(tmp_path):
    g = accumulate_density(3, config=GridConfig(width=11, height=11))
    dump_grid(g, tmp_path / "g.csv")
    back = np.loadtxt(tmp_path / "g.csv", delimiter=",", dtype=np.int64)
    assert np.array_equal(back, g.counts)


@pytest.mark.parametrize("n", range(1, 9))
def test_shift_decomposition(n):
    assert shift_decomposition_check(n)


@pytest.mark.parametrize("n", range(1, 9))
def test_distinct_charpolys(n):
    assert distinct_charpolys(n) == 3**n


@pytest.mark.parametrize("n", range(1, 7))
def test_negation_symmetry_of_family(n):
    T = family_block(n, False, 0, 3**n)
    polys = Counter(tuple(int(c) for c in row) for row in charpoly_batch(T))
    mirrored = Counter(tuple((-1) ** (n - j) * c for j, c in enumerate(p)) for p in polys.elements())
    assert polys == mirrored
    # and the explicit bijection t_k -> (-1)^k t_k realises it
    signs = np.array([(-1) ** k for k in range(1, n + 1)])
    Q = charpoly_batch(T * signs)
    P = charpoly_batch(T)
    j = np.arange(n + 1)
    assert np.array_equal(Q, P * (-1) ** (n - j))


def test_symmetrize_pairs_by_proximity_not_rank():
    # a double root at 0 split to +-1e-7 i next to a cluster at -1 with larger imaginary parts
    z = np.array([1e-7j, -1e-7j, -1 + 9e-5j, -1 - 1e-4j, -1.0001 + 6e-6j, -1.0001 - 6e-6j])
    out = symmetrize_roots(z)
    assert np.sort(np.abs(out))[:2].max() < 1e-6
    assert Counter(out.tolist()) == Counter(np.conj(out).tolist())


def test_double_root_at_zero_survives():
    p = IntPolynomial(charpoly_batch(np.array([[-1, 0, 0, 1, -1, 0, 0, 1]]))[0].tolist())
    assert p.coeffs[:2] == (0, 0)
    r = find_roots(p).roots
    assert (np.abs(r) < 1e-6).sum() == 2


def test_symmetrize_keeps_noisy_real_roots_apart():
    # two distinct real roots, each with ~1e-9 imaginary noise of opposite sign
    z = np.array([-2.3733847 - 1.15e-9j, -2.18886467 + 1.12e-9j, 1.5 + 0.3j, 1.5 - 0.3j])
    out = symmetrize_roots(z)
    assert sorted(out[np.abs(out.imag) == 0].real.tolist()) == [-2.3733847, -2.18886467]


@pytest.mark.parametrize("t", [
    [-1, 1, 1, 0, -1, 1, 0, -1, -1, -1, -1, 0, -1, 0],
    [-1, 1, 1, 0, -1, -1, 1, -1, -1, -1, 0, -1, -1, -1],
])
def test_real_roots_with_noise_regression(t):
    c = charpoly_batch(np.array([t]))[0]
    r = find_roots(IntPolynomial(c.tolist())).roots
    ref = np.roots(c[::-1].astype(float))
    assert all(np.abs(r - x).min() < 1e-6 for x in ref)


def exact_multiple(k, at=-1.0):
    return np.poly(np.full(k, at))[::-1].real


@pytest.mark.parametrize("k", range(2, 7))
def test_genuine_clusters_are_consistent(k):
    C = np.convolve(exact_multiple(k), [2.0, 0.0, 1.0])  # (z+1)^k (z^2+2)
    Z, done = aberth_batch(C[None, :])
    assert done[0] and clusters_consistent(C, Z[0])


def test_duplicate_on_simple_root_is_detected():
    C = np.poly([-2.0, -1.0, 0.5, 3.0])[::-1].real
    z = np.array([-2.0, -1.0, 0.5, 0.5 + 1e-10])  # root 3 is missing, 0.5 is covered twice
    assert not clusters_consistent(C, z)
    assert clusters_consistent(C, np.array([-2.0, -1.0, 0.5, 3.0]))


def test_solve_batch_restarts_inconsistent_rows(monkeypatch):
    from bohemian_uht import spectra

    C = np.poly([-2.0, -1.0, 0.5, 3.0])[::-1].real[None, :]
    real = spectra.aberth_batch
    calls = []

    def flaky(C, **kw):
        calls.append(kw.get("offset", 0.4))
        Z, done = real(C, **kw)
        if len(calls) == 1:
            Z = Z.copy()
            Z[0] = [-2.0, -1.0, 0.5, 0.5 + 1e-10]
        return Z, done

    monkeypatch.setattr(spectra, "aberth_batch", flaky)
    Z, res, ok = solve_batch(C)
    assert ok[0] and len(calls) == 2
    assert np.allclose(np.sort(Z[0].real), [-2.0, -1.0, 0.5, 3.0])
