import random

import pytest

from nervecheck.algebra import CoefficientSpec, IntMatrix, block_matrix
from nervecheck.complexes import ChainComplex, HomologyGroup, SimplicialComplex, chain_homology, closure, homology
from nervecheck.covers import Cover, intersection, nerve
from nervecheck.generators import hexagon_cover, random_complex, random_cover, rp2, torus, triangle_cover
from nervecheck.mvss import (
    build_double_complex,
    check_bicomplex,
    e1_bottom_row,
    path_components,
    row_homology,
    ss_limit,
    ss_pages,
    total_complex,
    total_grading,
)

Q = CoefficientSpec.rationals()
F2 = CoefficientSpec.prime_field(2)
Zg = HomologyGroup(1)
ZERO = HomologyGroup()


def random_covers(seed, n, max_simplices=30):
    rng = random.Random(seed)
    return [random_cover(rng, random_complex(rng, max_simplices=max_simplices)) for _ in range(n)]


def test_double_complex_examples():
    point = Cover.from_maximal([[0]], {"U": [[0]]})
    D = build_double_complex(point)
    assert {pq: D.rank(*pq) for pq in D.bidegrees()} == {(0, 0): 1}
    D = build_double_complex(triangle_cover())
    assert D.rank(0, 0) == 6
    assert D.rank(1, 0) == 3
    assert D.rank(0, 1) == 3
    assert D.rank(1, 1) == 0


def test_basis_pairs_lie_in_intersections():
    for c in random_covers(1, 10):
        D = build_double_complex(c)
        for (p, q), pairs in D.basis.items():
            for sigma, tau in pairs:
                assert len(sigma) == p + 1 and len(tau) == q + 1
                assert tau in intersection(c, sigma).simplices


def test_horizontal_differential_on_triangle():
    D = build_double_complex(triangle_cover())
    # (ab-edge of nerve, vertex b) maps to +(b, b) - (a, b)
    j = D.basis[(1, 0)].index((("a", "b"), ("b",)))
    col = {D.basis[(0, 0)][i]: v for (i, jj), v in D.horizontal(1, 0).items() if jj == j}
    assert col == {(("b",), ("b",)): 1, (("a",), ("b",)): -1}


def test_bicomplex_identities_and_mutations():
    assert check_bicomplex(build_double_complex(triangle_cover()))
    flipped = 0
    for c in random_covers(2, 10):
        D = build_double_complex(c)
        assert check_bicomplex(D)
        for (p, q) in D.bidegrees():
            if p >= 1 and q >= 1 and D.horizontal(p, q).nnz:
                m = D.horizontal(p, q)
                (i, j), v = next(iter(m.items()))
                assert not check_bicomplex(D.replace_horizontal(p, q, m.with_entry(i, j, -v)))
                flipped += 1
                break
    assert flipped
    empty = Cover(SimplicialComplex(), {})
    assert check_bicomplex(build_double_complex(empty))


def test_every_sign_flip_is_detected():
    K = closure([[1, 2, 3]])
    c = Cover(K, {"A": K, "B": K})
    D = build_double_complex(c)
    assert check_bicomplex(D)
    m = D.horizontal(1, 1)
    for (i, j), v in m.items():
        assert not check_bicomplex(D.replace_horizontal(1, 1, m.with_entry(i, j, -v)))
    m = D.vertical(1, 1)
    for (i, j), v in m.items():
        assert not check_bicomplex(D.replace_vertical(1, 1, m.with_entry(i, j, -v)))


def test_total_complex_examples():
    point = Cover.from_maximal([[0]], {"U": [[0]]})
    assert chain_homology(total_complex(build_double_complex(point))) == [Zg]
    h = chain_homology(total_complex(build_double_complex(triangle_cover())))
    assert h[:2] == [Zg, Zg] and all(not g for g in h[2:])
    h = chain_homology(total_complex(build_double_complex(hexagon_cover())))
    assert h[:2] == [Zg, Zg] and all(not g for g in h[2:])


def test_total_complex_rejects_bad_double_complex():
    K = closure([[1, 2, 3]])
    D = build_double_complex(Cover(K, {"A": K, "B": K}))
    m = D.horizontal(1, 1)
    (i, j), v = next(iter(m.items()))
    with pytest.raises(ValueError):
        total_complex(D.replace_horizontal(1, 1, m.with_entry(i, j, -v)))


def test_unsigned_total_differential_is_not_a_complex():
    K = closure([[1, 2, 3]])
    D = build_double_complex(Cover(K, {"A": K, "B": K}))
    # d' + d'' without the (-1)^p twist
    n = 2
    src = [p for p in range(D.p_max + 1) if 0 <= n - p <= D.q_max]
    dst = [p for p in range(D.p_max + 1) if 0 <= n - 1 - p <= D.q_max]
    mid = [p for p in range(D.p_max + 1) if 0 <= n - 2 - p <= D.q_max]

    def unsigned(src, dst, n):
        blocks = {}
        for b, p in enumerate(src):
            if p - 1 in dst:
                blocks[(dst.index(p - 1), b)] = D.horizontal(p, n - p)
            if p in dst and n - p >= 1:
                blocks[(dst.index(p), b)] = D.vertical(p, n - p)
        return block_matrix(blocks, [D.rank(p, n - 1 - p) for p in dst], [D.rank(p, n - p) for p in src])

    assert not (unsigned(dst, mid, n - 1) @ unsigned(src, dst, n)).is_zero()
    tot = total_complex(D)
    assert tot.is_chain_complex()


def test_total_homology_matches_base():
    for c in random_covers(3, 25):
        tot = total_complex(build_double_complex(c))
        assert tot.is_chain_complex()
        top = max(c.base.dim, 0)
        h = chain_homology(tot)
        assert h[: top + 1] == homology(c.base)
        assert all(not g for g in h[top + 1:])


def test_total_homology_with_torsion():
    K = rp2()
    c = Cover(K, {f"T{i}": closure([t]) for i, t in enumerate(K.maximal_simplices)})
    h = chain_homology(total_complex(build_double_complex(c)), degrees=range(3))
    assert h == [Zg, HomologyGroup(0, (2,)), ZERO]


def test_row_homology_examples():
    D = build_double_complex(triangle_cover())
    assert row_homology(D, 0) == [HomologyGroup(3), ZERO]
    assert row_homology(D, 1) == [HomologyGroup(3), ZERO]
    K = closure([[1, 2, 3]])
    single = build_double_complex(Cover(K, {"X": K}))
    assert [row_homology(single, q) for q in range(3)] == [[HomologyGroup(3)], [HomologyGroup(3)], [HomologyGroup(1)]]


def test_row_exactness_on_torus():
    K = torus()
    c = Cover(K, {f"T{i}": closure([t]) for i, t in enumerate(K.maximal_simplices)})
    D = build_double_complex(c)
    for q in range(3):
        for coeff in (CoefficientSpec.integers(), F2):
            h = row_homology(D, q, coeff)
            assert h[0].free_rank == K.count(q) and not h[0].torsion
            assert all(not g for g in h[1:])


def test_path_components():
    K = closure([[1, 2], [3, 4], [5]])
    assert path_components(K) == {"1": "1", "2": "1", "3": "3", "4": "3", "5": "5"}


def test_bottom_row_examples():
    good = e1_bottom_row(triangle_cover())
    assert good.complex.ranks == tuple(nerve(triangle_cover()).f_vector)
    assert chain_homology(good.complex) == [Zg, Zg]
    hexa = e1_bottom_row(hexagon_cover())
    assert hexa.complex.ranks == (2, 2)
    assert hexa.basis[1] == [(("U1", "U2"), "1"), (("U1", "U2"), "4")]


def test_bottom_row_composites_vanish():
    for c in random_covers(4, 25):
        assert e1_bottom_row(c).complex.is_chain_complex()


def _dims(page):
    return {pq: d for pq, d in page.dims.items() if d}


def test_first_sequence_triangle():
    D = build_double_complex(triangle_cover())
    e1, e2 = ss_pages(D, "first", Q, r_max=2, r_min=1)
    assert _dims(e1) == {(0, 0): 3, (1, 0): 3}
    assert _dims(e2) == {(0, 0): 1, (1, 0): 1}


def test_first_sequence_single_part():
    K = torus()
    D = build_double_complex(Cover(K, {"X": K}))
    pages = ss_pages(D, "first", Q, r_max=4, r_min=1)
    betti = [1, 2, 1]
    for page in pages:
        assert _dims(page) == {(0, q): b for q, b in enumerate(betti)}
        assert page.stable


def test_first_e1_matches_homology_of_intersections():
    # independent route: E1[p,q] = sum over p-simplices of dim H_q(U_sigma)
    for c in random_covers(5, 15):
        D = build_double_complex(c)
        N = nerve(c)
        (e1,) = ss_pages(D, "first", Q, r_max=1, r_min=1)
        for (p, q), d in e1.dims.items():
            expected = sum(homology(intersection(c, s), Q, degrees=[q])[0].free_rank for s in N.simplices_of_dim(p))
            assert d == expected, (p, q)
        row = e1_bottom_row(c)
        for m, r in enumerate(row.complex.ranks):
            assert e1[(m, 0)] == r


def test_second_sequence_e1_and_collapse():
    for c in random_covers(6, 15):
        D = build_double_complex(c)
        e1, e2, e3 = ss_pages(D, "second", Q, r_max=3, r_min=1)
        betti = [g.free_rank for g in homology(c.base, Q, degrees=range(D.q_max + 1))]
        assert all(e1[(0, q)] == c.base.count(q) for q in range(D.q_max + 1))
        assert all(d == 0 for (p, q), d in e1.dims.items() if p > 0)
        assert all(e2[(0, q)] == b for q, b in enumerate(betti))
        assert all(d == 0 for (p, q), d in e2.dims.items() if p > 0)
        assert e2.stable and e3.stable


def test_limit_page_totals_match_betti():
    for c in random_covers(7, 15):
        D = build_double_complex(c)
        for which in ("first", "second"):
            lim = ss_limit(D, which, Q)
            betti = [g.free_rank for g in homology(c.base, Q, degrees=range(D.p_max + D.q_max + 1))]
            assert [lim.total(n) for n in range(len(betti))] == betti


def test_pages_reject_integers_and_bad_filtration():
    D = build_double_complex(triangle_cover())
    with pytest.raises(ValueError):
        ss_pages(D, "first", CoefficientSpec.integers())
    with pytest.raises(ValueError):
        ss_pages(D, "third", Q)


def test_page_zero_is_double_complex():
    D = build_double_complex(hexagon_cover())
    (e0,) = ss_pages(D, "first", Q, r_max=0)
    assert all(e0[pq] == D.rank(*pq) for pq in D.bidegrees())


def test_total_grading_order():
    D = build_double_complex(triangle_cover())
    assert total_grading(D, 1) == [(0, 1)] * 3 + [(1, 0)] * 3
