import random
from itertools import combinations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from nervecheck.algebra import CoefficientSpec, rank
from nervecheck.complexes import (
    HomologyGroup,
    SimplicialComplex,
    boundary_matrix,
    closure,
    homology,
    is_homologically_trivial,
    skeleton,
    vertex_key,
)
from nervecheck.generators import random_complex, rp2, simplex_boundary, torus

Q = CoefficientSpec.rationals()
F2 = CoefficientSpec.prime_field(2)

Zg = HomologyGroup(1)
ZERO = HomologyGroup()


def test_closure_examples():
    assert len(closure([["a", "b", "c"]])) == 7
    assert len(closure([])) == 0
    assert len(closure([[1, 2], [2, 3], [1, 3]])) == 6


def test_closure_rejects_repeats():
    with pytest.raises(ValueError):
        closure([[1, 1, 2]])


def test_constructor_requires_faces():
    with pytest.raises(ValueError):
        SimplicialComplex([[1, 2]])
    assert len(SimplicialComplex([[1], [2], [1, 2]])) == 3


def test_numeric_label_order():
    assert sorted(["10", "2", "b", "a", "1"], key=vertex_key) == ["1", "2", "10", "a", "b"]
    assert closure([["10", "2"]]).simplices_of_dim(1) == [("2", "10")]


def test_skeleton():
    tri = closure([["a", "b", "c"]])
    assert skeleton(tri, 1) == closure([["a", "b"], ["b", "c"], ["a", "c"]])
    assert skeleton(tri, tri.dim) == tri
    k4 = skeleton(simplex_boundary(3), 1)
    assert k4.f_vector == [4, 6]
    assert k4 == closure(combinations(range(4), 2))


def test_boundary_signs():
    K = closure([["a", "b", "c"]])
    d2 = boundary_matrix(K, 2)
    idx = K.index(1)
    col = {K.simplices_of_dim(1)[i]: v for (i, j), v in d2.items()}
    assert col == {("b", "c"): 1, ("a", "c"): -1, ("a", "b"): 1}
    assert idx[("a", "b")] == 0
    assert boundary_matrix(K, 3).cols == 0
    assert (boundary_matrix(K, 1) @ d2).is_zero()


def test_augmentation_row():
    K = closure([[1, 2]])
    aug = boundary_matrix(K, 0, augmented=True)
    assert aug.to_dense() == [[1, 1]]
    assert boundary_matrix(K, 0).shape == (0, 2)


def test_homology_examples():
    point = closure([[0]])
    assert homology(point) == [Zg]
    assert homology(point, reduced=True) == [ZERO]
    assert homology(simplex_boundary(2)) == [Zg, Zg]
    assert homology(rp2()) == [Zg, HomologyGroup(0, (2,)), ZERO]


def test_homology_of_empty_complex_is_zero():
    assert homology(SimplicialComplex()) == [ZERO]
    assert homology(SimplicialComplex(), reduced=True) == [ZERO]


def test_field_coefficients():
    assert homology(rp2(), F2)[1].free_rank == 1
    assert homology(rp2(), Q)[1].free_rank == 0
    assert homology(rp2(), F2)[2].free_rank == 1
    assert homology(torus(), Q) == [Zg, HomologyGroup(2), Zg]


def test_is_homologically_trivial():
    assert is_homologically_trivial(closure([range(4)]), 5)
    assert not is_homologically_trivial(simplex_boundary(2), 1)
    assert not is_homologically_trivial(closure([[1], [2]]), 0)
    with pytest.raises(ValueError):
        is_homologically_trivial(SimplicialComplex(), 0)


def test_homology_group_validation():
    with pytest.raises(ValueError):
        HomologyGroup(0, (2, 3))
    assert str(HomologyGroup(2, (2,))) == "Z^2 + Z/2"


@st.composite
def complexes(draw):
    seed = draw(st.integers(0, 10**6))
    return random_complex(random.Random(seed), max_simplices=40)


@settings(max_examples=40, deadline=None)
@given(complexes())
def test_boundary_squares_to_zero(K):
    for q in range(1, K.dim + 1):
        assert (boundary_matrix(K, q - 1, augmented=True) @ boundary_matrix(K, q)).is_zero()


@settings(max_examples=40, deadline=None)
@given(complexes(), st.randoms(use_true_random=False))
def test_homology_independent_of_input_order(K, rnd):
    tops = [list(s) for s in K.maximal_simplices]
    rnd.shuffle(tops)
    for t in tops:
        rnd.shuffle(t)
    assert homology(closure(tops)) == homology(K)


@settings(max_examples=40, deadline=None)
@given(complexes())
def test_euler_characteristic_and_rational_ranks(K):
    hz, hq = homology(K), homology(K, Q)
    assert sum((-1) ** j * g.free_rank for j, g in enumerate(hq)) == K.euler_characteristic()
    assert [g.free_rank for g in hz] == [g.free_rank for g in hq]


def test_universal_coefficients_mod_2():
    # dim H_j(K; F2) = b_j + #even torsion in degrees j and j-1
    for K in (rp2(), torus(), simplex_boundary(3)):
        hz, h2 = homology(K), homology(K, F2)
        for j, g in enumerate(h2):
            even = sum(1 for t in hz[j].torsion if t % 2 == 0)
            even += sum(1 for t in hz[j - 1].torsion if t % 2 == 0) if j else 0
            assert g.free_rank == hz[j].free_rank + even
