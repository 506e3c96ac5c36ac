from math import factorial, prod

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from spechtcoh.utils.combinatorics import (
    Composition,
    Partition,
    Permutation,
    StandardTableau,
    act,
    act_on_words,
    conjugate,
    coxeter_generators,
    enumerate_tabloids,
    generate_partitions,
    hook_length_dimension,
    render_tabloid,
    standard_tableaux,
    tabloid_basis,
)
from spechtcoh.utils.errors import DimensionCapError

permutations_of_6 = st.permutations(range(1, 7)).map(lambda images: Permutation(tuple(images)))


def test_partition_parsing():
    assert Partition.parse("8,3") == Partition((8, 3))
    assert str(Partition.parse(" 3, 3 ")) == "(3,3)"
    assert Partition((4, 2)).dashed() == "4-2"
    assert Partition((1,)).scaled(9) == Partition((9,))
    with pytest.raises(ValueError):
        Partition.parse("3,4")
    with pytest.raises(ValueError):
        Partition.parse("a,b")
    for text in ("0", "3,0,0", "", "3,-1"):
        with pytest.raises(ValueError):
            Partition.parse(text)
    with pytest.raises(ValueError):
        Partition((3, 0, 1))


def test_composition_drops_trailing_zeros():
    assert Composition((5, 0)).parts == (5,)
    assert Composition((3, 0, 1)).num_rows == 3


def test_generate_partitions():
    assert [p.parts for p in generate_partitions(4)] == [
        (4,), (3, 1), (2, 2), (2, 1, 1), (1, 1, 1, 1),
    ]
    assert [len(generate_partitions(d)) for d in range(1, 9)] == [1, 2, 3, 5, 7, 11, 15, 22]


def test_conjugate():
    assert conjugate(Partition((3, 1))) == Partition((2, 1, 1))
    assert conjugate(Partition((4, 4))) == Partition((2, 2, 2, 2))


@pytest.mark.parametrize(
    "parts, size",
    [((3, 3), 20), ((8, 3), 165), ((9, 9), 48620), ((24, 5), 118755), ((5,), 1), ((2, 1, 1), 12)],
)
def test_tabloid_counts(parts, size):
    basis = tabloid_basis(Partition(parts))
    assert basis.size == size
    assert basis.size * prod(factorial(x) for x in parts) == factorial(sum(parts))


def test_tabloid_order_is_lexicographic():
    basis = tabloid_basis(Partition((3, 2, 1)))
    words = [tuple(int(x) for x in w) for w in basis.words]
    assert words == sorted(words)
    assert len(set(words)) == basis.size
    assert tabloid_basis(Partition((3, 3))).unrank(0).word == (1, 1, 1, 2, 2, 2)
    assert tabloid_basis(Partition((3, 3))).unrank(19).word == (2, 2, 2, 1, 1, 1)


@pytest.mark.parametrize("parts", [(3, 3), (3, 2, 1), (2, 2, 1), (4, 1, 1)])
def test_rank_inverts_unrank(parts):
    basis = tabloid_basis(Partition(parts))
    for k in range(basis.size):
        assert basis.rank(basis.unrank(k)) == k
    np.testing.assert_array_equal(basis.rank_words(basis.words), np.arange(basis.size))


def test_interior_zero_rows():
    basis = tabloid_basis(Composition((2, 0, 1)))
    assert basis.size == 3
    assert {tuple(int(x) for x in w) for w in basis.words} == {(1, 1, 3), (1, 3, 1), (3, 1, 1)}


def test_transposition_moves_entries():
    shape = Partition((3, 3))
    basis = tabloid_basis(shape)
    tabloid = basis.tabloid_from_rows([(1, 2, 3), (4, 5, 6)])
    moved = act(Permutation.transposition(6, 3, 4), tabloid)
    assert moved.word == (1, 1, 2, 1, 2, 2)
    assert moved.rows() == ((1, 2, 4), (3, 5, 6))


@settings(max_examples=50)
@given(permutations_of_6, permutations_of_6)
def test_action_is_a_left_action(sigma, tau):
    basis = tabloid_basis(Partition((3, 2, 1)))
    for k in range(0, basis.size, 7):
        tabloid = basis.unrank(k)
        assert act(sigma, act(tau, tabloid)) == act(sigma * tau, tabloid)


@settings(max_examples=30)
@given(permutations_of_6)
def test_permutation_of_matches_act(sigma):
    basis = tabloid_basis(Partition((4, 2)))
    perm = basis.permutation_of(sigma)
    assert sorted(perm.tolist()) == list(range(basis.size))
    for k in range(basis.size):
        assert perm[k] == basis.rank(act(sigma, basis.unrank(k)))
    words = act_on_words(sigma, basis.words)
    assert tuple(words[3]) == act(sigma, basis.unrank(3)).word


def test_coxeter_relations():
    generators = coxeter_generators(5)
    assert len(generators) == 4
    for i, s in enumerate(generators):
        assert (s * s).is_identity()
        if i + 1 < len(generators):
            t = generators[i + 1]
            assert (s * t * s * t * s * t).is_identity()
    assert coxeter_generators(2) == [Permutation((2, 1))]


def test_permutation_basics():
    sigma = Permutation((2, 3, 1))
    assert sigma(1) == 2
    assert (sigma * sigma.inverse()).is_identity()
    assert sigma.sign() == 1
    assert Permutation.transposition(4, 1, 3).sign() == -1
    with pytest.raises(ValueError):
        Permutation((1, 1, 2))


def test_render_tabloid():
    basis = tabloid_basis(Partition((3, 3)))
    assert render_tabloid(basis.tabloid_from_second_row([1, 3, 4])) == "134"
    wide = tabloid_basis(Partition((8, 3)))
    assert render_tabloid(wide.tabloid_from_second_row([4, 10, 11])) == "4,10,11"
    assert render_tabloid(tabloid_basis(Partition((4,))).unrank(0)) == "∅"


def test_enumerate_tabloids():
    tabloids = enumerate_tabloids(Partition((2, 1)))
    assert [t.word for t in tabloids] == [(1, 1, 2), (1, 2, 1), (2, 1, 1)]


def test_dimension_cap():
    with pytest.raises(DimensionCapError) as info:
        tabloid_basis(Partition((9, 9)), cap=1000)
    assert info.value.required == 48620
    assert info.value.cap == 1000
    assert "48620" in str(info.value)


@pytest.mark.parametrize(
    "parts, dim",
    [((3, 3), 5), ((8, 3), 110), ((2, 2, 2, 2), 14), ((5, 2, 1), 64), ((6,), 1), ((1, 1, 1, 1), 1)],
)
def test_hook_length_dimension(parts, dim):
    assert hook_length_dimension(Partition(parts)) == dim


@pytest.mark.parametrize("d", range(1, 9))
def test_standard_tableaux_match_hook_formula(d):
    for partition in generate_partitions(d):
        tableaux = standard_tableaux(partition)
        assert len(tableaux) == hook_length_dimension(partition)
        assert len(set(tableaux)) == len(tableaux)
        assert all(t.shape == partition for t in tableaux)


def test_standard_tableau_validation():
    tableau = StandardTableau(((1, 2, 4), (3, 5)))
    assert tableau.columns() == ((1, 3), (2, 5), (4,))
    assert tableau.row_word() == (1, 1, 2, 1, 2)
    with pytest.raises(ValueError):
        StandardTableau(((1, 3), (2, 2)))
    with pytest.raises(ValueError):
        StandardTableau(((2, 3), (1, 4)))
