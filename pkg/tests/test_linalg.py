import itertools

import numpy as np
import pytest
from scipy import sparse

from spechtcoh.utils.errors import DimensionCapError
from spechtcoh.utils.linalg import (
    GFpMatrix,
    GFpSubspace,
    GFpVector,
    RowSpaceBuilder,
    annihilator,
    check_dense_cap,
    contains,
    intersect,
    kernel,
    member_quotient,
    rref,
    solve_affine,
    span,
    subspace_sum,
)


def random_subspace(rng, p, n, k):
    vectors = [GFpVector(p, rng.integers(0, p, n)) for _ in range(k)]
    return span(p, n, vectors)


def all_vectors(p, n):
    return [GFpVector(p, np.array(v)) for v in itertools.product(range(p), repeat=n)]


def test_vector_arithmetic():
    v = GFpVector(5, [1, 2, 3, 4])
    w = GFpVector(5, [4, 3, 2, 1])
    assert (v + w).is_zero()
    assert v - w == GFpVector(5, [2, 4, 1, 3])
    assert -v == GFpVector(5, [4, 3, 2, 1])
    assert 2 * v == GFpVector(5, [2, 4, 1, 3])
    assert GFpVector(3, [-1, 4, 6]) == GFpVector(3, [2, 1, 0])
    assert GFpVector.ones(3, 4).is_constant()
    assert GFpVector.from_terms(3, 4, [(1, 1), (1, 1), (3, -1)]).terms() == [(1, 2), (3, 2)]
    with pytest.raises(ValueError):
        v + GFpVector(3, [1, 2, 3, 4])
    with pytest.raises(ValueError):
        GFpVector(4, [1])
    with pytest.raises(ValueError):
        GFpVector(257, [1])


def test_rref_examples():
    identity = GFpMatrix.identity(5, 3)
    reduced, pivots, rank = rref(identity)
    assert reduced == identity and pivots == [0, 1, 2] and rank == 3

    reduced, pivots, rank = rref(GFpMatrix(3, np.zeros((2, 4), dtype=np.int64)))
    assert rank == 0 and pivots == []

    matrix = GFpMatrix(3, [[1, 2, 0], [2, 1, 0], [0, 0, 1]])
    reduced, pivots, rank = rref(matrix)
    assert reduced == GFpMatrix(3, [[1, 2, 0], [0, 0, 1], [0, 0, 0]])
    assert pivots == [0, 2] and rank == 2


def test_rref_is_idempotent():
    rng = np.random.default_rng(7)
    matrix = GFpMatrix(7, rng.integers(0, 7, (9, 12)))
    once, pivots, rank = rref(matrix)
    twice, pivots_again, rank_again = rref(once)
    assert once == twice and pivots == pivots_again and rank == rank_again


@pytest.mark.parametrize("p", [3, 5, 251])
@pytest.mark.parametrize("seed", range(4))
def test_kernel_multiplies_back_to_zero(p, seed):
    rng = np.random.default_rng(seed)
    matrix = GFpMatrix(p, rng.integers(0, p, (5, 9)))
    null = kernel(matrix)
    _, _, rank = rref(matrix)
    assert null.dim == 9 - rank
    for vector in null.vectors():
        assert (matrix @ vector).is_zero()


def test_kernel_of_trivial_matrices():
    assert kernel(GFpMatrix.identity(3, 4)) == GFpSubspace.zero(3, 4)
    assert kernel(GFpMatrix(3, np.zeros((3, 4), dtype=np.int64))) == GFpSubspace.full(3, 4)


def test_sparse_and_dense_agree():
    rng = np.random.default_rng(11)
    dense = rng.integers(0, 5, (40, 15)) * (rng.random((40, 15)) < 0.2)
    assert kernel(GFpMatrix(5, dense)) == kernel(GFpMatrix(5, sparse.csr_matrix(dense)))


@pytest.mark.parametrize("seed", range(3))
def test_blockwise_rows_match_one_shot(seed):
    rng = np.random.default_rng(seed)
    rows = rng.integers(0, 3, (50, 12)) * (rng.random((50, 12)) < 0.3)
    one_shot = RowSpaceBuilder(3, 12)
    one_shot.add(rows)
    blockwise = RowSpaceBuilder(3, 12)
    blockwise.add_matrix(sparse.csr_matrix(rows), block_rows=7)
    assert one_shot.row_space() == blockwise.row_space()

    reduced, pivots, rank = rref(GFpMatrix(3, rows))
    assert list(one_shot.row_space().pivots) == pivots
    np.testing.assert_array_equal(one_shot.row_space().basis, reduced.toarray()[:rank])


def test_span_sum_and_membership():
    p, n = 5, 6
    rng = np.random.default_rng(3)
    a = random_subspace(rng, p, n, 3)
    zero = GFpSubspace.zero(p, n)
    assert subspace_sum(a, zero) == a
    assert intersect(a, a) == a
    assert intersect(a, zero) == zero
    assert contains(a, GFpVector.zeros(p, n))
    assert member_quotient(a, subspace_sum(a, zero)) == 0
    for k, vector in enumerate(a.vectors()):
        assert contains(a, vector)
        assert a.coordinates(vector).tolist() == [int(j == k) for j in range(a.dim)]
    with pytest.raises(ValueError):
        GFpSubspace.zero(p, n).coordinates(GFpVector.unit(p, n, 0))
    for vector, y in itertools.product(a.vectors(), annihilator(a).vectors()):
        assert int(vector.as_int64() @ y.as_int64()) % p == 0


@pytest.mark.parametrize("seed", range(3))
def test_intersection_exhaustive(seed):
    p, n = 3, 6
    rng = np.random.default_rng(seed)
    a = random_subspace(rng, p, n, 3)
    b = random_subspace(rng, p, n, 4)
    both = intersect(a, b)
    for vector in all_vectors(p, n):
        assert contains(both, vector) == (contains(a, vector) and contains(b, vector))
    assert subspace_sum(a, b).dim + both.dim == a.dim + b.dim


@pytest.mark.parametrize("seed", range(5))
def test_modular_law(seed):
    p, n = 5, 7
    rng = np.random.default_rng(seed)
    c = random_subspace(rng, p, n, 4)
    a = span(p, n, [c.vectors()[0] + 2 * c.vectors()[-1]])
    b = random_subspace(rng, p, n, 3)
    assert subspace_sum(a, intersect(b, c)) == intersect(subspace_sum(a, b), c)


def test_solve_affine_edge_cases():
    assert solve_affine([], 4, 3) == GFpSubspace.full(3, 4)
    assert solve_affine([(GFpMatrix.identity(3, 4), [])], 4, 3) == GFpSubspace.zero(3, 4)
    assert solve_affine(
        [(GFpMatrix.identity(3, 4), [GFpVector.unit(3, 4, k) for k in range(4)])], 4, 3
    ) == GFpSubspace.full(3, 4)
    with pytest.raises(ValueError):
        solve_affine([(GFpMatrix.identity(3, 3), [])], 4, 3)


@pytest.mark.parametrize("seed", range(4))
def test_solve_affine_exhaustive(seed):
    p, n = 3, 4
    rng = np.random.default_rng(seed)
    first = GFpMatrix(p, rng.integers(0, p, (3, n)))
    first_target = GFpVector(p, rng.integers(0, p, 3))
    second = GFpMatrix(p, rng.integers(0, p, (2, n)))
    second_target = GFpVector(p, rng.integers(0, p, 2))
    solutions = solve_affine([(first, [first_target]), (second, [second_target])], n, p)

    def in_line(image, target):
        return any(image == c * target for c in range(p))

    for vector in all_vectors(p, n):
        expected = in_line(first @ vector, first_target) and in_line(second @ vector, second_target)
        assert contains(solutions, vector) == expected

    sparse_first = GFpMatrix(p, sparse.csr_matrix(first.toarray()))
    sparse_second = GFpMatrix(p, sparse.csr_matrix(second.toarray()))
    assert solve_affine(
        [(sparse_first, [first_target]), (sparse_second, [second_target])], n, p
    ) == solutions
    assert solve_affine(
        [(first, [first_target]), (second, [second_target])], n, p, floor_dim=solutions.dim
    ) == solutions


def test_dense_cap():
    check_dense_cap(100, None)
    check_dense_cap(100, 100)
    with pytest.raises(DimensionCapError) as info:
        check_dense_cap(101, 100)
    assert info.value.required == 101
