from math import comb

import numpy as np
import pytest

from spechtcoh.utils.cohomology import Provenance, verify_certificate
from spechtcoh.utils.combinatorics import Partition, tabloid_basis
from spechtcoh.utils.constructions import (
    BalancedParams,
    FirstRowParams,
    balanced_class_coefficient,
    balanced_class_total,
    balanced_class_vector,
    balanced_vector,
    canonical_coefficient,
    canonical_coefficient_exact,
    canonical_tabloid,
    family_vector,
    first_row_vector,
    hand_vector_33,
)
from spechtcoh.utils.errors import CharacteristicError
from spechtcoh.utils.linalg import GFpVector
from spechtcoh.utils.specht import f_lambda, in_specht, psi_matrix

# large enough that the class coefficients stay exact; canonical ones are compared modulo it
EXACT = 251

SMALL_BALANCED = [BalancedParams(3, 1), BalancedParams(5, 1)]
IDENTITY_PARAMS = [
    BalancedParams(3, 1),
    BalancedParams(3, 2),
    BalancedParams(5, 1),
    BalancedParams(7, 1),
]


def exact(vector):
    return GFpVector(EXACT, vector.as_int64())


def test_hand_vector_terms():
    u = hand_vector_33()
    basis = tabloid_basis(Partition((3, 3)))
    assert len(u.support()) == 16
    assert u[basis.rank(basis.tabloid_from_second_row([1, 3, 4]))] == 1
    assert u[basis.rank(basis.tabloid_from_second_row([1, 2, 3]))] == 2
    assert u[basis.rank(basis.tabloid_from_second_row([3, 4, 5]))] == 0


def test_first_row_vector():
    params = FirstRowParams(3, 1, 2)
    assert params.partition == Partition((8, 3))
    assert params.d == 11
    u = first_row_vector(params)
    basis = tabloid_basis(params.partition)
    for index in u.support():
        assert basis.unrank(int(index)).word[:3] == (1, 1, 1)


def test_parameter_validation():
    with pytest.raises(CharacteristicError):
        BalancedParams(2, 1)
    with pytest.raises(ValueError):
        BalancedParams(3, 0)
    with pytest.raises(ValueError):
        FirstRowParams(3, 2, 2)
    with pytest.raises(ValueError):
        BalancedParams(4, 1)
    with pytest.raises(ValueError):
        family_vector("second-row")


@pytest.mark.parametrize("params", SMALL_BALANCED)
def test_balanced_classes_partition_the_basis(params):
    basis = tabloid_basis(params.partition)
    classes = [balanced_class_vector(params, i) for i in range(params.q)]
    total = np.zeros(basis.size, dtype=np.int64)
    for i, vector in enumerate(classes):
        assert len(vector.support()) == balanced_class_total(params, i)
        total += vector.as_int64()
    np.testing.assert_array_equal(total, np.ones(basis.size, dtype=np.int64))
    assert sum(balanced_class_total(params, i) for i in range(params.q)) == basis.size
    with pytest.raises(ValueError):
        balanced_class_vector(params, params.q)


@pytest.mark.parametrize("params", SMALL_BALANCED)
def test_balanced_class_images_depend_on_small_count(params):
    q = params.q
    for i in range(q):
        v_i = exact(balanced_class_vector(params, i))
        for s in range(q):
            psi = psi_matrix(params.partition, 1, s, EXACT)
            target = tabloid_basis(psi.target)
            small = np.count_nonzero(target.words[:, : q - 1] == 2, axis=1)
            expected = [balanced_class_coefficient(params, i, s, int(t)) % EXACT for t in small]
            assert psi.apply(v_i) == GFpVector(EXACT, expected)


@pytest.mark.parametrize("params", SMALL_BALANCED)
def test_canonical_coefficients_from_matrices(params):
    q = params.q
    counts = np.count_nonzero(tabloid_basis(params.partition).words[:, : q - 1] == 2, axis=1)
    u = GFpVector(EXACT, counts + 1)
    for s in range(q):
        psi = psi_matrix(params.partition, 1, s, EXACT)
        target = tabloid_basis(psi.target)
        image = psi.apply(u)
        for t in range(s + 1):
            tabloid = canonical_tabloid(params, s, t)
            assert image[target.rank(tabloid)] == canonical_coefficient_exact(params, s, t) % EXACT


@pytest.mark.parametrize("params", IDENTITY_PARAMS)
def test_canonical_coefficient_identities(params):
    q, p = params.q, params.p
    for s in range(1, q):
        assert canonical_coefficient(params, s, s - 1) == 0
        for t in range(1, s + 1):
            difference = canonical_coefficient_exact(params, s, t) - canonical_coefficient_exact(
                params, s, t - 1
            )
            assert difference == comb(2 * q - s - 1, q - 1)
            assert difference % p == 0
            assert canonical_coefficient(params, s, t) == 0
    for s in range(q):
        for t in range(s + 1):
            assert canonical_coefficient(params, s, t) == canonical_coefficient_exact(params, s, t) % p


def test_canonical_coefficient_small_values():
    params = BalancedParams(3, 1)
    assert canonical_coefficient_exact(params, 1, 0) == 18
    assert canonical_coefficient_exact(params, 1, 1) == 24
    assert canonical_coefficient_exact(params, 0, 0) == 40
    with pytest.raises(ValueError):
        canonical_tabloid(params, 1, 2)
    with pytest.raises(ValueError):
        canonical_coefficient(params, 3, 0)


def test_class_coefficient_guards():
    params = BalancedParams(3, 1)
    assert balanced_class_coefficient(params, 0, 1, 1) == 0
    assert balanced_class_coefficient(params, 2, 2, 0) == 0
    assert balanced_class_coefficient(params, 1, 0, 0) == balanced_class_total(params, 1)


@pytest.mark.parametrize("params", SMALL_BALANCED)
def test_balanced_vector_images(params):
    u = balanced_vector(params)
    p, q = params.p, params.q
    assert psi_matrix(params.partition, 1, 0, p).apply(u) == GFpVector(p, [1])
    for s in range(1, q):
        assert psi_matrix(params.partition, 1, s, p).apply(u).is_zero()
    witness = psi_matrix(params.partition, 1, q - 1, p)
    assert witness.apply(f_lambda(params.partition, p)) == (q + 1) * f_lambda(witness.target, p)


@pytest.mark.parametrize("params", SMALL_BALANCED)
def test_balanced_certificates_verify(params):
    u = balanced_vector(params)
    certificate = verify_certificate(params.partition, params.p, u, Provenance.BALANCED)
    assert certificate.verified
    assert certificate.multiples[(1, 0)] == 1
    assert all(c == 0 for (i, v), c in certificate.multiples.items() if v > 0)


def test_hand_and_balanced_differ_by_specht_and_f():
    params = BalancedParams(3, 1)
    partition = params.partition
    difference = hand_vector_33() - balanced_vector(params) - 2 * f_lambda(partition, 3)
    assert in_specht(partition, 3, difference)
    assert not in_specht(partition, 3, hand_vector_33() - balanced_vector(params))


@pytest.mark.parametrize(
    "name, p, a, b, parts, provenance",
    [
        ("eq-4.1", 3, 1, 2, (3, 3), Provenance.HAND_33),
        ("thm-5.11", 3, 1, 2, (8, 3), Provenance.FIRST_ROW_83),
        ("thm-5.11", 3, 1, 3, (26, 3), Provenance.FIRST_ROW),
        ("papa", 3, 1, 2, (3, 3), Provenance.BALANCED),
        ("papa", 5, 1, 2, (5, 5), Provenance.BALANCED),
    ],
)
def test_family_provenance(name, p, a, b, parts, provenance):
    assert Provenance.for_family(name, p, a, b) is provenance
    if sum(parts) <= 11:
        partition, u = family_vector(name, p, a, b)
        assert partition == Partition(parts)
        assert verify_certificate(partition, u.p, u, provenance).verified


def test_unknown_family_provenance():
    with pytest.raises(ValueError):
        Provenance.for_family("hand-33")


@pytest.mark.slow
def test_balanced_family_on_48620_tabloids():
    params = BalancedParams(3, 2)
    partition, u = family_vector("papa", 3, 2)
    assert partition == Partition((9, 9))
    assert tabloid_basis(partition).size == 48620

    certificate = verify_certificate(partition, 3, u, Provenance.BALANCED)
    assert certificate.verified, certificate.failure
    assert certificate.multiples[(1, 0)] == 1
    assert all(c == 0 for (i, v), c in certificate.multiples.items() if v > 0)

    witness = psi_matrix(partition, 1, params.q - 1, 3)
    assert witness.label == "psi_(1,8)"
    image = witness.apply(f_lambda(partition, 3))
    assert image == 10 * f_lambda(witness.target, 3)
    assert not image.is_zero()
    assert witness.apply(u).is_zero()


@pytest.mark.slow
@pytest.mark.parametrize(
    "name, p, a, b, parts",
    [
        ("thm-5.11", 3, 1, 3, (26, 3)),
        ("thm-5.11", 5, 1, 2, (24, 5)),
    ],
)
def test_large_first_row_vectors_verify(name, p, a, b, parts):
    partition, u = family_vector(name, p, a, b)
    assert partition == Partition(parts)
    certificate = verify_certificate(partition, p, u, Provenance.for_family(name, p, a, b))
    assert certificate.verified, certificate.failure
