"""
Explicit certificate vectors in closed form, and the binomial identities that
make them work.

* ``hand_vector_33``: a 16-term vector in M^(3,3) over GF(3).
* ``first_row_vector``: lambda = (p^b - 1, p^a), the sum of all tabloids with
  1..p^a in the first row.
* ``balanced_vector``: lambda = (p^a, p^a), sum over m of (m + 1) times the
  class of tabloids with exactly m of 1..p^a - 1 in the second row.

All vectors are emitted in the tabloid order of ``combinatorics``.
"""

from dataclasses import dataclass
from math import comb
from typing import Tuple

import numpy as np

from spechtcoh.utils.arith import Prime, binom_mod_p
from spechtcoh.utils.combinatorics import (
    DEFAULT_DIMENSION_CAP,
    Composition,
    Partition,
    Tabloid,
    tabloid_basis,
)
from spechtcoh.utils.errors import CharacteristicError
from spechtcoh.utils.linalg import GFpVector

HAND_33_POSITIVE = (
    (1, 3, 4), (1, 3, 5), (1, 3, 6), (1, 4, 5), (1, 4, 6), (1, 5, 6),
    (2, 3, 4), (2, 3, 5), (2, 3, 6), (2, 4, 5), (2, 4, 6), (2, 5, 6),
)
HAND_33_NEGATIVE = ((1, 2, 3), (1, 2, 4), (1, 2, 5), (1, 2, 6))

# command line family names; the (8,3) member of the first-row family is recorded separately
FAMILY_HAND_33 = "eq-4.1"
FAMILY_FIRST_ROW = "thm-5.11"
FAMILY_BALANCED = "papa"
FAMILIES = (FAMILY_HAND_33, FAMILY_FIRST_ROW, FAMILY_BALANCED)


def _odd_prime(p: int) -> int:
    p = Prime(p)
    if not p.is_odd:
        raise CharacteristicError("The certificate families need an odd prime.")
    return int(p)


@dataclass(frozen=True)
class BalancedParams:
    p: int
    a: int

    def __post_init__(self):
        object.__setattr__(self, "p", _odd_prime(self.p))
        if self.a < 1:
            raise ValueError(f"Exponent a must be at least 1, got {self.a}.")

    @property
    def q(self) -> int:
        return self.p ** self.a

    @property
    def d(self) -> int:
        return 2 * self.q

    @property
    def partition(self) -> Partition:
        return Partition((self.q, self.q))


@dataclass(frozen=True)
class FirstRowParams:
    p: int
    a: int
    b: int

    def __post_init__(self):
        object.__setattr__(self, "p", _odd_prime(self.p))
        if not 1 <= self.a < self.b:
            raise ValueError(f"Need 1 <= a < b, got a={self.a}, b={self.b}.")

    @property
    def partition(self) -> Partition:
        return Partition((self.p ** self.b - 1, self.p ** self.a))

    @property
    def d(self) -> int:
        return self.partition.d


def hand_vector_33(cap: int = DEFAULT_DIMENSION_CAP) -> GFpVector:
    """The hand-built certificate for (3,3) over GF(3), listed by second rows."""
    basis = tabloid_basis(Partition((3, 3)), cap)
    terms = [(basis.rank(basis.tabloid_from_second_row(row)), 1) for row in HAND_33_POSITIVE]
    terms += [(basis.rank(basis.tabloid_from_second_row(row)), -1) for row in HAND_33_NEGATIVE]
    return GFpVector.from_terms(3, basis.size, terms)


def first_row_vector(params: FirstRowParams, cap: int = DEFAULT_DIMENSION_CAP) -> GFpVector:
    basis = tabloid_basis(params.partition, cap)
    head = basis.words[:, : params.p ** params.a]
    return GFpVector(params.p, np.all(head == 1, axis=1).astype(np.int64))


def _second_row_counts(params: BalancedParams, cap: int) -> np.ndarray:
    basis = tabloid_basis(params.partition, cap)
    return np.count_nonzero(basis.words[:, : params.q - 1] == 2, axis=1)


def balanced_class_vector(
    params: BalancedParams, i: int, cap: int = DEFAULT_DIMENSION_CAP
) -> GFpVector:
    """Indicator of the tabloids with exactly i of 1..p^a - 1 in row two."""
    if not 0 <= i <= params.q - 1:
        raise ValueError(f"i must lie in 0..{params.q - 1}, got {i}.")
    counts = _second_row_counts(params, cap)
    return GFpVector(params.p, (counts == i).astype(np.int64))


def balanced_vector(params: BalancedParams, cap: int = DEFAULT_DIMENSION_CAP) -> GFpVector:
    # a tabloid in class m carries coefficient m + 1
    counts = _second_row_counts(params, cap)
    return GFpVector(params.p, counts.astype(np.int64) + 1)


def balanced_class_total(params: BalancedParams, i: int) -> int:
    """psi_{1,0}(v_i) = C(p^a - 1, i) C(p^a + 1, p^a - i) . f_(2p^a), as an exact integer."""
    q = params.q
    return comb(q - 1, i) * comb(q + 1, q - i)


def balanced_class_coefficient(params: BalancedParams, i: int, s: int, t: int) -> int:
    """
    Coefficient of ``canonical_tabloid(s, t)`` in psi_{1,s}(v_i): the source
    tabloids extend the t small and s - t large entries of the target's second
    row by i - t more small and p^a - s - i + t more large entries.
    """
    q = params.q
    if i < t or q - s + t - i < 0:
        return 0
    return comb(q - 1 - t, i - t) * comb(q - s + t + 1, q - s + t - i)


def _check_st(params: BalancedParams, s: int, t: int):
    if not 0 <= t <= s < params.q:
        raise ValueError(f"Need 0 <= t <= s < {params.q}, got s={s}, t={t}.")


def canonical_tabloid(params: BalancedParams, s: int, t: int) -> Tabloid:
    """The (2p^a - s, s)-tabloid with second row 1..t, p^a..p^a + s - t - 1."""
    _check_st(params, s, t)
    q = params.q
    shape = Composition((2 * q - s, s))
    second_row = list(range(1, t + 1)) + list(range(q, q + s - t))
    word = [1] * params.d
    for e in second_row:
        word[e - 1] = 2
    return Tabloid(tuple(word), shape)


def canonical_coefficient_exact(params: BalancedParams, s: int, t: int) -> int:
    """sum_{m=t}^{p^a-1} (m+1) C(p^a-1-t, m-t) C(p^a-s+t+1, m+1) over the integers."""
    _check_st(params, s, t)
    q = params.q
    return sum(
        (m + 1) * comb(q - 1 - t, m - t) * comb(q - s + t + 1, m + 1) for m in range(t, q)
    )


def canonical_coefficient(params: BalancedParams, s: int, t: int) -> int:
    """``canonical_coefficient_exact`` modulo p, term by term."""
    _check_st(params, s, t)
    p, q = params.p, params.q
    total = 0
    for m in range(t, q):
        factor = (m + 1) % p
        if factor == 0:
            continue
        total += factor * binom_mod_p(q - 1 - t, m - t, p) * binom_mod_p(q - s + t + 1, m + 1, p)
    return total % p


def family_vector(
    name: str, p: int = 3, a: int = 1, b: int = 2, cap: int = DEFAULT_DIMENSION_CAP
) -> Tuple[Partition, GFpVector]:
    """Dispatch for the command line families (``FAMILIES``)."""
    if name == FAMILY_HAND_33:
        return Partition((3, 3)), hand_vector_33(cap)
    if name == FAMILY_FIRST_ROW:
        params = FirstRowParams(p, a, b)
        return params.partition, first_row_vector(params, cap)
    if name == FAMILY_BALANCED:
        params = BalancedParams(p, a)
        return params.partition, balanced_vector(params, cap)
    raise ValueError(f"Unknown family '{name}'. Choose one of {', '.join(FAMILIES)}.")
