from math import comb

import pytest
from hypothesis import given
from hypothesis import strategies as st

from spechtcoh.utils.arith import (
    Prime,
    binom_mod_p,
    h0_criterion,
    kummer_valuation,
    l_p,
    p_adic_digits,
    p_adic_valuation,
)

primes = st.sampled_from([3, 5, 7, 11])


@given(st.integers(0, 200), st.integers(-3, 200), primes)
def test_binom_mod_p_matches_exact(n, k, p):
    expected = comb(n, k) % p if 0 <= k <= n else 0
    assert binom_mod_p(n, k, p) == expected


@given(st.integers(0, 120), st.integers(0, 120), primes)
def test_kummer_counts_valuation(x, y, p):
    assert kummer_valuation(x, y, p) == p_adic_valuation(comb(x + y, x), p)


@pytest.mark.parametrize("p", [3, 5, 7])
@pytest.mark.parametrize("a", [1, 2])
def test_all_top_digits_carry(p, a):
    q = p**a
    for y in range(1, q):
        assert kummer_valuation(q - 1, y, p) >= 1


@pytest.mark.parametrize(
    "t, p, expected",
    [(0, 3, 0), (1, 3, 1), (2, 3, 1), (3, 3, 2), (8, 3, 2), (9, 3, 3), (4, 5, 1), (25, 5, 3)],
)
def test_l_p(t, p, expected):
    assert l_p(t, p) == expected


def test_l_p_of_full_digit_strings():
    for p in (3, 5, 7):
        for length in range(1, 5):
            assert l_p(p**length - 1, p) == length


def test_p_adic_digits():
    digits = p_adic_digits(47, 3)
    assert digits.digits == (2, 0, 2, 1)
    assert digits.value == 47
    assert p_adic_digits(0, 5).digits == ()


def test_prime_rejects_composites():
    assert Prime(7).is_odd
    assert not Prime(2).is_odd
    with pytest.raises(ValueError):
        Prime(9)
    with pytest.raises(ValueError):
        Prime(1)


@pytest.mark.parametrize(
    "parts, p, expected",
    [
        ((8, 3), 3, True),
        ((3, 3), 3, False),
        ((5,), 3, True),
        ((5, 2, 1), 3, True),
        ((2, 2, 2, 2), 3, True),
        ((4, 4), 5, True),
        ((4, 4), 3, False),
        ((26, 3), 3, True),
        ((1, 1, 1), 3, False),
    ],
)
def test_h0_criterion(parts, p, expected):
    assert h0_criterion(parts, p) is expected


def test_invalid_arguments():
    with pytest.raises(ValueError):
        l_p(-1, 3)
    with pytest.raises(ValueError):
        p_adic_valuation(0, 3)
    with pytest.raises(ValueError):
        kummer_valuation(-1, 2, 3)
