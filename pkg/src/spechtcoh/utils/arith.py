"""
p-adic and binomial-coefficient arithmetic.

All binomials are evaluated digitwise modulo p, so arguments such as
C(2p^a - s - 1, p^a - 1) stay cheap for any exponent a.
"""

from dataclasses import dataclass
from math import isqrt
from typing import Tuple


def is_prime(n: int) -> bool:
    """Trial division; inputs are small."""
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    for q in range(3, isqrt(n) + 1, 2):
        if n % q == 0:
            return False
    return True


class Prime(int):
    """
    The characteristic p. Behaves like an ``int`` but is checked for
    primality on construction. p = 2 is accepted here; odd-only operations
    reject it themselves.
    """

    def __new__(cls, value):
        value = int(value)
        if not is_prime(value):
            raise ValueError(f"{value} is not a prime.")
        return super().__new__(cls, value)

    @property
    def is_odd(self) -> bool:
        return self != 2


@dataclass(frozen=True)
class PAdicDigits:
    """Base-p digits of a nonnegative integer, least significant first."""

    digits: Tuple[int, ...]
    p: int

    @property
    def value(self) -> int:
        total = 0
        for digit in reversed(self.digits):
            total = total * self.p + digit
        return total

    def __len__(self):
        return len(self.digits)


def p_adic_digits(n: int, p: int) -> PAdicDigits:
    if n < 0:
        raise ValueError(f"Expected a nonnegative integer, got {n}.")
    digits = []
    while n:
        n, digit = divmod(n, p)
        digits.append(digit)
    return PAdicDigits(tuple(digits), int(p))


def l_p(t: int, p: int) -> int:
    """Least nonnegative l with t < p**l."""
    if t < 0:
        raise ValueError(f"Expected a nonnegative integer, got {t}.")
    return len(p_adic_digits(t, p))


def p_adic_valuation(n: int, p: int) -> int:
    """Largest e with p**e dividing n (n > 0)."""
    if n <= 0:
        raise ValueError(f"Valuation is only defined for positive integers, got {n}.")
    e = 0
    while n % p == 0:
        n //= p
        e += 1
    return e


def kummer_valuation(x: int, y: int, p: int) -> int:
    """
    p-adic valuation of C(x + y, x), counted as the number of carries
    when x and y are added in base p.
    """
    if x < 0 or y < 0:
        raise ValueError(f"Expected nonnegative integers, got x={x}, y={y}.")
    carries = 0
    carry = 0
    while x or y or carry:
        x, dx = divmod(x, p)
        y, dy = divmod(y, p)
        carry = 1 if dx + dy + carry >= p else 0
        carries += carry
    return carries


def _small_binom_mod(n: int, k: int, p: int) -> int:
    # n, k < p: the digit binomial is a unit-free product of small factors
    if k > n:
        return 0
    numerator = 1
    denominator = 1
    for j in range(k):
        numerator = numerator * (n - j) % p
        denominator = denominator * (j + 1) % p
    return numerator * pow(denominator, -1, p) % p


def binom_mod_p(n: int, k: int, p: int) -> int:
    """C(n, k) mod p via the digitwise (Lucas) product; 0 when k > n or k < 0."""
    if k < 0 or n < 0 or k > n:
        return 0
    result = 1
    while n or k:
        n, n_digit = divmod(n, p)
        k, k_digit = divmod(k, p)
        if k_digit > n_digit:
            return 0
        result = result * _small_binom_mod(n_digit, k_digit, p) % p
    return result


def h0_criterion(partition, p: int) -> bool:
    """
    Congruence test for a nonzero fixed point in S^lambda: every part
    followed by a nonzero part must be congruent to -1 modulo
    p**l_p(next part). Vacuously true for one-row partitions.
    """
    parts = tuple(partition)
    for i in range(len(parts) - 1):
        nxt = parts[i + 1]
        if nxt == 0:
            continue
        if (parts[i] + 1) % (p ** l_p(nxt, p)) != 0:
            return False
    return True
