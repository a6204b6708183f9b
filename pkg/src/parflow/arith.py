"""Exact integer and rational arithmetic shared by every other module.

Everything is arbitrary precision.  Period bounds grow like
phi(N * (N-2)!) and overflow any fixed-width integer almost immediately,
so no operation here may ever round or truncate.
"""

from __future__ import annotations

import math
from fractions import Fraction


def frac_part(x: Fraction | int) -> Fraction:
    """Fractional part of x: the unique r with 0 <= r < 1 and x - r an integer."""
    x = Fraction(x)
    return Fraction(x.numerator % x.denominator, x.denominator)


def factorize(n: int) -> dict[int, int]:
    """Prime factorization of n >= 1 by trial division.

    Practical for n up to about 10**9; larger inputs are legal but slow.
    """
    if n < 1:
        raise ValueError(f"cannot factorize {n}: need n >= 1")
    factors: dict[int, int] = {}
    m = n
    d = 2
    while d * d <= m:
        while m % d == 0:
            factors[d] = factors.get(d, 0) + 1
            m //= d
        d += 1 if d == 2 else 2
    if m > 1:
        factors[m] = factors.get(m, 0) + 1
    return factors


def phi_from_factorization(factors: dict[int, int]) -> int:
    """Euler totient from an explicit prime factorization."""
    out = 1
    for prime, exp in factors.items():
        out *= (prime - 1) * prime ** (exp - 1)
    return out


def euler_phi(n: int) -> int:
    """Number of integers in [1, n] coprime to n."""
    if n < 1:
        raise ValueError(f"euler_phi requires n >= 1, got {n}")
    return phi_from_factorization(factorize(n))


def mult_order(a: int, n: int) -> int:
    """Minimal k >= 1 with a**k == 1 modulo n.

    a must be a unit modulo n.  Computed by brute iteration; the loop is
    bounded by euler_phi(n).
    """
    if n < 1:
        raise ValueError(f"mult_order requires n >= 1, got {n}")
    if math.gcd(a, n) != 1:
        raise ValueError(f"{a} is not a unit modulo {n}")
    if n == 1:
        return 1
    acc = a % n
    k = 1
    while acc != 1:
        acc = acc * a % n
        k += 1
    return k


def mod_inverse(p: int, n: int) -> int:
    """The integer d in [1, n] with p*d == 1 modulo n.

    Rejects non-coprime input.  For n == 1 the inverse is 1 by the
    range-normalization convention.
    """
    if n < 1:
        raise ValueError(f"mod_inverse requires a positive modulus, got {n}")
    if math.gcd(p, n) != 1:
        raise ValueError(f"{p} is not a unit modulo {n}")
    inv = pow(p, -1, n)
    return inv if inv != 0 else n


def geometric_sum_mod(q: int, f: int, m: int) -> int:
    """(1 + q + q**2 + ... + q**(f-1)) mod m, reduced at every step.

    The stepwise reduction keeps intermediate values below m even when f
    is enormous; f == 0 gives the empty sum 0.
    """
    if m < 1:
        raise ValueError(f"geometric_sum_mod requires a positive modulus, got {m}")
    if f < 0:
        raise ValueError(f"geometric_sum_mod requires f >= 0, got {f}")
    total = 0
    power = 1 % m
    qm = q % m
    for _ in range(f):
        total = (total + power) % m
        power = power * qm % m
    return total


def is_prime(n: int) -> bool:
    """Deterministic trial-division primality test for small n."""
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


def primes_upto(n: int) -> list[int]:
    """All primes <= n in increasing order (sieve of Eratosthenes)."""
    if n < 2:
        return []
    sieve = bytearray([1]) * (n + 1)
    sieve[0] = sieve[1] = 0
    for p in range(2, math.isqrt(n) + 1):
        if sieve[p]:
            sieve[p * p :: p] = bytearray(len(sieve[p * p :: p]))
    return [i for i, flag in enumerate(sieve) if flag]
