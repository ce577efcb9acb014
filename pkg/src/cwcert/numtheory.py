"""Exact elementary number theory used by every non-existence criterion.

Factorizations, multiplicative orders, self-conjugacy of integers modulo v,
the field-descent function F(v, n), and the decomposition-group test for a
Galois automorphism fixing the prime ideals above n in Z[zeta_v].
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from math import gcd
from typing import Iterator

import sympy


@dataclass(frozen=True)
class Factorization:
    """Canonical prime factorization of a positive integer."""

    value: int
    factors: tuple[tuple[int, int], ...]

    def __iter__(self) -> Iterator[tuple[int, int]]:
        return iter(self.factors)

    @property
    def primes(self) -> tuple[int, ...]:
        """The set D(value) of distinct prime divisors, ascending."""
        return tuple(p for p, _ in self.factors)


@lru_cache(maxsize=None)
def factorize(n: int) -> Factorization:
    """Prime factorization of ``n >= 1``; 1 yields the empty product."""
    if n < 1:
        raise ValueError(f"factorize requires n >= 1, got {n}")
    pairs = tuple(sorted(sympy.factorint(n).items()))
    return Factorization(n, pairs)


def prime_divisors(n: int) -> tuple[int, ...]:
    """D(n): the distinct prime divisors of n, ascending."""
    return factorize(n).primes


def nu(p: int, n: int) -> int:
    """The p-adic valuation: the exponent e with p^e || n (n != 0)."""
    if n == 0:
        raise ValueError("valuation of 0 is undefined")
    n = abs(n)
    e = 0
    while n % p == 0:
        n //= p
        e += 1
    return e


def delta(u: int) -> int:
    """delta(u): number of distinct prime divisors of u."""
    return len(factorize(u).factors)


def totient(n: int) -> int:
    """Euler's totient of n >= 1."""
    return int(sympy.totient(n))


def mult_ord(t: int, m: int) -> int:
    """Least k >= 1 with t^k = 1 (mod m); the trivial modulus m=1 gives 1."""
    if m < 1:
        raise ValueError(f"modulus must be positive, got {m}")
    if m == 1:
        return 1
    t %= m
    if gcd(t, m) != 1:
        raise ValueError(f"mult_ord requires gcd(t, m) = 1, got t={t}, m={m}")
    order = 1
    acc = t
    while acc != 1:
        acc = acc * t % m
        order += 1
    return order


def p_free_part(x: int, p: int) -> int:
    """x(p): x with every factor of the prime p removed."""
    if x < 1:
        raise ValueError(f"p_free_part requires x >= 1, got {x}")
    while x % p == 0:
        x //= p
    return x


def is_squarefree(n: int) -> bool:
    """True iff no prime square divides |n| (n != 0)."""
    if n == 0:
        raise ValueError("is_squarefree is undefined for 0")
    return all(e == 1 for _, e in factorize(abs(n)).factors)


@lru_cache(maxsize=None)
def _prime_self_conjugate(p: int, v: int) -> bool:
    """True iff some power of the prime p is -1 modulo the p-free part of v."""
    m = p_free_part(v, p)
    if m <= 2:
        return True
    ord_p = mult_ord(p % m, m)
    if ord_p % 2 != 0:
        return False
    return pow(p, ord_p // 2, m) == m - 1


def is_self_conjugate(n: int, v: int) -> bool:
    """True iff every prime p | n has p^j = -1 (mod v(p)) for some j.

    Complex conjugation then fixes every prime ideal above n in Z[zeta_v].
    Trivial moduli (v(p) <= 2) count as self-conjugate.
    """
    if n < 1 or v < 1:
        raise ValueError("is_self_conjugate requires positive arguments")
    return all(_prime_self_conjugate(p, v) for p in prime_divisors(n))


def _mu_q(q: int, v: int) -> int:
    """The modulus mu_q used by the field-descent exponent b(q, v, n)."""
    primes_v = prime_divisors(v)
    if v % 2 == 1 or q == 2:
        prod = 1
        for p in primes_v:
            if p != q:
                prod *= p
        return prod
    prod = 4
    for p in primes_v:
        if p not in (2, q):
            prod *= p
    return prod


def _b_exponent(r: int, v: int, n: int) -> int:
    """The exponent b(r, v, n) of the field-descent conductor at the prime r."""
    primes_n = prime_divisors(n)
    if r == 2:
        others = [q for q in primes_n if q != 2]
        if not others:
            return 2  # convention when D(n) = {2}
        return max(
            nu(2, q * q - 1) + nu(2, mult_ord(q, _mu_q(q, v))) - 1
            for q in others
        )
    others = [q for q in primes_n if q != r]
    if not others:
        return 1  # convention when D(n) = {r}
    return max(
        nu(r, pow(q, r - 1) - 1) + nu(r, mult_ord(q, _mu_q(q, v)))
        for q in others
    )


@lru_cache(maxsize=None)
def f_value(v: int, n: int) -> int:
    """The field-descent function F(v, n).

    Any X in Z[zeta_v] with X * conj(X) = n already lies (up to a root of
    unity) in the subfield of conductor F(v, n); the F-bound rule turns this
    into a size obstruction.
    """
    if v <= 1 or n <= 1:
        raise ValueError("f_value requires v > 1 and n > 1")
    prod = 1
    for p in prime_divisors(v):
        prod *= p ** _b_exponent(p, v, n)
    return gcd(v, prod)


@lru_cache(maxsize=None)
def _power_residues(q: int, m: int) -> frozenset[int]:
    """The cyclic subgroup generated by q modulo m (m coprime to q)."""
    if m == 1:
        return frozenset({0})
    subgroup = set()
    acc = 1
    while acc not in subgroup:
        subgroup.add(acc)
        acc = acc * q % m
    return frozenset(subgroup)


def fixes_prime_ideals(t: int, n: int, v: int) -> bool:
    """True iff the Galois map zeta_v -> zeta_v^t fixes every prime ideal of n.

    For each prime q | n the primes above q in Z[zeta_v] are permuted by
    Gal(Q(zeta_v)/Q) according to the cosets of <q> in (Z/v(q))*, so the
    ideal-fixing condition is t mod v(q) in <q> for every q | n.
    """
    if v < 1:
        raise ValueError("v must be positive")
    if gcd(t, v) != 1:
        raise ValueError(f"fixes_prime_ideals requires gcd(t, v) = 1, got {t}, {v}")
    for q in prime_divisors(n):
        m = p_free_part(v, q)
        if m == 1:
            continue
        if t % m not in _power_residues(q % m, m):
            return False
    return True


def eligible_multipliers(n: int, v: int) -> list[int]:
    """All t in [1, v), coprime to v, fixing the prime ideals of n, ascending."""
    if v < 2:
        raise ValueError("eligible_multipliers requires v >= 2")
    return [
        t
        for t in range(1, v)
        if gcd(t, v) == 1 and fixes_prime_ideals(t, n, v)
    ]
