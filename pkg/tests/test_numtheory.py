"""Number-theoretic primitives, checked against independent oracles."""

from __future__ import annotations

import math

import pytest
import sympy

from cwcert.numtheory import (
    delta,
    eligible_multipliers,
    f_value,
    factorize,
    fixes_prime_ideals,
    is_self_conjugate,
    is_squarefree,
    mult_ord,
    nu,
    p_free_part,
    prime_divisors,
    totient,
)


def test_factorize_against_sympy():
    for n in [1, 2, 12, 97, 360, 2**10 * 3**4 * 7, 9999]:
        fac = factorize(n)
        assert dict(fac.factors) == sympy.factorint(n)
        assert math.prod(p**e for p, e in fac) == n
        assert fac.primes == tuple(sorted(sympy.factorint(n)))


def test_factorize_rejects_nonpositive():
    with pytest.raises(ValueError):
        factorize(0)


def test_nu_and_p_free_part():
    assert nu(2, 48) == 4
    assert nu(3, 48) == 1
    assert nu(5, 48) == 0
    assert p_free_part(48, 2) == 3
    assert p_free_part(155, 5) == 31
    assert p_free_part(7, 7) == 1


def test_delta_counts_distinct_primes():
    assert delta(1) == 0
    assert delta(8) == 1
    assert delta(60) == 3
    assert delta(2 * 3 * 5 * 7) == 4


def test_mult_ord_matches_sympy():
    for m in [3, 7, 16, 31, 60, 155]:
        for t in range(2, m):
            if math.gcd(t, m) != 1:
                continue
            assert mult_ord(t, m) == sympy.n_order(t, m)


def test_mult_ord_trivial_modulus():
    assert mult_ord(7, 1) == 1


def test_mult_ord_requires_coprime():
    with pytest.raises(ValueError):
        mult_ord(6, 9)


def test_is_squarefree():
    assert is_squarefree(1)
    assert is_squarefree(30)
    assert not is_squarefree(12)
    assert is_squarefree(-15)
    with pytest.raises(ValueError):
        is_squarefree(0)


def test_self_conjugacy_oracle():
    """p self-conjugate mod m iff -1 lies in <p> mod the p-free part."""

    def oracle(n: int, v: int) -> bool:
        for p in prime_divisors(n):
            m = p_free_part(v, p)
            if m <= 2:
                continue
            subgroup = {pow(p, j, m) for j in range(totient(m))}
            if (m - 1) not in subgroup:
                return False
        return True

    for n in [2, 3, 4, 6, 9, 10, 36]:
        for v in range(1, 80):
            assert is_self_conjugate(n, v) == oracle(n, v), (n, v)


def test_self_conjugacy_known_values():
    assert is_self_conjugate(2, 5)  # 2^2 = -1 mod 5
    assert is_self_conjugate(2, 31) is False  # ord_31(2) = 5, odd
    assert is_self_conjugate(3, 8) is False  # <3> = {1, 3} mod 8
    assert is_self_conjugate(3, 4)  # 3 = -1 mod 4


def test_fixes_prime_ideals_decomposition_group():
    # t fixes the primes above q in Z[zeta_v] iff t mod v(q) is a power of q.
    v, q = 31, 2  # <2> mod 31 = {1,2,4,8,16}
    fixing = {t for t in range(1, 31) if fixes_prime_ideals(t, q, v)}
    assert fixing == {1, 2, 4, 8, 16}
    # composite weight: both prime conditions must hold
    assert fixes_prime_ideals(1, 36, 35)
    for t in range(2, 35):
        if math.gcd(t, 35) != 1:
            continue
        in2 = (t % 35) in {pow(2, j, 35) for j in range(12)}
        in3 = (t % 35) in {pow(3, j, 35) for j in range(12)}
        assert fixes_prime_ideals(t, 36, 35) == (in2 and in3)


def test_eligible_multipliers_basic():
    mults = eligible_multipliers(4, 7)  # <2> mod 7 = {1, 2, 4}
    assert mults == [1, 2, 4]
    assert eligible_multipliers(9, 13) == [1, 3, 9]


def test_f_value_reproduces_known_entries():
    known = {
        (128, 49): 16,
        (147, 64): 21,
        (117, 81): 39,
        (160, 100): 20,
        (176, 100): 44,
        (192, 100): 24,
    }
    for (v, n), expected in known.items():
        assert f_value(v, n) == expected, (v, n)


def test_f_value_divides_v():
    for v in range(2, 120):
        for n in [4, 9, 25, 36, 100]:
            f = f_value(v, n)
            assert v % f == 0
            assert f >= 1


def test_f_value_rejects_trivial_args():
    with pytest.raises(ValueError):
        f_value(1, 36)
    with pytest.raises(ValueError):
        f_value(60, 1)
