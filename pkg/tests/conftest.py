"""Shared constants and helpers for the test suite."""

from __future__ import annotations

import os

import pytest

from cwcert.cyclotomic import CycInt
from cwcert.grouprings import GroupRingElem


def cyc_from_powers(u: int, powers: dict[int, int]) -> CycInt:
    """Build sum_j c_j zeta_u^j from a sparse exponent -> coefficient map."""
    vec = [0] * u
    for e, c in powers.items():
        vec[e % u] += c
    return CycInt.from_power_coeffs(u, vec)


# Two known primitive norm-36 classes at conductor 60, written on the power
# basis 1, zeta, ..., zeta^15 of Q(zeta_60).
THETA1 = {
    15: -3, 14: -2, 11: 1, 10: 2, 9: 1, 8: 4, 6: 2, 5: 5, 4: 2, 2: -4, 1: -1, 0: -4,
}
THETA2 = {
    15: -1, 14: 1, 11: -3, 10: -1, 9: -3, 8: -2, 6: -1, 5: 5, 4: -1, 2: 2, 1: 3,
}

# Known non-rational norm-36 classes at conductors 15 and 20.
X15 = {0: 3, 1: -6, 2: -3, 3: 3, 4: -6, 5: 3, 7: -3}
X20 = {0: 4, 3: -4, 5: 2, 7: -4}


def theta1() -> CycInt:
    return cyc_from_powers(60, THETA1)


def theta2() -> CycInt:
    return cyc_from_powers(60, THETA2)


def known_icw2_77_100() -> GroupRingElem:
    """A proper element of Z[C_77] with coefficients in [-2, 2] and weight 100."""
    squares = [1, 3, 4, 5, 9]  # nonzero squares mod 11
    nonsquares = [2, 6, 7, 8, 10]
    delta = {1, 2, 4}  # a planar difference set mod 7
    coeffs = [0] * 77
    for b in squares:
        for t in range(7):
            e = (11 * t + 7 * b) % 77
            if t == 0:
                coeffs[e] = 2
            elif t in delta:
                coeffs[e] = -2
    for b in nonsquares:
        for t in range(7):
            e = (11 * t + 7 * b) % 77
            if t == 0:
                coeffs[e] = -1
            elif t in delta:
                coeffs[e] = 1
    return GroupRingElem.from_cyclic_list(77, coeffs)


@pytest.fixture()
def no_cache_env(monkeypatch):
    """Run enumeration without any cache so timings are honest."""
    monkeypatch.delenv("CWM_CACHE", raising=False)
    return None


@pytest.fixture(scope="session")
def session_cache_dir(tmp_path_factory):
    """A writable cache shared across one test session."""
    return str(tmp_path_factory.mktemp("weilcache"))


def naive_cw_solutions(v: int, n: int) -> list[tuple[int, ...]]:
    """Exhaustive exact oracle: all +-1/0 vectors of length v with cyclic
    autocorrelation n at shift 0 and 0 elsewhere (no equivalence reduction).

    Exponential in v; only for tiny v.
    """
    import itertools

    out = []
    positions = range(v)
    for support in itertools.combinations(positions, n):
        for signs in itertools.product((1, -1), repeat=n):
            vec = [0] * v
            for pos, sg in zip(support, signs):
                vec[pos] = sg
            ok = True
            for shift in range(1, v):
                acc = 0
                for i in range(v):
                    if vec[i]:
                        acc += vec[i] * vec[(i + shift) % v]
                if acc != 0:
                    ok = False
                    break
            if ok:
                out.append(tuple(vec))
    return out
