"""Group rings, characters, inversion, orbits, and rational idempotents."""

from __future__ import annotations

import random

import pytest
from hypothesis import given, settings, strategies as st

from cwcert.cyclotomic import CycInt
from cwcert.grouprings import (
    AbelianGroup,
    GroupRingElem,
    NonIntegral,
    all_characters,
    char_eval,
    idempotent_component,
    inversion,
    orbits_under_power,
    quotient_map,
)

GROUPS = [(5,), (12,), (2, 6), (3, 3), (2, 2, 6), (60,)]


def random_elem(rng: random.Random, factors: tuple[int, ...], bound: int = 2):
    group = AbelianGroup(factors)
    coeffs = {}
    for g in group.elements():
        c = rng.randint(-bound, bound)
        if c:
            coeffs[g] = c
    return GroupRingElem.from_int_coeffs(group, coeffs)


def test_group_basics():
    g = AbelianGroup((2, 6))
    assert g.order == 12
    assert g.exponent == 6
    assert len(list(g.elements())) == 12
    e = g.identity
    x = (1, 5)
    assert g.mult(x, g.inverse(x)) == e
    assert g.power(x, g.element_order(x)) == e


def test_character_count_and_orthogonality():
    group = AbelianGroup((2, 4))
    chars = all_characters(group)
    assert len(chars) == 8
    # column orthogonality: sum_chi chi(g) = 0 unless g = identity
    for g in group.elements():
        total = CycInt.zero(group.exponent)
        for chi in chars:
            total = total + chi.value(g, group.exponent)
        if g == group.identity:
            assert total.as_integer() == 8
        else:
            assert total.is_zero()


def test_inversion_roundtrip_random_elements():
    rng = random.Random(31)
    for factors in GROUPS:
        group = AbelianGroup(factors)
        x = random_elem(rng, factors)
        values = {chi: char_eval(chi, x) for chi in all_characters(group)}
        assert inversion(values, group).int_coeffs() == x.int_coeffs()


def test_inversion_rejects_non_integral_data():
    group = AbelianGroup.cyclic(3)
    chars = all_characters(group)
    values = {chi: CycInt.integer(3, 1) for chi in chars}
    trivial = next(c for c in chars if c.order == 1)
    values[trivial] = CycInt.integer(3, 2)  # breaks divisibility by |G|
    with pytest.raises(NonIntegral):
        inversion(values, group)


def test_convolution_matches_characters():
    """chi(X * Y) = chi(X) chi(Y) for every character — exact."""
    rng = random.Random(37)
    for factors in [(6,), (2, 4), (3, 3)]:
        group = AbelianGroup(factors)
        x, y = random_elem(rng, factors), random_elem(rng, factors)
        conv = x.convolve(y)
        w = group.exponent
        for chi in all_characters(group):
            lhs = char_eval(chi, conv).lift(w)
            rhs = char_eval(chi, x) * char_eval(chi, y)
            assert lhs == rhs.lift(w)


def test_conj_invert_gives_weight_at_characters():
    elem = GroupRingElem.from_cyclic_list(7, [-1, -1, 0, -1, 0, 0, 1])
    prod = elem.convolve(elem.conj_invert())
    group = elem.group
    for chi in all_characters(group):
        assert char_eval(chi, prod).lift(7).as_integer() == 4


def test_apply_t_is_charactertwist():
    """chi(X^(t)) = chi^t(X): the power map permutes character values."""
    rng = random.Random(41)
    group = AbelianGroup.cyclic(9)
    x = random_elem(rng, (9,))
    t = 2
    for chi in all_characters(group):
        lhs = char_eval(chi, x.apply_t(t))
        # chi(g^t) defines the character with root exponents scaled by t
        rhs = sum(
            (c.lift(9) * chi.value(group.power(g, t), 9) for g, c in x.coeffs.items()),
            CycInt.zero(9),
        )
        assert lhs == rhs


def test_translate_and_scale():
    elem = GroupRingElem.from_cyclic_list(5, [1, 2, 0, 0, -1])
    shifted = elem.translate((1,))
    assert shifted.int_coeffs() == {(1,): 1, (2,): 2, (0,): -1}
    doubled = elem.scale(2)
    assert doubled.int_coeffs() == {(0,): 2, (1,): 4, (4,): -2}


def test_support_and_properness_projection():
    group = AbelianGroup.cyclic(6)
    elem = GroupRingElem.from_int_coeffs(group, {(0,): 1, (2,): 1, (4,): -1})
    assert elem.support == {(0,), (2,), (4,)}


def test_quotient_map_is_ring_homomorphism():
    rng = random.Random(43)
    group = AbelianGroup.cyclic(12)
    quotient, mapping = quotient_map(group, [(4,)])  # C12 / <g^4> = C4
    assert quotient.order == 4

    def project(elem):
        out: dict = {}
        for g, c in elem.int_coeffs().items():
            img = mapping[g]
            out[img] = out.get(img, 0) + c
        return GroupRingElem.from_int_coeffs(quotient, {g: c for g, c in out.items() if c})

    x = random_elem(rng, (12,))
    y = random_elem(rng, (12,))
    assert project(x.convolve(y)) == project(x).convolve(project(y))
    assert project(x + y) == project(x) + project(y)


def test_orbits_under_power_partition():
    group = AbelianGroup.cyclic(31)
    orbits = orbits_under_power(group, 2)  # ord_31(2) = 5
    sizes = sorted(len(o) for o in orbits)
    assert sizes == [1] + [5] * 6
    all_elems = sorted(g for orb in orbits for g in orb)
    assert all_elems == sorted(group.elements())


def test_idempotent_components_orthogonal_and_complete():
    for v in [6, 12, 30]:
        divisors = [d for d in range(1, v + 1) if v % d == 0]
        comps = {d: idempotent_component(v, d) for d in divisors}
        # idempotent: e_d^2 = e_d
        for d in divisors:
            assert (comps[d] * comps[d]) == comps[d]
        # orthogonal: e_d e_d' = 0
        for d in divisors:
            for dp in divisors:
                if d < dp:
                    assert (comps[d] * comps[dp]).is_zero()
        # complete: sum e_d = 1
        total = comps[divisors[0]]
        for d in divisors[1:]:
            total = total + comps[d]
        ints = total.integral_part()
        assert ints is not None
        assert ints[0] == 1 and all(c == 0 for c in ints[1:])


def test_json_roundtrip():
    rng = random.Random(47)
    for factors in GROUPS:
        x = random_elem(rng, factors)
        assert GroupRingElem.from_json(x.to_json()) == x


@settings(max_examples=40, deadline=None)
@given(st.lists(st.integers(min_value=-2, max_value=2), min_size=10, max_size=10))
def test_inversion_roundtrip_property(coeffs):
    x = GroupRingElem.from_cyclic_list(10, coeffs)
    group = x.group
    values = {chi: char_eval(chi, x) for chi in all_characters(group)}
    assert inversion(values, group).int_coeffs() == x.int_coeffs()


@settings(max_examples=40, deadline=None)
@given(
    st.lists(st.integers(min_value=-1, max_value=1), min_size=8, max_size=8),
    st.lists(st.integers(min_value=-1, max_value=1), min_size=8, max_size=8),
)
def test_convolution_vs_characters_property(a, b):
    x = GroupRingElem.from_cyclic_list(8, a)
    y = GroupRingElem.from_cyclic_list(8, b)
    conv = x.convolve(y)
    for chi in all_characters(x.group):
        assert char_eval(chi, conv).lift(8) == (
            char_eval(chi, x) * char_eval(chi, y)
        ).lift(8)
