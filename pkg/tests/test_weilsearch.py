"""Weil-number enumeration, divisibility/idempotent rules, and orbit search."""

from __future__ import annotations

import json
import os

import pytest

from cwcert.certificates import INCONCLUSIVE, NONEXISTENT
from cwcert.cli import default_cache_dir
from cwcert.cyclotomic import CycInt
from cwcert.weilsearch import (
    DimensionTooLarge,
    SolutionSet,
    WeilClass,
    _divisors,
    cache_load,
    cache_store,
    canonical_rep,
    equivalence_orbit,
    idempotent_integrality_search,
    is_proper,
    orbit_search,
    verify_weighing,
    weil_divisibility_rule,
    weil_enumerate,
)

from conftest import (
    X15,
    X20,
    cyc_from_powers,
    known_icw2_77_100,
    naive_cw_solutions,
    theta1,
    theta2,
)


# ---------------------------------------------------------------------------
# Enumeration
# ---------------------------------------------------------------------------


def test_enumerate_quartic_weight4(tmp_path):
    sols = weil_enumerate(4, 4, cache_dir=str(tmp_path))
    assert sols.complete
    assert len(sols.classes) == 1
    rep = sols.classes[0].representative
    assert rep.abs_sq().as_integer() == 4


def test_enumerate_small_weight36(tmp_path):
    assert len(weil_enumerate(5, 36, cache_dir=str(tmp_path)).classes) == 1
    assert len(weil_enumerate(15, 36, cache_dir=str(tmp_path)).classes) == 2
    assert len(weil_enumerate(20, 36, cache_dir=str(tmp_path)).classes) == 2


def test_enumerate_finds_published_representatives(tmp_path):
    x15 = cyc_from_powers(15, X15)
    assert x15.abs_sq().as_integer() == 36
    reps = [c.representative for c in weil_enumerate(15, 36, cache_dir=str(tmp_path)).classes]
    assert canonical_rep(x15) in reps

    x20 = cyc_from_powers(20, X20)
    reps = [c.representative for c in weil_enumerate(20, 36, cache_dir=str(tmp_path)).classes]
    assert canonical_rep(x20) in reps


def test_theta_representatives_are_inequivalent():
    t1, t2 = theta1(), theta2()
    assert t1.abs_sq().as_integer() == 36
    assert t2.abs_sq().as_integer() == 36
    assert canonical_rep(t1) != canonical_rep(t2)


def test_equivalence_orbit_closure():
    x = cyc_from_powers(15, X15)
    orbit = equivalence_orbit(x)
    # a single canonical representative for the whole orbit
    assert len({canonical_rep(y) for y in orbit}) == 1
    assert canonical_rep(x) in orbit


def test_dimension_cap_raises():
    with pytest.raises(DimensionTooLarge):
        weil_enumerate(155, 36, cache_dir=None)


def test_full_conductor60_list_has_nine_classes():
    sols = cache_load(60, 36, default_cache_dir())
    assert sols is not None and sols.complete
    assert len(sols.classes) == 9
    for cls in sols.classes:
        assert cls.representative.abs_sq().as_integer() == 36


# ---------------------------------------------------------------------------
# Caching and serialization
# ---------------------------------------------------------------------------


def test_solution_set_json_roundtrip(tmp_path):
    sols = weil_enumerate(15, 36, cache_dir=str(tmp_path))
    again = SolutionSet.from_json(json.loads(json.dumps(sols.to_json())))
    assert again.v == 15 and again.n == 36 and again.complete
    assert [c.representative for c in again.classes] == [
        c.representative for c in sols.classes
    ]


def test_cache_store_and_load(tmp_path):
    sols = weil_enumerate(5, 36, cache_dir=str(tmp_path))
    assert os.path.exists(tmp_path / "weil_v5_n36.json")
    loaded = cache_load(5, 36, str(tmp_path))
    assert loaded is not None
    assert [c.representative for c in loaded.classes] == [
        c.representative for c in sols.classes
    ]


# ---------------------------------------------------------------------------
# Divisibility rule
# ---------------------------------------------------------------------------


def test_divisibility_rule_coset_branch(tmp_path):
    cert = weil_divisibility_rule(30, 9, 3, cache_dir=str(tmp_path))
    assert cert.conclusion == NONEXISTENT
    assert set(cert.params["conductors"]) == set(_divisors(30))


def test_divisibility_rule_sound_on_existing(tmp_path):
    # CW(7, 4) exists, so no divisibility obstruction may fire
    cert = weil_divisibility_rule(7, 4, 2, cache_dir=str(tmp_path))
    assert cert.conclusion == INCONCLUSIVE


def test_divisibility_rule_with_imported_classes():
    import_path = os.path.join(
        os.path.dirname(default_cache_dir()), "weil_import_v155_n36.json"
    )
    with open(import_path) as fh:
        imported = SolutionSet.from_json(json.load(fh))
    assert not imported.complete
    cert = weil_divisibility_rule(
        155, 36, 2, cache_dir=default_cache_dir(), imports={155: imported}
    )
    assert cert.conclusion == NONEXISTENT
    assert cert.params["conductors"][155] == "imported"
    for w in (1, 5, 31):
        assert cert.params["conductors"][w] == "enumerated"


# ---------------------------------------------------------------------------
# Idempotent integrality search
# ---------------------------------------------------------------------------


def test_idempotent_search_keeps_true_solution(tmp_path):
    per = {d: weil_enumerate(d, 4, cache_dir=str(tmp_path)) for d in _divisors(7)}
    cert = idempotent_integrality_search(7, 4, per)
    assert cert.conclusion == INCONCLUSIVE
    assert cert.params["survivors"] == 1
    # the survivor is the classical CW(7, 4)
    from cwcert.grouprings import GroupRingElem

    survivor = GroupRingElem.from_cyclic_list(7, cert.params["candidates"][0])
    assert verify_weighing(survivor, 4)


def test_idempotent_search_refutes(tmp_path):
    # no CW(5, 4): every idempotent assignment must fail integrality
    per = {d: weil_enumerate(d, 4, cache_dir=str(tmp_path)) for d in _divisors(5)}
    cert = idempotent_integrality_search(5, 4, per)
    assert cert.conclusion == NONEXISTENT
    assert cert.params["survivors"] == 0


# ---------------------------------------------------------------------------
# Direct search and verification
# ---------------------------------------------------------------------------


def test_verify_weighing_and_properness():
    elem = known_icw2_77_100()
    assert verify_weighing(elem, 100, a=2)
    assert is_proper(elem)
    assert not verify_weighing(elem, 99, a=2)


def test_orbit_search_matches_naive_oracle():
    found7 = orbit_search(7, 4)
    assert len(found7) == 1
    assert verify_weighing(found7[0], 4)
    assert naive_cw_solutions(7, 4)

    assert orbit_search(5, 4) == []
    assert naive_cw_solutions(5, 4) == []


def test_orbit_search_weight9():
    # searching inside the fixed ring of the multiplier t = 3 keeps this fast
    found13 = orbit_search(13, 9, t=3)
    assert found13 and all(verify_weighing(x, 9) for x in found13)
    assert naive_cw_solutions(11, 9) == []
