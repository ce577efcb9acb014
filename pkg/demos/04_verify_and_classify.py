"""Verify a known weight-100 element and classify all solutions like it.

The element built here lives in Z[C_77], has coefficients bounded by 2,
satisfies E * E^(-1) = 100, and is proper (no translate lies in a proper
subgroup).  A multiplier-constrained orbit search then shows it is the only
such element up to equivalence.

Run:  python3 demos/04_verify_and_classify.py        (about ten seconds)
"""

from __future__ import annotations

from cwcert.grouprings import GroupRingElem
from cwcert.weilsearch import classify_icw2_77_100, is_proper, verify_weighing


def build_element() -> GroupRingElem:
    squares = [1, 3, 4, 5, 9]        # nonzero squares mod 11
    nonsquares = [2, 6, 7, 8, 10]
    delta = {1, 2, 4}                # a planar difference set mod 7
    coeffs = [0] * 77
    for b in squares:
        for t in range(7):
            e = (11 * t + 7 * b) % 77
            coeffs[e] = 2 if t == 0 else (-2 if t in delta else 0)
    for b in nonsquares:
        for t in range(7):
            e = (11 * t + 7 * b) % 77
            coeffs[e] = -1 if t == 0 else (1 if t in delta else 0)
    return GroupRingElem.from_cyclic_list(77, coeffs)


def main() -> None:
    elem = build_element()
    print("weight-100 element over C_77 with |coefficients| <= 2")
    print(f"  satisfies the weighing equation : {verify_weighing(elem, 100, a=2)}")
    print(f"  proper                          : {is_proper(elem)}")

    classes = classify_icw2_77_100()
    print(f"  equivalence classes of such elements: {len(classes)}")


if __name__ == "__main__":
    main()
