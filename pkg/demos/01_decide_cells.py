"""Decide a handful of existence cells and inspect their certificates.

Every refutation the engine produces is a small, re-checkable certificate:
a named rule plus the exact parameters that make the rule fire.  This script
walks a few instructive cells of the circulant weighing-matrix table.

Run:  python3 demos/01_decide_cells.py
"""

from __future__ import annotations

import json

from cwcert.criteria import decide_cell, decide_group_cell

CELLS = [
    (128, 49),   # field-descent size bound
    (105, 81),   # reduction of the prime-power weight to a smaller order
    (158, 100),  # multiplier of large multiplicative order
    (138, 36),   # multiplier rule at a weight sharing a factor with the order
    (190, 100),  # self-conjugacy obstruction
    (7, 4),      # exists — the classical weight-4 circulant
]


def main() -> None:
    for v, n in CELLS:
        conclusion, certificate, attribution = decide_cell(v, n)
        print(f"CW({v}, {n}): {conclusion}")
        if certificate is not None and certificate.decided:
            print(f"  rule   : {certificate.rule}")
            print(f"  params : {json.dumps(certificate.params, sort_keys=True)}")
            rules = sorted({r for r in attribution.values() if r})
            print(f"  per-divisor rules: {', '.join(rules)}")
        else:
            print("  the automated battery finds no obstruction")
        print()

    # the same battery runs over any finite abelian group
    for group, n in [((2, 2, 11), 9), ((2, 32), 64)]:
        conclusion, certificate = decide_group_cell(group, n)
        name = " x ".join(f"C{f}" for f in group)
        rule = certificate.rule if certificate else "-"
        print(f"W({name}, {n}) invariant: {conclusion}  [{rule}]")


if __name__ == "__main__":
    main()
