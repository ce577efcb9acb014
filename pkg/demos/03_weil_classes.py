"""Enumerate Weil numbers and refute CW(60, 36) by rational idempotents.

A solution X of X * conj(X) = n in Z[zeta_v] is determined, through the
rational idempotents of Q[C_v], by one Weil number of norm n at each divisor
of v.  The engine first enumerates the finitely many equivalence classes of
such numbers at every conductor (lattice sphere enumeration inside prime-ideal
sublattices), then tries to glue one class per divisor into an integral
group-ring element.  When no assignment survives the integrality check, no
circulant weighing matrix exists.

Run:  python3 demos/03_weil_classes.py        (about ten seconds)
"""

from __future__ import annotations

import tempfile

from cwcert.weilsearch import (
    _divisors,
    idempotent_integrality_search,
    weil_enumerate,
)


def main() -> None:
    cache = tempfile.mkdtemp(prefix="weilcache_")
    print("equivalence classes of X with X * conj(X) = 36:")
    per_divisor = {}
    for d in _divisors(60):
        sols = weil_enumerate(d, 36, cache_dir=cache)
        per_divisor[d] = sols
        reps = ", ".join(str(c.representative) for c in sols.classes)
        print(f"  conductor {d:>2}: {len(sols.classes)} classes  [{reps}]")

    cert = idempotent_integrality_search(60, 36, per_divisor)
    print(f"\nCW(60, 36): {cert.conclusion}")
    print(f"  candidate assignments : {cert.params['integral_assignments']}")
    print(f"  survivors             : {cert.params['survivors']}")


if __name__ == "__main__":
    main()
