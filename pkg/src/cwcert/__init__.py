"""Exact non-existence certificates for group-invariant weighing matrices.

The package decides, with exact integer and cyclotomic arithmetic, whether a
circulant (or abelian group-invariant) weighing matrix of a given order and
weight can exist, and emits machine-checkable certificates naming the
criterion that refutes it: field descent, multiplier/orbit arguments,
Diophantine orbit equations, Weil-number enumeration, divisibility, and
rational-idempotent integrality.
"""

from __future__ import annotations

__version__ = "0.1.0"


def __getattr__(name: str):
    # Lazy re-exports keep `import cwcert` cheap for CLI startup.
    if name == "CycInt":
        from .cyclotomic import CycInt

        return CycInt
    if name in ("AbelianGroup", "Character", "GroupRingElem"):
        from . import grouprings

        return getattr(grouprings, name)
    if name in ("Certificate", "CellQuery"):
        from . import criteria

        return getattr(criteria, name)
    raise AttributeError(f"module {__name__!r} has no attribute {name!r}")


__all__ = [
    "CycInt",
    "AbelianGroup",
    "Character",
    "GroupRingElem",
    "Certificate",
    "CellQuery",
    "__version__",
]
