"""Machine-checkable certificates for non-existence decisions.

A certificate records which rule fired, the exact parameters that make the
rule's hypotheses checkable, and the conclusion.  Certificates serialize to
JSON so that decisions can be cached, diffed, and independently re-verified.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any

NONEXISTENT = "NONEXISTENT"
INCONCLUSIVE = "INCONCLUSIVE"
EXISTS = "EXISTS"
OPEN = "OPEN"

RULES = (
    "FBOUND",
    "ICW_REDUCTION",
    "ORBIT_DIOPHANTINE",
    "THM45",
    "COR46",
    "THM48",
    "THM410",
    "THM412",
    "COR415",
    "WEIL_DIVISIBILITY",
    "IDEMPOTENT",
    "MANUAL",
    "COUNTING",
)


@dataclass(frozen=True)
class CellQuery:
    """A query: can a weighing-matrix element of weight n with coefficients
    bounded by a exist over the given abelian group?

    ``group`` is the tuple of invariant factors; a cyclic group of order v is
    ``(v,)``.
    """

    group: tuple[int, ...]
    n: int
    a: int = 1

    def __post_init__(self) -> None:
        object.__setattr__(self, "group", tuple(int(x) for x in self.group))
        if self.n < 1 or self.a < 1:
            raise ValueError("CellQuery requires n >= 1 and a >= 1")

    @classmethod
    def cyclic(cls, v: int, n: int, a: int = 1) -> "CellQuery":
        return cls((v,), n, a)

    @property
    def order(self) -> int:
        out = 1
        for x in self.group:
            out *= x
        return out

    @property
    def is_cyclic(self) -> bool:
        return len(self.group) == 1

    def to_json(self) -> dict:
        data: dict[str, Any] = {"n": self.n, "a": self.a}
        if self.is_cyclic:
            data["v"] = self.group[0]
        else:
            data["group"] = list(self.group)
        return data

    @classmethod
    def from_json(cls, data: dict) -> "CellQuery":
        group = (data["v"],) if "v" in data else tuple(data["group"])
        return cls(group, data["n"], data.get("a", 1))


@dataclass(frozen=True)
class Certificate:
    """Outcome of one rule applied to one query."""

    rule: str
    query: CellQuery
    params: dict[str, Any] = field(default_factory=dict)
    conclusion: str = INCONCLUSIVE

    def __post_init__(self) -> None:
        if self.rule not in RULES:
            raise ValueError(f"unknown rule {self.rule!r}")
        if self.conclusion not in (NONEXISTENT, INCONCLUSIVE, EXISTS):
            raise ValueError(f"unknown conclusion {self.conclusion!r}")

    @property
    def decided(self) -> bool:
        return self.conclusion != INCONCLUSIVE

    def to_json(self) -> dict:
        data = self.query.to_json()
        data["rule"] = self.rule
        data["params"] = _jsonable(self.params)
        data["conclusion"] = self.conclusion
        return data

    @classmethod
    def from_json(cls, data: dict) -> "Certificate":
        return cls(
            rule=data["rule"],
            query=CellQuery.from_json(data),
            params=data.get("params", {}),
            conclusion=data["conclusion"],
        )


def _jsonable(value: Any) -> Any:
    """Recursively coerce params into JSON-serializable primitives."""
    if isinstance(value, dict):
        return {str(k): _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    if isinstance(value, bool) or value is None or isinstance(value, str):
        return value
    if isinstance(value, int):
        return int(value)
    if hasattr(value, "to_json"):
        return value.to_json()
    return str(value)
