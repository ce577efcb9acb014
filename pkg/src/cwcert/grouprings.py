"""Finite abelian groups, group rings Z[zeta_u][G], characters and idempotents.

Groups are kept in invariant-factor form [v1, ..., vr] with v1 | v2 | ... |
vr; elements are exponent tuples.  Group-ring elements are sparse maps from
elements to cyclotomic integers.  The module provides the ring operations,
the twisted power map X -> X^(t), character evaluation, the Fourier
inversion formula (whose integrality failure is itself a non-existence
witness), projections onto quotients, partial-character maps, power-map
orbits, and the exact rational idempotents of cyclic group algebras.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from math import gcd, lcm
from typing import Iterable, Iterator, Mapping, Sequence

import sympy

from .cyclotomic import CycInt
from .numtheory import totient

Elem = tuple[int, ...]


@dataclass(frozen=True)
class AbelianGroup:
    """A finite abelian group in invariant-factor form."""

    invariant_factors: tuple[int, ...]

    def __post_init__(self) -> None:
        facs = tuple(int(v) for v in self.invariant_factors)
        object.__setattr__(self, "invariant_factors", facs)
        for v in facs:
            if v < 2:
                raise ValueError("invariant factors must be >= 2")
        for a, b in zip(facs, facs[1:]):
            if b % a:
                raise ValueError(f"invariant factors must divide in turn: {facs}")

    @classmethod
    def cyclic(cls, v: int) -> "AbelianGroup":
        return cls(() if v == 1 else (v,))

    @property
    def order(self) -> int:
        n = 1
        for v in self.invariant_factors:
            n *= v
        return n

    @property
    def exponent(self) -> int:
        return self.invariant_factors[-1] if self.invariant_factors else 1

    @property
    def rank(self) -> int:
        return len(self.invariant_factors)

    @property
    def identity(self) -> Elem:
        return (0,) * self.rank

    def elements(self) -> Iterator[Elem]:
        def rec(i: int, prefix: tuple[int, ...]) -> Iterator[Elem]:
            if i == self.rank:
                yield prefix
                return
            for x in range(self.invariant_factors[i]):
                yield from rec(i + 1, prefix + (x,))

        yield from rec(0, ())

    def reduce(self, g: Sequence[int]) -> Elem:
        return tuple(x % v for x, v in zip(g, self.invariant_factors))

    def mult(self, g: Elem, h: Elem) -> Elem:
        return tuple(
            (x + y) % v for x, y, v in zip(g, h, self.invariant_factors)
        )

    def inverse(self, g: Elem) -> Elem:
        return tuple((-x) % v for x, v in zip(g, self.invariant_factors))

    def power(self, g: Elem, k: int) -> Elem:
        return tuple((x * k) % v for x, v in zip(g, self.invariant_factors))

    def element_order(self, g: Elem) -> int:
        o = 1
        for x, v in zip(g, self.invariant_factors):
            o = lcm(o, v // gcd(x, v))
        return o

    def subgroup_elements(self, generators: Iterable[Elem]) -> frozenset[Elem]:
        """All elements of the subgroup generated by the given elements."""
        seen = {self.identity}
        frontier = [self.identity]
        gens = [self.reduce(g) for g in generators]
        while frontier:
            cur = frontier.pop()
            for g in gens:
                nxt = self.mult(cur, g)
                if nxt not in seen:
                    seen.add(nxt)
                    frontier.append(nxt)
        return frozenset(seen)

    def __repr__(self) -> str:
        return f"AbelianGroup{list(self.invariant_factors)}"


# ---------------------------------------------------------------------------
# Smith normal form (tiny matrices) for quotient computation
# ---------------------------------------------------------------------------


def _smith_with_left_transform(
    mat: list[list[int]],
) -> tuple[list[list[int]], list[list[int]]]:
    """Return (S, U) with S = U @ mat @ V in Smith normal form.

    Only the left transform U is tracked; the column transform never matters
    for quotient projections.  Sizes here are at most 4 x 8.
    """
    rows = len(mat)
    cols = len(mat[0]) if rows else 0
    s = [row[:] for row in mat]
    u = [[int(i == j) for j in range(rows)] for i in range(rows)]

    def swap_rows(i, j):
        s[i], s[j] = s[j], s[i]
        u[i], u[j] = u[j], u[i]

    def add_row(i, j, c):  # row_i += c * row_j
        s[i] = [a + c * b for a, b in zip(s[i], s[j])]
        u[i] = [a + c * b for a, b in zip(u[i], u[j])]

    def swap_cols(i, j):
        for row in s:
            row[i], row[j] = row[j], row[i]

    def add_col(i, j, c):  # col_i += c * col_j
        for row in s:
            row[i] += c * row[j]

    t = 0
    while t < rows and t < cols:
        # find a nonzero pivot
        pivot = None
        for i in range(t, rows):
            for j in range(t, cols):
                if s[i][j]:
                    pivot = (i, j)
                    break
            if pivot:
                break
        if pivot is None:
            break
        swap_rows(t, pivot[0])
        swap_cols(t, pivot[1])
        while True:
            # clear column t
            done = True
            for i in range(t + 1, rows):
                if s[i][t]:
                    q = s[i][t] // s[t][t]
                    add_row(i, t, -q)
                    if s[i][t]:
                        swap_rows(i, t)
                        done = False
            for j in range(t + 1, cols):
                if s[t][j]:
                    q = s[t][j] // s[t][t]
                    add_col(j, t, -q)
                    if s[t][j]:
                        swap_cols(j, t)
                        done = False
            if done:
                break
        t += 1
    # enforce divisibility chain
    changed = True
    while changed:
        changed = False
        for i in range(min(rows, cols) - 1):
            a, b = s[i][i], s[i + 1][i + 1]
            if a and b % a:
                add_col(i, i + 1, 1)
                # re-clear the 2x2 block
                q = s[i + 1][i] // s[i][i]
                add_row(i + 1, i, -q)
                if s[i + 1][i]:
                    swap_rows(i, i + 1)
                # restart elimination on this block
                while s[i + 1][i]:
                    q = s[i + 1][i] // s[i][i]
                    add_row(i + 1, i, -q)
                    if s[i + 1][i]:
                        swap_rows(i, i + 1)
                q = s[i][i + 1] // s[i][i]
                add_col(i + 1, i, -q)
                changed = True
    for i in range(min(rows, cols)):
        if s[i][i] < 0:
            s[i] = [-x for x in s[i]]
            u[i] = [-x for x in u[i]]
    return s, u


def quotient_map(
    group: AbelianGroup, kernel_generators: Iterable[Elem]
) -> tuple["AbelianGroup", dict[Elem, Elem]]:
    """The quotient G/H and the projection map, H = <kernel_generators>.

    Returns the quotient in invariant-factor form together with an explicit
    element-to-element map.
    """
    r = group.rank
    if r == 0:
        return group, {(): ()}
    cols: list[list[int]] = []
    for i, v in enumerate(group.invariant_factors):
        col = [0] * r
        col[i] = v
        cols.append(col)
    for g in kernel_generators:
        cols.append(list(group.reduce(g)))
    mat = [[cols[j][i] for j in range(len(cols))] for i in range(r)]
    s, u = _smith_with_left_transform(mat)
    diag = [s[i][i] for i in range(r)]
    keep = [i for i in range(r) if diag[i] > 1]
    quotient = AbelianGroup(tuple(diag[i] for i in keep))
    mapping: dict[Elem, Elem] = {}
    for g in group.elements():
        img = tuple(
            sum(u[i][j] * g[j] for j in range(r)) % diag[i] for i in keep
        )
        mapping[g] = img
    return quotient, mapping


# ---------------------------------------------------------------------------
# Group ring elements
# ---------------------------------------------------------------------------


class GroupRingElem:
    """A sparse element of Z[zeta_u][G]."""

    __slots__ = ("group", "u", "coeffs")

    def __init__(
        self,
        group: AbelianGroup,
        u: int,
        coeffs: Mapping[Elem, CycInt] | None = None,
    ):
        self.group = group
        self.u = u
        clean: dict[Elem, CycInt] = {}
        for g, c in (coeffs or {}).items():
            if isinstance(c, int):
                c = CycInt.integer(u, c)
            if c.u != u:
                c = c.lift(u)
            if not c.is_zero():
                clean[group.reduce(g)] = c
        self.coeffs = clean

    # -- constructors ----------------------------------------------------

    @classmethod
    def from_int_coeffs(
        cls, group: AbelianGroup, coeffs: Mapping[Elem, int], u: int = 1
    ) -> "GroupRingElem":
        return cls(group, u, {g: CycInt.integer(u, c) for g, c in coeffs.items()})

    @classmethod
    def from_cyclic_list(cls, v: int, coeffs: Sequence[int]) -> "GroupRingElem":
        """Integer element of Z[C_v] from a length-v coefficient list."""
        if len(coeffs) != v:
            raise ValueError(f"expected {v} coefficients")
        group = AbelianGroup.cyclic(v)
        if v == 1:
            return cls.from_int_coeffs(group, {(): coeffs[0]} if coeffs[0] else {})
        return cls.from_int_coeffs(
            group, {(j,): c for j, c in enumerate(coeffs) if c}
        )

    @classmethod
    def zero(cls, group: AbelianGroup, u: int = 1) -> "GroupRingElem":
        return cls(group, u, {})

    # -- basic structure -----------------------------------------------------

    @property
    def support(self) -> frozenset[Elem]:
        return frozenset(self.coeffs)

    def coeff(self, g: Elem) -> CycInt:
        return self.coeffs.get(self.group.reduce(g), CycInt.zero(self.u))

    def int_coeffs(self) -> dict[Elem, int]:
        """Integer coefficients; raises if any coefficient is irrational."""
        out = {}
        for g, c in self.coeffs.items():
            val = c.as_integer()
            if val is None:
                raise ValueError(f"coefficient at {g} is not a rational integer")
            out[g] = val
        return out

    def _check_compatible(self, other: "GroupRingElem") -> None:
        if self.group != other.group or self.u != other.u:
            raise ValueError("group ring mismatch")

    def __add__(self, other: "GroupRingElem") -> "GroupRingElem":
        self._check_compatible(other)
        out = dict(self.coeffs)
        for g, c in other.coeffs.items():
            out[g] = out[g] + c if g in out else c
        return GroupRingElem(self.group, self.u, out)

    def __sub__(self, other: "GroupRingElem") -> "GroupRingElem":
        return self + (-other)

    def __neg__(self) -> "GroupRingElem":
        return GroupRingElem(
            self.group, self.u, {g: -c for g, c in self.coeffs.items()}
        )

    def scale(self, c: CycInt | int) -> "GroupRingElem":
        if isinstance(c, int):
            c = CycInt.integer(self.u, c)
        return GroupRingElem(
            self.group, self.u, {g: x * c for g, x in self.coeffs.items()}
        )

    def translate(self, g: Elem) -> "GroupRingElem":
        """X * g: shift the support by the group element g."""
        g = self.group.reduce(g)
        return GroupRingElem(
            self.group,
            self.u,
            {self.group.mult(h, g): c for h, c in self.coeffs.items()},
        )

    def convolve(self, other: "GroupRingElem") -> "GroupRingElem":
        """The group-ring product."""
        self._check_compatible(other)
        out: dict[Elem, CycInt] = {}
        for g, cg in self.coeffs.items():
            for h, ch in other.coeffs.items():
                k = self.group.mult(g, h)
                prod = cg * ch
                out[k] = out[k] + prod if k in out else prod
        return GroupRingElem(self.group, self.u, out)

    __mul__ = convolve

    def apply_t(self, t: int) -> "GroupRingElem":
        """X^(t): coefficients through sigma_t, support through g -> g^t."""
        modulus = self.u * self.group.order
        if gcd(t, modulus) != 1:
            raise ValueError(
                f"apply_t requires gcd(t, u*|G|) = 1, got t={t}"
            )
        out: dict[Elem, CycInt] = {}
        for g, c in self.coeffs.items():
            k = self.group.power(g, t)
            img = c.galois(t % self.u) if self.u > 1 else c
            out[k] = out[k] + img if k in out else img
        return GroupRingElem(self.group, self.u, out)

    def conj_invert(self) -> "GroupRingElem":
        """X^(-1): conjugate coefficients on inverted support."""
        out = {
            self.group.inverse(g): c.conj() for g, c in self.coeffs.items()
        }
        return GroupRingElem(self.group, self.u, out)

    def coefficient_sum(self) -> CycInt:
        total = CycInt.zero(self.u)
        for c in self.coeffs.values():
            total = total + c
        return total

    def max_abs_int_coeff(self) -> int:
        return max(
            (abs(v) for v in self.int_coeffs().values()), default=0
        )

    # -- quotients / partial characters ---------------------------------------

    def project(self, kernel_generators: Iterable[Elem]) -> "GroupRingElem":
        """Image under G -> G/H: coefficients summed over kernel cosets."""
        quotient, mapping = quotient_map(self.group, kernel_generators)
        out: dict[Elem, CycInt] = {}
        for g, c in self.coeffs.items():
            k = mapping[g]
            out[k] = out[k] + c if k in out else c
        return GroupRingElem(quotient, self.u, out)

    def partial_char_cyclic(
        self, m_chi: int, chi_exponent: int
    ) -> "GroupRingElem":
        """The map kappa on a cyclic group C_v with v = m_chi * m_rest coprime.

        kappa sends the order-m_chi component through the character
        zeta_{m_chi}^(chi_exponent * -) and keeps the complementary cyclic
        component as a group element; the result lives in
        Z[zeta_lcm(u, m_chi)][C_m_rest].
        """
        if self.group.rank != 1:
            raise ValueError("partial_char_cyclic needs a cyclic group")
        v = self.group.invariant_factors[0]
        if v % m_chi:
            raise ValueError(f"{m_chi} does not divide {v}")
        m_rest = v // m_chi
        if gcd(m_chi, m_rest) != 1:
            raise ValueError("component orders must be coprime")
        new_u = lcm(self.u, m_chi)
        target = AbelianGroup.cyclic(m_rest)
        out: dict[Elem, CycInt] = {}
        for (j,), c in self.coeffs.items():
            root = CycInt.root_of_unity(
                new_u, (j % m_chi) * chi_exponent * (new_u // m_chi)
            )
            val = c.lift(new_u) * root
            k = (j % m_rest,) if m_rest > 1 else ()
            out[k] = out[k] + val if k in out else val
        return GroupRingElem(target, new_u, out)

    # -- serialization ----------------------------------------------------------

    def to_json(self) -> dict:
        terms = [
            {"g": list(g), "c": c.to_json()}
            for g, c in sorted(self.coeffs.items())
        ]
        return {
            "group": list(self.group.invariant_factors),
            "u": self.u,
            "terms": terms,
        }

    @classmethod
    def from_json(cls, data: dict) -> "GroupRingElem":
        group = AbelianGroup(tuple(int(v) for v in data["group"]))
        u = int(data.get("u", 1))
        coeffs = {
            tuple(int(x) for x in term["g"]): CycInt.from_json(term["c"])
            for term in data["terms"]
        }
        return cls(group, u, coeffs)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, GroupRingElem):
            return NotImplemented
        return (
            self.group == other.group
            and self.u == other.u
            and self.coeffs == other.coeffs
        )

    def __repr__(self) -> str:
        return (
            f"GroupRingElem(group={self.group}, u={self.u}, "
            f"terms={len(self.coeffs)})"
        )


# ---------------------------------------------------------------------------
# Characters
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Character:
    """A linear character of an abelian group, chi(e_i) = zeta_{v_i}^{e_i}."""

    group: AbelianGroup
    exponents: tuple[int, ...]

    def __post_init__(self) -> None:
        exps = tuple(
            e % v for e, v in zip(self.exponents, self.group.invariant_factors)
        )
        object.__setattr__(self, "exponents", exps)

    @property
    def order(self) -> int:
        o = 1
        for e, v in zip(self.exponents, self.group.invariant_factors):
            o = lcm(o, v // gcd(e, v))
        return o

    def root_exponent(self, g: Elem) -> int:
        """e with chi(g) = zeta_w^e, w = exponent of the group."""
        w = self.group.exponent
        total = 0
        for x, e, v in zip(g, self.exponents, self.group.invariant_factors):
            total += x * e * (w // v)
        return total % w

    def value(self, g: Elem, u: int | None = None) -> CycInt:
        """chi(g) as a CycInt (conductor lcm(exponent, u) when u is given)."""
        w = self.group.exponent
        target = w if u is None else lcm(w, u)
        return CycInt.root_of_unity(target, self.root_exponent(g) * (target // w))


def all_characters(group: AbelianGroup) -> list[Character]:
    """All |G| linear characters, in lexicographic exponent order."""
    chars: list[Character] = []

    def rec(i: int, prefix: tuple[int, ...]) -> None:
        if i == group.rank:
            chars.append(Character(group, prefix))
            return
        for e in range(group.invariant_factors[i]):
            rec(i + 1, prefix + (e,))

    rec(0, ())
    return chars


def char_eval(chi: Character, x: GroupRingElem) -> CycInt:
    """chi(X) = sum_g X_g chi(g), exact, at conductor lcm(u, exp G)."""
    if chi.group != x.group:
        raise ValueError("character/group mismatch")
    w = x.group.exponent
    target = lcm(w, x.u)
    total = CycInt.zero(target)
    for g, c in x.coeffs.items():
        total = total + c.lift(target) * chi.value(g, x.u)
    return total


class NonIntegral(Exception):
    """Inversion produced a non-integral coefficient — itself a witness."""

    def __init__(self, g: Elem, message: str | None = None):
        self.g = g
        super().__init__(message or f"non-integral coefficient at {g}")


def inversion(
    values: Mapping[Character, CycInt], group: AbelianGroup, u: int = 1
) -> GroupRingElem:
    """Fourier inversion: recover D from all character values.

    a_g = (1/|G|) sum_chi chi(D) chi(g)^{-1}.  Raises :class:`NonIntegral`
    (carrying the offending element) when the data is not the character
    transform of an integral element.
    """
    order = group.order
    chars = all_characters(group)
    if set(values) != set(chars):
        raise ValueError("inversion requires values for all characters")
    w = group.exponent
    target = w
    for c in values.values():
        target = lcm(target, c.u)
    target = lcm(target, u)
    out: dict[Elem, CycInt] = {}
    for g in group.elements():
        total = CycInt.zero(target)
        ginv = group.inverse(g)
        for chi in chars:
            total = total + values[chi].lift(target) * chi.value(ginv, target)
        coeff = total.divisible_by_integer(order)
        if coeff is None:
            raise NonIntegral(g)
        if not coeff.is_zero():
            out[g] = coeff
    return GroupRingElem(group, target, out)


# ---------------------------------------------------------------------------
# Orbits of the power map
# ---------------------------------------------------------------------------


def orbits_under_power(
    group: AbelianGroup, t: int, elements: Iterable[Elem] | None = None
) -> list[list[Elem]]:
    """Orbits of g -> g^t, sizes nondecreasing, ties by lex-least element."""
    if gcd(t, group.order) != 1:
        raise ValueError("orbits_under_power requires gcd(t, |G|) = 1")
    pool = set(elements if elements is not None else group.elements())
    orbits: list[list[Elem]] = []
    for start in sorted(pool):
        if start not in pool:
            continue
        orbit = [start]
        pool.discard(start)
        cur = group.power(start, t)
        while cur != start:
            orbit.append(cur)
            pool.discard(cur)
            cur = group.power(cur, t)
        orbits.append(orbit)
    orbits.sort(key=lambda orb: (len(orb), min(orb)))
    return orbits


# ---------------------------------------------------------------------------
# Rational idempotents of Q[C_v]
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class RationalCyclicElem:
    """An element of Q[C_v] with a single global denominator."""

    v: int
    denominator: int
    numerator: tuple[int, ...]  # length v, coefficient of x^k at index k

    def __post_init__(self) -> None:
        if len(self.numerator) != self.v:
            raise ValueError("numerator length must equal v")

    def __add__(self, other: "RationalCyclicElem") -> "RationalCyclicElem":
        if self.v != other.v:
            raise ValueError("order mismatch")
        d = lcm(self.denominator, other.denominator)
        a, b = d // self.denominator, d // other.denominator
        return RationalCyclicElem(
            self.v,
            d,
            tuple(a * x + b * y for x, y in zip(self.numerator, other.numerator)),
        )

    def __mul__(self, other: "RationalCyclicElem") -> "RationalCyclicElem":
        if self.v != other.v:
            raise ValueError("order mismatch")
        out = [0] * self.v
        for i, x in enumerate(self.numerator):
            if x:
                for j, y in enumerate(other.numerator):
                    if y:
                        k = (i + j) % self.v
                        out[k] += x * y
        return RationalCyclicElem(
            self.v, self.denominator * other.denominator, tuple(out)
        )

    def reduced(self) -> "RationalCyclicElem":
        g = self.denominator
        for x in self.numerator:
            g = gcd(g, x)
            if g == 1:
                break
        if g <= 1:
            return self
        return RationalCyclicElem(
            self.v, self.denominator // g, tuple(x // g for x in self.numerator)
        )

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, RationalCyclicElem):
            return NotImplemented
        a, b = self.reduced(), other.reduced()
        return a.v == b.v and a.denominator == b.denominator and a.numerator == b.numerator

    def is_zero(self) -> bool:
        return all(x == 0 for x in self.numerator)

    def integral_part(self) -> list[int] | None:
        """Integer coefficients when the element is integral, else None."""
        if any(x % self.denominator for x in self.numerator):
            return None
        return [x // self.denominator for x in self.numerator]


def _ramanujan_sum(d: int, k: int) -> int:
    """c_d(k) = sum over primitive d-th roots zeta of zeta^k, exact."""
    g = gcd(k, d)
    m = d // g
    mob = int(sympy.mobius(m))
    return mob * (totient(d) // totient(m))


@lru_cache(maxsize=None)
def idempotent_component(v: int, d: int) -> RationalCyclicElem:
    """The central idempotent of Q[C_v] carrying the order-d characters.

    e_d = (1/v) * sum_k c_d(k) x^k with c_d the Ramanujan sum; the e_d are
    pairwise orthogonal and sum to 1 over all divisors d of v.
    """
    if v % d:
        raise ValueError(f"{d} does not divide {v}")
    numer = tuple(_ramanujan_sum(d, -k) for k in range(v))
    return RationalCyclicElem(v, v, numer)
