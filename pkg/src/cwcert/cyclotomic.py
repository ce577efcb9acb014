"""Exact arithmetic in rings of cyclotomic integers Z[zeta_u].

Elements are stored on a canonical integral basis: the tensor product over
the prime-power factors q^a || u of the power bases {zeta_{q^a}^e :
0 <= e < phi(q^a)}, with zeta_{q^a} := zeta_u^(u/q^a).  This basis gives
unique coordinates, exact equality, and direct access to the
coefficient-bound lemmas used by the descent and multiplier criteria.

Multiplication is performed in the length-u power representation (cyclic
convolution) and reduced back to the basis; the Galois action permutes
power exponents.  Numeric embeddings are provided only as pruning aids —
no decision in the package ever depends on floating point.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from math import gcd
from typing import Iterable, Sequence

import numpy as np
import sympy

from .numtheory import factorize, totient


@dataclass(frozen=True)
class _Structure:
    """Precomputed conversion data for a fixed conductor."""

    u: int
    axis_moduli: tuple[int, ...]  # q_i^{a_i}
    axis_sizes: tuple[int, ...]  # phi(q_i^{a_i})
    dim: int  # phi(u)
    # basis monomial exponents: flat basis index -> power exponent mod u
    basis_to_power: np.ndarray  # shape (dim,), int64
    # reduction matrix: power vector (length u) @ reduce = basis coeffs (dim)
    reduce_matrix: np.ndarray  # shape (u, dim), object (exact ints)


def _axis_reduction(q: int, a: int) -> np.ndarray:
    """Reduction matrix (q^a x phi(q^a)) for a single prime-power conductor.

    Row e gives the basis coordinates of zeta_{q^a}^e: the identity for
    e < phi(q^a); for e = (q-1)q^{a-1} + l the relation
    zeta^e = -sum_{k=0}^{q-2} zeta^{k q^{a-1} + l}.
    """
    m = q**a
    phi = m - m // q
    step = m // q  # q^{a-1}
    red = np.zeros((m, phi), dtype=object)
    for e in range(phi):
        red[e, e] = 1
    for l in range(step):
        e = (q - 1) * step + l
        for k in range(q - 1):
            red[e, k * step + l] = -1
    return red


@lru_cache(maxsize=None)
def _structure(u: int) -> _Structure:
    if u < 1:
        raise ValueError(f"conductor must be positive, got {u}")
    factors = factorize(u).factors
    axis_moduli = tuple(q**a for q, a in factors)
    axis_sizes = tuple(m - m // q for m, (q, _) in zip(axis_moduli, factors))
    dim = 1
    for s in axis_sizes:
        dim *= s
    # CRT: exponent of the q_i^{a_i} component of zeta_u^j is
    # j * inv(u / q_i^{a_i}) mod q_i^{a_i}.
    crt_mult = tuple(
        pow(u // m, -1, m) if m > 1 else 0 for m in axis_moduli
    )
    axis_reds = [_axis_reduction(q, a) for q, a in factors]

    basis_to_power = np.zeros(dim, dtype=np.int64)
    for flat in range(dim):
        rem, exps = flat, []
        for s in reversed(axis_sizes):
            exps.append(rem % s)
            rem //= s
        exps.reverse()
        j = 0
        for e, m in zip(exps, axis_moduli):
            j += e * (u // m)
        basis_to_power[flat] = j % u

    reduce_matrix = np.zeros((u, dim), dtype=object)
    for j in range(u):
        rows = [red[j * c % m] for red, c, m in zip(axis_reds, crt_mult, axis_moduli)]
        entry = np.array([1], dtype=object)
        for row in rows:
            entry = np.multiply.outer(entry, row).reshape(-1)
        reduce_matrix[j] = entry
    return _Structure(u, axis_moduli, axis_sizes, dim, basis_to_power, reduce_matrix)


def _as_object_array(values: Iterable[int]) -> np.ndarray:
    arr = np.empty(len(list_values := list(values)), dtype=object)
    for i, val in enumerate(list_values):
        arr[i] = int(val)
    return arr


class CycInt:
    """An element of Z[zeta_u] in canonical integral-basis coordinates.

    Immutable value type.  Arithmetic requires equal conductors; use
    :meth:`lift` to move into a larger cyclotomic ring explicitly.
    """

    __slots__ = ("u", "coeffs", "_hash")

    def __init__(self, u: int, basis_coeffs: Sequence[int] | np.ndarray):
        st = _structure(u)
        arr = _as_object_array(basis_coeffs)
        if arr.shape != (st.dim,):
            raise ValueError(
                f"conductor {u} needs {st.dim} basis coefficients, got {len(arr)}"
            )
        object.__setattr__  # noqa: B018 — slots class, plain assignment below
        self.u = u
        self.coeffs = arr
        self.coeffs.setflags(write=False)
        self._hash = hash((u, tuple(int(c) for c in arr)))

    # -- constructors -------------------------------------------------

    @classmethod
    def from_power_coeffs(cls, u: int, b: Sequence[int]) -> "CycInt":
        """Build sum_j b_j zeta_u^j from a length-u power-coefficient vector."""
        st = _structure(u)
        if len(b) != u:
            raise ValueError(f"expected {u} power coefficients, got {len(b)}")
        vec = _as_object_array(b)
        return cls(u, vec @ st.reduce_matrix)

    @classmethod
    def zero(cls, u: int) -> "CycInt":
        return cls(u, [0] * _structure(u).dim)

    @classmethod
    def integer(cls, u: int, r: int) -> "CycInt":
        coeffs = [0] * _structure(u).dim
        coeffs[0] = int(r)
        return cls(u, coeffs)

    @classmethod
    def root_of_unity(cls, u: int, j: int) -> "CycInt":
        """zeta_u^j as a CycInt of conductor u."""
        b = [0] * u
        b[j % u] = 1
        return cls.from_power_coeffs(u, b)

    # -- representation conversions ------------------------------------

    def power_coeffs(self) -> list[int]:
        """A (non-unique) length-u power representation of the element."""
        st = _structure(self.u)
        vec = [0] * self.u
        for flat, c in enumerate(self.coeffs):
            if c:
                vec[int(st.basis_to_power[flat])] += int(c)
        return vec

    # -- ring operations -----------------------------------------------

    def _check_same_ring(self, other: "CycInt") -> None:
        if self.u != other.u:
            raise ValueError(
                f"conductor mismatch {self.u} != {other.u}; lift explicitly"
            )

    def __add__(self, other: "CycInt | int") -> "CycInt":
        other = self._coerce(other)
        self._check_same_ring(other)
        return CycInt(self.u, self.coeffs + other.coeffs)

    def __sub__(self, other: "CycInt | int") -> "CycInt":
        other = self._coerce(other)
        self._check_same_ring(other)
        return CycInt(self.u, self.coeffs - other.coeffs)

    def __neg__(self) -> "CycInt":
        return CycInt(self.u, -self.coeffs)

    def __mul__(self, other: "CycInt | int") -> "CycInt":
        if isinstance(other, int):
            return CycInt(self.u, self.coeffs * other)
        self._check_same_ring(other)
        st = _structure(self.u)
        a, b = self.power_coeffs(), other.power_coeffs()
        out = [0] * self.u
        for i, ai in enumerate(a):
            if ai:
                for j, bj in enumerate(b):
                    if bj:
                        k = i + j
                        if k >= self.u:
                            k -= self.u
                        out[k] += ai * bj
        return CycInt(self.u, _as_object_array(out) @ st.reduce_matrix)

    __radd__ = __add__
    __rmul__ = __mul__

    def __rsub__(self, other: int) -> "CycInt":
        return (-self) + other

    def _coerce(self, other: "CycInt | int") -> "CycInt":
        if isinstance(other, int):
            return CycInt.integer(self.u, other)
        return other

    # -- Galois action ---------------------------------------------------

    def galois(self, t: int) -> "CycInt":
        """Image under sigma_t : zeta_u -> zeta_u^t (t coprime to u)."""
        t %= self.u if self.u > 1 else 1
        if self.u == 1:
            return self
        if gcd(t, self.u) != 1:
            raise ValueError(f"galois requires gcd(t, u) = 1, got t={t}, u={self.u}")
        st = _structure(self.u)
        vec = [0] * self.u
        for flat, c in enumerate(self.coeffs):
            if c:
                vec[int(st.basis_to_power[flat]) * t % self.u] += int(c)
        return CycInt(self.u, _as_object_array(vec) @ st.reduce_matrix)

    def conj(self) -> "CycInt":
        """Complex conjugate (the Galois map t = -1)."""
        if self.u <= 2:
            return self
        return self.galois(self.u - 1)

    def abs_sq(self) -> "CycInt":
        """x * conj(x)."""
        return self * self.conj()

    # -- predicates / extraction ----------------------------------------

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coeffs)

    def as_integer(self) -> int | None:
        """The rational integer value, or None when the element is irrational."""
        if any(c != 0 for c in self.coeffs[1:]):
            return None
        return int(self.coeffs[0])

    def divisible_by_integer(self, m: int) -> "CycInt | None":
        """x / m when m divides every basis coefficient, else None."""
        if m < 1:
            raise ValueError("divisor must be a positive integer")
        if any(int(c) % m for c in self.coeffs):
            return None
        return CycInt(self.u, [int(c) // m for c in self.coeffs])

    def coeff_bound_check(self, bound: int) -> bool:
        """True iff every integral-basis coefficient has |c| <= bound."""
        return all(abs(int(c)) <= bound for c in self.coeffs)

    def max_abs_coeff(self) -> int:
        return max((abs(int(c)) for c in self.coeffs), default=0)

    # -- conductor moves --------------------------------------------------

    def lift(self, new_u: int) -> "CycInt":
        """View the element inside Z[zeta_new_u] (u must divide new_u)."""
        if new_u % self.u:
            raise ValueError(f"{self.u} does not divide {new_u}")
        if new_u == self.u:
            return self
        scale = new_u // self.u
        vec = [0] * new_u
        for j, c in enumerate(self.power_coeffs()):
            if c:
                vec[j * scale] += c
        return CycInt.from_power_coeffs(new_u, vec)

    # -- numerics (pruning aid only) --------------------------------------

    def embeddings(self, precision: int = 53) -> list[complex]:
        """Values under all phi(u) complex embeddings zeta_u -> exp(2pi i t/u).

        The working precision (bits) bounds the rounding error; results are
        used for pruning only, never for decisions.
        """
        if precision < 53:
            raise ValueError("precision must be at least 53 bits")
        import mpmath

        st = _structure(self.u)
        with mpmath.workprec(precision):
            out = []
            for t in range(1, self.u + 1):
                if gcd(t, self.u) != 1 and self.u > 1:
                    continue
                total = mpmath.mpc(0)
                for flat, c in enumerate(self.coeffs):
                    if c:
                        e = int(st.basis_to_power[flat]) * t % self.u
                        total += int(c) * mpmath.expjpi(
                            mpmath.mpf(2 * e) / self.u
                        )
                out.append(complex(total))
        return out

    # -- serialization ------------------------------------------------------

    def to_json(self) -> dict:
        return {"u": self.u, "basis_coeffs": [int(c) for c in self.coeffs]}

    @classmethod
    def from_json(cls, data: dict) -> "CycInt":
        u = int(data["u"])
        if "basis_coeffs" in data:
            return cls(u, [int(c) for c in data["basis_coeffs"]])
        if "power_coeffs" in data:
            return cls.from_power_coeffs(u, [int(c) for c in data["power_coeffs"]])
        raise ValueError("CycInt JSON needs basis_coeffs or power_coeffs")

    # -- dunder plumbing ------------------------------------------------------

    def __eq__(self, other: object) -> bool:
        if isinstance(other, int):
            return self.as_integer() == other
        if not isinstance(other, CycInt):
            return NotImplemented
        return self.u == other.u and all(
            a == b for a, b in zip(self.coeffs, other.coeffs)
        )

    def __hash__(self) -> int:
        return self._hash

    def __repr__(self) -> str:
        return f"CycInt(u={self.u}, {[int(c) for c in self.coeffs]})"

    def __setattr__(self, name: str, value: object) -> None:
        if hasattr(self, "_hash") and name in self.__slots__:
            raise AttributeError("CycInt is immutable")
        object.__setattr__(self, name, value)


def dimension(u: int) -> int:
    """phi(u): the Z-rank of Z[zeta_u]."""
    return _structure(u).dim


def basis_power_exponents(u: int) -> np.ndarray:
    """Power exponent of each canonical basis monomial (flat order)."""
    return _structure(u).basis_to_power.copy()


@lru_cache(maxsize=None)
def _trace_of_power(u: int, j: int) -> int:
    """Tr_{Q(zeta_u)/Q}(zeta_u^j) = mu(m) phi(u)/phi(m), m = order of zeta_u^j."""
    m = u // gcd(j, u)
    mob = int(sympy.mobius(m))
    return mob * (totient(u) // totient(m))


@lru_cache(maxsize=None)
def hermitian_gram(u: int) -> tuple[tuple[int, ...], ...]:
    """Exact Gram matrix G_ij = Tr(b_i * conj(b_j)) of the integral basis.

    This is the quadratic form sending basis coordinates x to
    Tr(X * conj(X)) = sum over embeddings |X|^2; it drives the sphere
    enumeration of Weil numbers.
    """
    st = _structure(u)
    exps = st.basis_to_power
    return tuple(
        tuple(_trace_of_power(u, int(exps[i] - exps[j])) for j in range(st.dim))
        for i in range(st.dim)
    )
