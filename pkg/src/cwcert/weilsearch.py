"""Cyclotomic norm-equation solving and the searches built on it.

The central problem: find all X in Z[zeta_v] with X * conj(X) = n, up to the
equivalence X ~ eta * X^sigma (eta a root of unity times a sign, sigma a
Galois automorphism).  Complete class lists feed two non-existence rules
(coefficient divisibility and rational-idempotent integrality) and several
multiplier-constrained searches for small weighing matrices.

Enumeration backend
-------------------
Solutions are vectors on the sphere Tr(X * conj(X)) = n * phi(v) of the
Hermitian trace form.  A direct sphere search is hopeless for interesting
conductors, so we first split by prime-ideal valuations: for each prime q | n
the ideal (q) factors as a product of primes of Z[zeta_v], conjugation pairs
them up, and any solution satisfies nu_P(X) + nu_Pbar(X) = e_q * nu_q(n) for
each pair.  Each valuation pattern confines X to an ideal sublattice of huge
index, where Fincke-Pohst enumeration (after basis reduction) visits only a
handful of points.  A Turyn-style pre-reduction divides out self-conjugate
square factors of n before any lattice work.  All numeric steps only steer
the search; every candidate is verified by exact cyclotomic arithmetic.
"""

from __future__ import annotations

import itertools
import json
import os
from dataclasses import dataclass, field
from math import gcd, isqrt
from typing import Iterator, Mapping, Sequence

import numpy as np
import sympy
from sympy.matrices.normalforms import hermite_normal_form

from .certificates import Certificate, CellQuery, INCONCLUSIVE, NONEXISTENT
from .cyclotomic import (
    CycInt,
    _trace_of_power,
    basis_power_exponents,
    dimension,
    hermitian_gram,
)
from .grouprings import AbelianGroup, GroupRingElem, all_characters, orbits_under_power
from .numtheory import (
    _prime_self_conjugate,
    factorize,
    nu,
    prime_divisors,
    totient,
)

#: Required backend handles conductors with phi(v) up to this dimension.
DIMENSION_CAP = 32


class DimensionTooLarge(Exception):
    """phi(v) exceeds the enumeration backend's dimension cap."""


class SearchOverflow(Exception):
    """A search exceeded its node or combination budget."""


class IncompleteEnumeration(Exception):
    """A rule needs a complete class list that is not available."""


# ---------------------------------------------------------------------------
# Equivalence classes of solutions
# ---------------------------------------------------------------------------


def equivalence_orbit(x: CycInt) -> list[CycInt]:
    """All eta * x^sigma with eta in {+-zeta_u^j} and sigma Galois."""
    u = x.u
    zeta = CycInt.root_of_unity(u, 1)
    out: set[CycInt] = set()
    for t in range(1, u + 1):
        if gcd(t, u) != 1:
            continue
        y = x.galois(t)
        for _ in range(u):
            out.add(y)
            out.add(-y)
            y = y * zeta
    return sorted(out, key=_coeff_key)


def _coeff_key(x: CycInt) -> tuple[int, ...]:
    return tuple(int(c) for c in x.coeffs)


def canonical_rep(x: CycInt) -> CycInt:
    """Lexicographically least basis-coefficient vector over the orbit."""
    return min(equivalence_orbit(x), key=_coeff_key)


@dataclass(frozen=True)
class WeilClass:
    """One equivalence class of solutions of X * conj(X) = n."""

    representative: CycInt
    n: int
    orbit_size: int

    def to_json(self) -> dict:
        return {
            "representative": self.representative.to_json(),
            "n": self.n,
            "orbit_size": self.orbit_size,
        }

    @classmethod
    def from_json(cls, data: dict) -> "WeilClass":
        return cls(
            representative=CycInt.from_json(data["representative"]),
            n=data["n"],
            orbit_size=data["orbit_size"],
        )


@dataclass(frozen=True)
class SolutionSet:
    """All classes of X * conj(X) = n at conductor v (or an imported subset).

    ``complete`` distinguishes a finished enumeration from an imported or
    partial list; incomplete sets may carry ``assertions`` (e.g. a claimed
    class count, or that every class is divisible by some integer) that
    consuming rules record in their certificates.
    """

    v: int
    n: int
    classes: tuple[WeilClass, ...]
    complete: bool = True
    assertions: Mapping[str, int] = field(default_factory=dict)

    def representatives(self) -> list[CycInt]:
        return [c.representative for c in self.classes]

    def to_json(self) -> dict:
        data = {
            "v": self.v,
            "n": self.n,
            "complete": self.complete,
            "classes": [c.to_json() for c in self.classes],
        }
        if self.assertions:
            data["assertions"] = dict(self.assertions)
        return data

    @classmethod
    def from_json(cls, data: dict) -> "SolutionSet":
        return cls(
            v=data["v"],
            n=data["n"],
            classes=tuple(WeilClass.from_json(c) for c in data["classes"]),
            complete=data["complete"],
            assertions=dict(data.get("assertions", {})),
        )


# ---------------------------------------------------------------------------
# Solution-set cache
# ---------------------------------------------------------------------------

CACHE_ENV = "CWM_CACHE"


def _cache_path(v: int, n: int, cache_dir: str | None) -> str | None:
    directory = cache_dir or os.environ.get(CACHE_ENV)
    if not directory:
        return None
    return os.path.join(directory, f"weil_v{v}_n{n}.json")


def cache_load(v: int, n: int, cache_dir: str | None = None) -> SolutionSet | None:
    path = _cache_path(v, n, cache_dir)
    if path is None or not os.path.exists(path):
        return None
    with open(path) as handle:
        return SolutionSet.from_json(json.load(handle))


def cache_store(solution_set: SolutionSet, cache_dir: str | None = None) -> None:
    path = _cache_path(solution_set.v, solution_set.n, cache_dir)
    if path is None:
        return
    os.makedirs(os.path.dirname(path) or ".", exist_ok=True)
    with open(path, "w") as handle:
        json.dump(solution_set.to_json(), handle, indent=1, sort_keys=True)


# ---------------------------------------------------------------------------
# Lattice machinery: HNF bases of ideals, basis reduction, sphere points
# ---------------------------------------------------------------------------


def _hnf_columns(columns: Sequence[Sequence[int]], m: int) -> list[list[int]]:
    """HNF basis (as columns) of the lattice spanned by the given columns."""
    mat = sympy.Matrix([[int(col[i]) for col in columns] for i in range(m)])
    hnf = hermite_normal_form(mat)
    if hnf.shape[1] != m:
        raise ValueError("lattice is not full rank")
    return [[int(hnf[i, j]) for i in range(m)] for j in range(m)]


def _ideal_multiply(v: int, basis: list[list[int]], q: int, gen: CycInt) -> list[list[int]]:
    """Basis of I * (q, gen) from an HNF basis of the ideal I."""
    m = dimension(v)
    cols: list[list[int]] = []
    for col in basis:
        elem = CycInt(v, col)
        cols.append([c * q for c in col])
        cols.append([int(c) for c in (elem * gen).coeffs])
    return _hnf_columns(cols, m)


def _prime_factor_gens(v: int, q: int) -> tuple[int, list[tuple[int, int]], list[CycInt]]:
    """Factor (q) in Z[zeta_v]: ramification e, conjugate pairing, generators.

    Returns (e, pairs, gens) where gens[i] is a second generator of the i-th
    prime ideal P_i = (q, gens[i]) and pairs lists index pairs (i, j) with
    P_j = conj(P_i); a self-conjugate prime appears as (i, i).
    """
    x = sympy.Symbol("x")
    poly = sympy.Poly(sympy.cyclotomic_poly(v, x), x, modulus=q)
    factors = poly.factor_list()[1]
    e = factors[0][1]
    coeff_lists: list[tuple[int, ...]] = []
    gens: list[CycInt] = []
    for fac, exp in factors:
        if exp != e:
            raise ValueError("inconsistent ramification exponents")
        coeffs = [int(c) % q for c in fac.all_coeffs()]  # descending degree
        coeff_lists.append(tuple(coeffs))
        ascending = list(reversed(coeffs))
        power = ascending + [0] * (v - len(ascending))
        gens.append(CycInt.from_power_coeffs(v, power[:v]))
    # conjugate of the factor with roots w is the monic factor with roots 1/w
    def reciprocal(coeffs: tuple[int, ...]) -> tuple[int, ...]:
        rev = list(reversed(coeffs))
        lead_inv = pow(rev[0], -1, q)
        return tuple((c * lead_inv) % q for c in rev)

    pairs: list[tuple[int, int]] = []
    used: set[int] = set()
    for i, coeffs in enumerate(coeff_lists):
        if i in used:
            continue
        partner = coeff_lists.index(reciprocal(coeffs))
        pairs.append((i, partner))
        used.update((i, partner))
    return e, pairs, gens


def _lll_on_gram(gram: list[list[int]], delta: float = 0.99) -> list[list[int]]:
    """LLL reduction given an exact Gram matrix; returns the unimodular
    transform U (columns) with reduced Gram U^T G U.

    Gram-Schmidt data is computed in floating point; it only affects basis
    quality, never correctness of the later exact enumeration.
    """
    m = len(gram)
    G = [[int(x) for x in row] for row in gram]
    U = [[1 if i == j else 0 for j in range(m)] for i in range(m)]

    def gso() -> tuple[np.ndarray, np.ndarray]:
        mu = np.zeros((m, m))
        d = np.zeros(m)
        for i in range(m):
            for j in range(i):
                s = float(G[i][j]) - float(np.dot(mu[i, :j] * mu[j, :j], d[:j]))
                mu[i, j] = s / d[j] if d[j] != 0 else 0.0
            d[i] = float(G[i][i]) - float(np.dot(mu[i, :i] ** 2, d[:i]))
        return mu, d

    def translate(k: int, j: int, r: int) -> None:
        # basis op b_k <- b_k - r * b_j, applied congruently to G and to U
        for i in range(m):
            U[i][k] -= r * U[i][j]
        for i in range(m):
            G[k][i] -= r * G[j][i]
        for i in range(m):
            G[i][k] -= r * G[i][j]

    def swap(k: int) -> None:
        for i in range(m):
            U[i][k], U[i][k - 1] = U[i][k - 1], U[i][k]
        G[k], G[k - 1] = G[k - 1], G[k]
        for i in range(m):
            G[i][k], G[i][k - 1] = G[i][k - 1], G[i][k]

    k = 1
    budget = 40000
    while k < m and budget > 0:
        budget -= 1
        mu, d = gso()
        for j in range(k - 1, -1, -1):
            r = int(round(mu[k, j]))
            if r:
                translate(k, j, r)
                mu, d = gso()
        if d[k] >= (delta - mu[k, k - 1] ** 2) * d[k - 1]:
            k += 1
        else:
            swap(k)
            k = max(k - 1, 1)
    return U


def _matmul(a: list[list[int]], b: list[list[int]]) -> list[list[int]]:
    rows, inner, cols = len(a), len(b), len(b[0])
    return [
        [sum(a[i][k] * b[k][j] for k in range(inner)) for j in range(cols)]
        for i in range(rows)
    ]


def _transpose(a: list[list[int]]) -> list[list[int]]:
    return [list(row) for row in zip(*a)]


def _columns_to_matrix(cols: list[list[int]]) -> list[list[int]]:
    return _transpose(cols)


def _sphere_points(
    gram: list[list[int]], target: int, node_cap: int = 20_000_000
) -> Iterator[list[int]]:
    """All integer vectors x with x^T G x = target exactly.

    Fincke-Pohst with a floating-point reversed-order Cholesky ladder for
    interval bounds (with a safety margin) and an exact integer form check at
    the leaves.
    """
    m = len(gram)
    Gf = np.array([[float(x) for x in row] for row in gram])
    A = Gf.copy()
    d = np.zeros(m)
    mu = np.zeros((m, m))
    for j in range(m - 1, -1, -1):
        d[j] = A[j, j]
        if d[j] <= 0:
            raise ValueError("Gram matrix not positive definite")
        mu[j, :j] = A[j, :j] / A[j, j]
        A[:j, :j] -= np.outer(A[:j, j], A[:j, j]) / A[j, j]
    eps = 1e-7 * target + 1e-9
    x = [0] * m
    nodes = 0

    def exact_form(vec: list[int]) -> int:
        total = 0
        for i in range(m):
            if vec[i]:
                row = gram[i]
                total += vec[i] * sum(row[j] * vec[j] for j in range(m) if vec[j])
        return total

    def rec(j: int, rho: float) -> Iterator[list[int]]:
        nonlocal nodes
        nodes += 1
        if nodes > node_cap:
            raise SearchOverflow(f"sphere enumeration exceeded {node_cap} nodes")
        if j < 0:
            if exact_form(x) == target:
                yield list(x)
            return
        center = float(np.dot(mu[j, j + 1 :], x[j + 1 :])) if j < m - 1 else 0.0
        radius = ((target - rho + eps) / d[j]) ** 0.5 if target - rho + eps > 0 else 0.0
        lo = int(np.ceil(-center - radius - 1e-9))
        hi = int(np.floor(-center + radius + 1e-9))
        for xj in range(lo, hi + 1):
            x[j] = xj
            step = d[j] * (xj + center) ** 2
            if rho + step > target + eps:
                continue
            yield from rec(j - 1, rho + step)
        x[j] = 0

    yield from rec(m - 1, 0.0)


# ---------------------------------------------------------------------------
# weil_enumerate
# ---------------------------------------------------------------------------


def _empty(v: int, n: int) -> SolutionSet:
    return SolutionSet(v, n, (), complete=True)


def weil_enumerate(
    v: int,
    n: int,
    cache_dir: str | None = None,
    pattern_cap: int = 4096,
    node_cap: int = 20_000_000,
) -> SolutionSet:
    """Complete equivalence-class list of X in Z[zeta_v] with X * conj(X) = n.

    Raises DimensionTooLarge when phi(v) exceeds the backend cap; callers may
    then fall back to imported class lists flagged complete=False.
    """
    if v < 1 or n < 1:
        raise ValueError("weil_enumerate requires v >= 1 and n >= 1")
    cached = cache_load(v, n, cache_dir)
    if cached is not None and cached.complete:
        return cached
    if totient(v) > DIMENSION_CAP:
        raise DimensionTooLarge(
            f"phi({v}) = {totient(v)} exceeds the backend cap {DIMENSION_CAP}"
        )

    # Turyn-style pre-reduction: a self-conjugate prime q with q^2 | n forces
    # X = q * Y with Y * conj(Y) = n / q^2.
    target = n
    scale = 1
    for q in prime_divisors(n):
        while target % (q * q) == 0 and _prime_self_conjugate(q, v):
            target //= q * q
            scale *= q

    result = None
    if dimension(v) == 1:
        # rational case: X^2 = target
        root = isqrt(target)
        if root * root == target:
            result = SolutionSet(
                v, n, (WeilClass(CycInt.integer(v, scale * root), n, 2),), True
            )
        else:
            result = _empty(v, n)
    elif target == 1:
        rep = canonical_rep(CycInt.integer(v, scale))
        result = SolutionSet(
            v, n, (WeilClass(rep, n, len(equivalence_orbit(rep))),), True
        )
    if result is not None:
        cache_store(result, cache_dir)
        return result

    # Remaining primes of target: split by prime-ideal valuation patterns.
    per_pair_choices: list[list[tuple[tuple[int, int, int], ...]]] = []
    for q in prime_divisors(target):
        e, pairs, _ = _prime_factor_gens(v, q)
        total = e * nu(q, target)
        for i, j in pairs:
            if i == j:
                if total % 2 != 0:
                    result = _empty(v, n)
                    cache_store(result, cache_dir)
                    return result
                per_pair_choices.append([((q, i, total // 2),)])
            else:
                per_pair_choices.append(
                    [((q, i, a), (q, j, total - a)) for a in range(total + 1)]
                )
    combo_count = 1
    for choices in per_pair_choices:
        combo_count *= len(choices)
    if combo_count > pattern_cap:
        raise SearchOverflow(
            f"{combo_count} valuation patterns exceed the cap {pattern_cap}"
        )

    m = dimension(v)
    gram0 = [list(row) for row in hermitian_gram(v)]
    T2 = target * m
    gen_cache: dict[tuple[int, int], CycInt] = {}

    def generator(q: int, idx: int) -> CycInt:
        if (q, idx) not in gen_cache:
            _, _, gens = _prime_factor_gens(v, q)
            for k, g in enumerate(gens):
                gen_cache[(q, k)] = g
        return gen_cache[(q, idx)]

    lattice_cache: dict[tuple, list[list[int]]] = {
        (): [[1 if i == j else 0 for i in range(m)] for j in range(m)]
    }

    def ideal_lattice(steps: tuple[tuple[int, int, int], ...]) -> list[list[int]]:
        if steps in lattice_cache:
            return lattice_cache[steps]
        prefix, (q, idx, power) = steps[:-1], steps[-1]
        basis = ideal_lattice(prefix)
        gen = generator(q, idx)
        for _ in range(power):
            basis = _ideal_multiply(v, basis, q, gen)
        lattice_cache[steps] = basis
        return basis

    seen: set[CycInt] = set()
    classes: dict[CycInt, WeilClass] = {}
    for combo in itertools.product(*per_pair_choices):
        steps = tuple(step for choice in combo for step in choice if step[2] > 0)
        basis_cols = ideal_lattice(tuple(sorted(steps)))
        B = _columns_to_matrix(basis_cols)  # m x m, columns are basis vectors
        gram_sub = _matmul(_transpose(B), _matmul(gram0, B))
        U = _lll_on_gram(gram_sub)
        B_red = _matmul(B, U)
        gram_red = _matmul(_transpose(U), _matmul(gram_sub, U))
        for point in _sphere_points(gram_red, T2, node_cap):
            coeffs = [
                sum(B_red[i][j] * point[j] for j in range(m)) for i in range(m)
            ]
            candidate = CycInt(v, coeffs)
            if candidate in seen:
                continue
            if candidate.abs_sq().as_integer() != target:
                continue
            orbit = equivalence_orbit(candidate)
            seen.update(orbit)
            rep = min(orbit, key=_coeff_key) * scale
            classes[rep] = WeilClass(rep, n, len(orbit))

    ordered = tuple(
        classes[rep] for rep in sorted(classes, key=_coeff_key)
    )
    result = SolutionSet(v, n, ordered, complete=True)
    cache_store(result, cache_dir)
    return result


# ---------------------------------------------------------------------------
# Divisibility rule
# ---------------------------------------------------------------------------


def _divisors(v: int) -> list[int]:
    out = [1]
    for p, e in factorize(v):
        out = [d * p**k for d in out for k in range(e + 1)]
    return sorted(out)


def weil_divisibility_rule(
    v: int,
    n: int,
    q: int,
    a: int = 1,
    cache_dir: str | None = None,
    imports: Mapping[int, SolutionSet] | None = None,
) -> Certificate:
    """Refute CW(v, n) when q divides every solution class at every conductor.

    If chi(D) = 0 mod q for every character chi of C_v, the inversion formula
    gives q | v * coefficient for each coefficient of D.  When gcd(q, v) = 1
    all coefficients are multiples of q, impossible for a nonzero element
    with coefficients in [-a, a] once q > a.  When q | v (q odd, 2a < q) the
    coefficients are instead constant on cosets of the order-q subgroup, so D
    is a multiple of that subgroup sum and characters nontrivial on it
    annihilate D, contradicting |chi(D)|^2 = n > 0.
    """
    query = CellQuery.cyclic(v, n, a)
    if not sympy.isprime(q):
        raise ValueError("q must be prime")
    if v % q == 0:
        branch = "coset"
        if q <= 2 * a:
            return Certificate(
                "WEIL_DIVISIBILITY",
                query,
                {"q": q, "reason": f"coset branch needs q > 2a, got q={q}, a={a}"},
                INCONCLUSIVE,
            )
    else:
        branch = "coefficient"
        if q <= a:
            return Certificate(
                "WEIL_DIVISIBILITY",
                query,
                {"q": q, "reason": f"coefficient branch needs q > a, got q={q}, a={a}"},
                INCONCLUSIVE,
            )

    imports = imports or {}
    checked: dict[int, str] = {}
    for w in _divisors(v):
        solution_set = imports.get(w)
        if solution_set is None:
            try:
                solution_set = weil_enumerate(w, n, cache_dir=cache_dir)
            except DimensionTooLarge:
                return Certificate(
                    "WEIL_DIVISIBILITY",
                    query,
                    {"q": q, "reason": f"no class list available for conductor {w}"},
                    INCONCLUSIVE,
                )
        if solution_set.v != w or solution_set.n != n:
            raise ValueError(f"imported class list mismatched for conductor {w}")
        for cls in solution_set.classes:
            if cls.representative.divisible_by_integer(q) is None:
                return Certificate(
                    "WEIL_DIVISIBILITY",
                    query,
                    {
                        "q": q,
                        "conductor": w,
                        "reason": "class not divisible",
                        "class": cls.representative.to_json(),
                    },
                    INCONCLUSIVE,
                )
        if solution_set.complete:
            checked[w] = "enumerated"
        else:
            # an incomplete list must carry an explicit divisibility claim
            claimed = int(solution_set.assertions.get("all_divisible_by", 1))
            if claimed % q != 0:
                return Certificate(
                    "WEIL_DIVISIBILITY",
                    query,
                    {
                        "q": q,
                        "conductor": w,
                        "reason": "incomplete class list without divisibility assertion",
                    },
                    INCONCLUSIVE,
                )
            checked[w] = "imported"
    return Certificate(
        "WEIL_DIVISIBILITY",
        query,
        {"q": q, "branch": branch, "conductors": checked},
        NONEXISTENT,
    )


# ---------------------------------------------------------------------------
# Rational-idempotent integrality search
# ---------------------------------------------------------------------------


def _trace_vector(x: CycInt, v: int) -> np.ndarray:
    """T[j] = Tr(x * zeta_w^(-j)) for j mod v, where w = conductor of x's ring.

    (1/v) * T is exactly the coefficient vector of the rational-idempotent
    component of C_v determined by a character of order w sending the
    generator to zeta_w.
    """
    w = x.u
    if v % w != 0:
        raise ValueError("conductor must divide the group order")
    trace_table = np.array([_trace_of_power(w, e) for e in range(w)], dtype=np.int64)
    exponents = np.asarray(basis_power_exponents(w), dtype=np.int64)
    ks = np.arange(w, dtype=np.int64)
    tile = np.zeros(w, dtype=np.int64)
    coeffs = [int(c) for c in x.coeffs]
    for j, b in enumerate(exponents):
        if coeffs[j]:
            tile += coeffs[j] * trace_table[(b - ks) % w]
    return np.tile(tile, v // w)


def _orbit_elements(solution_set: SolutionSet, reps_only: bool) -> list[CycInt]:
    out: list[CycInt] = []
    for cls in solution_set.classes:
        if reps_only:
            out.append(cls.representative)
        else:
            out.extend(equivalence_orbit(cls.representative))
    return out


def idempotent_integrality_search(
    v: int,
    n: int,
    per_divisor_classes: Mapping[int, SolutionSet],
    a: int = 1,
    max_matches: int = 2_000_000,
) -> Certificate:
    """Decide whether character values can reassemble into an integral element.

    Pick a prime p exactly dividing v.  Writing D = (1/p) C_p U + (1/p)
    (p - C_p) V, the second summand is determined by the character values X_w
    at the conductors w | v with p | w, each a solution of X * conj(X) = n.
    The search runs over every assignment of X_w (class representative x
    root-of-unity translate x Galois image; the top conductor is fixed to
    class representatives, absorbing the global equivalence action):

    1. integrality of (p - C_p) V forces a congruence mod v/p on the summed
       trace vectors (meet-in-the-middle join);
    2. surviving assignments determine the coefficients of (p - C_p) V
       exactly; on each coset of C_p the quotient part U contributes one
       unknown integer, and coefficients in [-a, a] leave a small interval
       for it -- the intersection over the coset must be nonempty;
    3. the quotient projection of the reconstruction equals U itself, so the
       character values at the remaining conductors m | v/p are exactly the
       character values of U; each must satisfy X * conj(X) = n.  This checks
       the conductors not divisible by p without any further enumeration.

    NONEXISTENT iff no assignment survives all three stages; otherwise the
    surviving fully reconstructed candidates (integral, coefficients in
    [-a, a], every character value of norm n) are returned for downstream
    verification.
    """
    query = CellQuery.cyclic(v, n, a)
    split_primes = [p for p in prime_divisors(v) if nu(p, v) == 1]
    if not split_primes:
        raise ValueError("idempotent search needs a prime exactly dividing v")
    p = max(split_primes)
    modulus = v // p
    conductors = [w for w in _divisors(v) if w % p == 0]
    for w in conductors:
        ss = per_divisor_classes.get(w)
        if ss is None or not ss.complete:
            return Certificate(
                "IDEMPOTENT",
                query,
                {"p": p, "reason": f"complete class list missing for conductor {w}"},
                INCONCLUSIVE,
            )
        if not ss.classes:
            # some character value has no solution at all
            return Certificate(
                "IDEMPOTENT",
                query,
                {"p": p, "empty_conductor": w},
                NONEXISTENT,
            )

    candidates: dict[int, np.ndarray] = {}
    counts: dict[int, int] = {}
    for w in conductors:
        elems = _orbit_elements(per_divisor_classes[w], reps_only=(w == v))
        candidates[w] = np.stack([_trace_vector(x, v) for x in elems])
        counts[w] = len(elems)

    # --- stage 1: mod (v/p) meet-in-the-middle join ------------------------
    order = sorted(conductors, key=lambda w: counts[w], reverse=True)
    side_a: list[int] = []
    side_b: list[int] = []
    prod_a = prod_b = 1
    for w in order:
        if prod_a <= prod_b:
            side_a.append(w)
            prod_a *= counts[w]
        else:
            side_b.append(w)
            prod_b *= counts[w]

    def side_sums(side: list[int]) -> tuple[np.ndarray, list[tuple[int, ...]]]:
        total = np.zeros((1, v), dtype=np.int64)
        index_tuples: list[tuple[int, ...]] = [()]
        for w in side:
            arr = candidates[w]
            total = (total[:, None, :] + arr[None, :, :]).reshape(-1, v)
            index_tuples = [
                t + (i,) for t in index_tuples for i in range(len(arr))
            ]
            if len(index_tuples) > max_matches:
                raise SearchOverflow("idempotent stage-1 side too large")
        return total, index_tuples

    sums_a, idx_a = side_sums(side_a)
    sums_b, idx_b = side_sums(side_b)
    matches: list[np.ndarray] = []
    assignments: list[dict[int, int]] = []
    if modulus == 1:
        pair_iter = itertools.product(range(len(idx_a)), range(len(idx_b)))
        for ia, ib in pair_iter:
            matches.append(sums_a[ia] + sums_b[ib])
            assignments.append(
                {**dict(zip(side_a, idx_a[ia])), **dict(zip(side_b, idx_b[ib]))}
            )
            if len(matches) > max_matches:
                raise SearchOverflow("idempotent join exceeded budget")
    else:
        lookup: dict[bytes, list[int]] = {}
        keys_b = ((-sums_b) % modulus).astype(np.uint8)
        for ib in range(len(idx_b)):
            lookup.setdefault(keys_b[ib].tobytes(), []).append(ib)
        keys_a = (sums_a % modulus).astype(np.uint8)
        for ia in range(len(idx_a)):
            hits = lookup.get(keys_a[ia].tobytes())
            if not hits:
                continue
            for ib in hits:
                matches.append(sums_a[ia] + sums_b[ib])
                assignments.append(
                    {**dict(zip(side_a, idx_a[ia])), **dict(zip(side_b, idx_b[ib]))}
                )
                if len(matches) > max_matches:
                    raise SearchOverflow("idempotent join exceeded budget")

    # --- stage 2: per-coset interval for the quotient contribution ---------
    quotient_divisors = _divisors(modulus)
    n_sq = isqrt(n) if isqrt(n) ** 2 == n else None

    def quotient_ok(u_vec: tuple[int, ...]) -> bool:
        # The quotient projection of the candidate equals u_vec in Z[C_{v/p}];
        # every one of its character values must have norm n.
        for m in quotient_divisors:
            folded = [0] * m
            for c, val in enumerate(u_vec):
                folded[c % m] += val
            if m == 1:
                if n_sq is None or abs(folded[0]) != n_sq:
                    return False
                continue
            x = CycInt.from_power_coeffs(m, folded)
            norm = x.abs_sq().as_integer()
            if norm is None or norm != n:
                return False
        return True

    integral_assignments = 0
    survivor_count = 0
    survivor_info: list[dict] = []
    y_range = range(-a, a + 1)
    for total, assignment in zip(matches, assignments):
        if np.any(total % modulus):
            continue
        part = total // modulus  # coefficients of (p - C_p) V
        coset_choices: list[list[int]] = []
        dead = False
        for c in range(modulus):
            values = part[c::modulus]
            allowed = set(p * y - int(values[0]) for y in y_range)
            for val in values[1:]:
                allowed &= set(p * y - int(val) for y in y_range)
                if not allowed:
                    dead = True
                    break
            if dead:
                break
            coset_choices.append(sorted(allowed))
        if dead:
            continue
        # check every consistent reconstruction, streaming
        for u_choice in itertools.product(*coset_choices):
            integral_assignments += 1
            if integral_assignments > max_matches:
                raise SearchOverflow("too many integral reconstructions")
            if not quotient_ok(u_choice):
                continue
            survivor_count += 1
            if len(survivor_info) < 100:
                coeffs = [
                    (u_choice[j % modulus] + int(part[j])) // p
                    for j in range(v)
                ]
                survivor_info.append(
                    {"coeffs": coeffs, "assignment": dict(assignment)}
                )

    params = {
        "p": p,
        "conductors": conductors,
        "stage1_matches": len(matches),
        "integral_assignments": integral_assignments,
        "survivors": survivor_count,
    }
    if survivor_count:
        params["candidates"] = [info["coeffs"] for info in survivor_info]
        return Certificate("IDEMPOTENT", query, params, INCONCLUSIVE)
    return Certificate("IDEMPOTENT", query, params, NONEXISTENT)


# ---------------------------------------------------------------------------
# Verification and multiplier-constrained searches
# ---------------------------------------------------------------------------


def verify_weighing(element: GroupRingElem, n: int, a: int = 1) -> bool:
    """True iff coefficients lie in [-a, a] and D * D^(-1) = n * identity."""
    try:
        int_coeffs = element.int_coeffs()
    except ValueError:
        return False
    if any(abs(c) > a for c in int_coeffs.values()):
        return False
    product = element.convolve(element.conj_invert())
    group = element.group
    identity = group.identity
    for g, c in product.coeffs.items():
        expected = n if g == identity else 0
        if c.as_integer() != expected:
            return False
    if identity not in product.coeffs and n != 0:
        return False
    return True


def is_proper(element: GroupRingElem) -> bool:
    """True iff no translate of the element is supported in a proper subgroup.

    Support lies in a coset of a maximal subgroup H exactly when some prime-
    order character (whose kernel is H) is constant on the support.
    """
    support = list(element.support)
    if not support:
        raise ValueError("is_proper requires a nonzero element")
    group = element.group
    for chi in all_characters(group):
        if not sympy.isprime(chi.order):
            continue
        labels = {chi.root_exponent(g) for g in support}
        if len(labels) == 1:
            return False
    return True


def _canonical_group_ring(coeffs: Sequence[int], v: int) -> tuple[int, ...]:
    """Canonical form of an integer element of Z[C_v] under +-, Galois, shift."""
    best: tuple[int, ...] | None = None
    base = [int(c) for c in coeffs]
    for t in range(1, v + 1):
        if gcd(t, v) != 1:
            continue
        mapped = [0] * v
        for j, c in enumerate(base):
            mapped[j * t % v] = c
        for shift in range(v):
            shifted = tuple(
                mapped[(j - shift) % v] for j in range(v)
            )
            for candidate in (shifted, tuple(-c for c in shifted)):
                if best is None or candidate < best:
                    best = candidate
    assert best is not None
    return best


def orbit_search(
    v: int,
    n: int,
    a: int = 1,
    t: int = 1,
    node_cap: int = 50_000_000,
) -> list[GroupRingElem]:
    """All weighing elements of Z[C_v] fixed by the multiplier t, up to
    equivalence.

    Backtracks over per-orbit coefficients c_i in [-a, a] (orbits of
    multiplication by t on Z/v, size-ascending), pruning by the running
    weight sum c_i^2 s_i <= n and by the trivial-character constraint that
    the coefficient sum must be an integer square root of n.  Completed
    assignments are verified by convolution.  With t = 1 this is a plain
    exhaustive search.
    """
    if gcd(t, v) != 1:
        raise ValueError("multiplier must be coprime to the order")
    root = isqrt(n)
    if root * root != n:
        return []  # the trivial character value squares to n
    group = AbelianGroup.cyclic(v)
    orbits = orbits_under_power(group, t)
    sizes = [len(o) for o in orbits]
    k = len(orbits)
    suffix_weight = [0] * (k + 1)
    suffix_sum = [0] * (k + 1)
    for i in range(k - 1, -1, -1):
        suffix_weight[i] = suffix_weight[i + 1] + a * a * sizes[i]
        suffix_sum[i] = suffix_sum[i + 1] + a * sizes[i]
    solutions: dict[tuple[int, ...], GroupRingElem] = {}
    assignment = [0] * k
    nodes = 0

    def rec(i: int, weight: int, total: int) -> None:
        nonlocal nodes
        nodes += 1
        if nodes > node_cap:
            raise SearchOverflow("orbit search exceeded node budget")
        if weight > n:
            return
        if weight + suffix_weight[i] < n:
            return
        if abs(total) - suffix_sum[i] > root:
            return
        if i == k:
            if weight != n or abs(total) != root:
                return
            coeffs = [0] * v
            for idx, orbit in enumerate(orbits):
                for (g,) in orbit:
                    coeffs[g] = assignment[idx]
            element = GroupRingElem.from_cyclic_list(v, coeffs)
            if verify_weighing(element, n, a):
                solutions[_canonical_group_ring(coeffs, v)] = element
            return
        for c in range(-a, a + 1):
            assignment[i] = c
            rec(i + 1, weight + c * c * sizes[i], total + c * sizes[i])
        assignment[i] = 0

    rec(0, 0, 0)
    out = []
    for key in sorted(solutions):
        out.append(GroupRingElem.from_cyclic_list(v, list(key)))
    return out


def classify_icw2_77_100() -> list[GroupRingElem]:
    """All ICW_2(77, 100) up to equivalence.

    100 = 2^2 * 5^2 with 2^4 = 16 = 9 mod 7 and 5 acting on both prime parts
    of 77 makes 9 a multiplier for any such element; since gcd(9 - 1, 77) = 1
    a translate is literally fixed by 9 (the sign -1 is excluded because the
    trivial character value +-10 is nonzero).  The search is therefore the
    orbit-constrained backtracking with t = 9, a = 2.
    """
    return orbit_search(77, 100, a=2, t=9)
