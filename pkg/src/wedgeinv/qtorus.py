"""Quantum torus isomorphism arithmetic and the Heisenberg group in PGL_n.

``Q(w_1, ..., w_r)`` and ``Q(w_1^m_1, ..., w_r^m_r)`` (``w_i`` a primitive
``n_i``-th root of unity, ``n_1 | ... | n_r``) are isomorphic as k-algebras
iff ``m_1 ... m_r = +-1 (mod n_1)``, and Brauer equivalent iff every
``m_i = 1 (mod n_i)``.  The first verdict is also recovered from the wedge
criterion on ``H = A x A*``.

Roots of unity are realized in a prime field F_p with ``p = 1 (mod exp A)``,
so the Heisenberg matrices and their commutators are exact.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import gcd, prod
from typing import Optional, Sequence

from .abelian import FinGenAbGroup, GroupElement, QmodZ, pair
from .classify import RepSpec, birationally_equivalent
from .errors import ConsistencyError, InvalidInputError
from .symplectic import BilinearForm

__all__ = [
    "QuantumTorusSpec",
    "HeisenbergRep",
    "k_isomorphic",
    "brauer_equivalent",
    "heisenberg_group",
    "rep_characters",
    "wedge_criterion",
    "heisenberg",
    "default_prime",
    "span_check",
    "commutator_form",
    "commutator",
]


@dataclass(frozen=True)
class QuantumTorusSpec:
    degrees: tuple
    exponents: tuple

    def __post_init__(self):
        degrees = tuple(int(n) for n in self.degrees)
        exponents = tuple(int(m) for m in self.exponents)
        if not degrees:
            raise InvalidInputError("at least one degree is required")
        if len(degrees) != len(exponents):
            raise InvalidInputError("need one exponent per degree")
        if degrees[0] < 2:
            raise InvalidInputError("n_1 must be >= 2")
        for a, b in zip(degrees, degrees[1:]):
            if b % a:
                raise InvalidInputError(f"degrees must form a divisibility chain ({a} does not divide {b})")
        for m, n in zip(exponents, degrees):
            if gcd(m, n) != 1:
                raise InvalidInputError(f"exponent {m} is not prime to {n}")
        object.__setattr__(self, "degrees", degrees)
        object.__setattr__(self, "exponents", exponents)

    @property
    def rank(self) -> int:
        return len(self.degrees)

    def to_json(self) -> dict:
        return {"degrees": list(self.degrees), "exponents": list(self.exponents)}


def k_isomorphic(spec: QuantumTorusSpec) -> bool:
    n1 = spec.degrees[0]
    return prod(spec.exponents) % n1 in (1, n1 - 1)


def brauer_equivalent(spec: QuantumTorusSpec) -> bool:
    return all(m % n == 1 % n for m, n in zip(spec.exponents, spec.degrees))


def heisenberg_group(degrees: Sequence[int]) -> FinGenAbGroup:
    """``H = A x A*`` with coordinates interleaved ``(a_1, chi_1, a_2, chi_2, ...)``."""
    return FinGenAbGroup(tuple(n for n in degrees for _ in range(2)))


def rep_characters(spec: QuantumTorusSpec) -> tuple:
    """Character tuples of ``V`` (untwisted) and ``W`` (twisted) on ``H``.

    ``c(a_i)`` evaluates ``(b, eta) -> eta(a_i)``, so it is the dual
    coordinate of the ``chi_i`` slot; ``c(chi_i)`` is the dual coordinate of
    the ``a_i`` slot.  ``V = (c(a_i))_i + (-c(chi_i))_i`` and ``W`` replaces
    ``-c(chi_i)`` by ``-m_i c(chi_i)``.
    """
    h = heisenberg_group(spec.degrees)
    r = spec.rank

    def unit(k, scale=1):
        return h.character(tuple(scale if j == k else 0 for j in range(2 * r)))

    c_a = [unit(2 * i + 1) for i in range(r)]
    v = tuple(c_a + [unit(2 * i, -1) for i in range(r)])
    w = tuple(c_a + [unit(2 * i, -m) for i, m in enumerate(spec.exponents)])
    return v, w


def wedge_criterion(spec: QuantumTorusSpec) -> bool:
    h = heisenberg_group(spec.degrees)
    v, w = rep_characters(spec)
    return birationally_equivalent(RepSpec(h, v), RepSpec(h, w))


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    return all(p % q for q in range(2, int(p ** 0.5) + 1))


def default_prime(base: FinGenAbGroup) -> int:
    """Smallest prime ``p`` with ``p = 1 (mod exp A)``."""
    e = base.exponent
    p = e + 1
    while not _is_prime(p):
        p += e
    return p


def _root_of_unity(e: int, p: int) -> int:
    """Smallest element of F_p* of multiplicative order exactly ``e``."""
    for z in range(1, p):
        if pow(z, e, p) == 1 and all(pow(z, e // q, p) != 1 for q in _prime_factors(e)):
            return z
    raise InvalidInputError(f"F_{p} has no element of order {e}")


def _prime_factors(n: int) -> list:
    out, q = [], 2
    while q * q <= n:
        if n % q == 0:
            out.append(q)
            while n % q == 0:
                n //= q
        q += 1
    if n > 1:
        out.append(n)
    return out


@dataclass(frozen=True)
class HeisenbergRep:
    """Matrices ``P_a`` and ``D_chi`` on F_p[A] (basis indexed by ``elements``)."""

    base: FinGenAbGroup
    prime: int
    root: int
    elements: tuple
    P: dict = field(repr=False, compare=False)
    D: dict = field(repr=False, compare=False)

    @property
    def n(self) -> int:
        return len(self.elements)

    def root_power(self, x: QmodZ) -> int:
        e = self.base.exponent
        k = x.as_fraction() * e
        if k.denominator != 1:
            raise ConsistencyError("character value is not an exp(A)-th root of unity")
        return pow(self.root, int(k) % e, self.prime)

    def discrete_log(self, z: int) -> QmodZ:
        e = self.base.exponent
        x = 1
        for k in range(e):
            if x == z % self.prime:
                return QmodZ(k, e)
            x = x * self.root % self.prime
        raise ConsistencyError(f"{z} is not a power of the chosen root of unity")

    def lift(self, a: GroupElement, chi: GroupElement) -> list:
        return _matmul(self.P[a.coords], self.D[chi.coords], self.prime)


def _matmul(x, y, p):
    cols = list(zip(*y))
    return [[sum(a * b for a, b in zip(row, col)) % p for col in cols] for row in x]


def heisenberg(base: FinGenAbGroup, prime: Optional[int] = None) -> HeisenbergRep:
    if not base.is_finite:
        raise InvalidInputError("Heisenberg representation needs a finite group")
    e = base.exponent
    p = default_prime(base) if prime is None else int(prime)
    if not _is_prime(p) or (p - 1) % e:
        raise InvalidInputError(f"{p} is not a prime congruent to 1 mod {e}")
    zeta = _root_of_unity(e, p)
    elements = tuple(base.elements())
    index = {x.coords: i for i, x in enumerate(elements)}
    n = len(elements)
    rep = HeisenbergRep(base, p, zeta, elements, {}, {})
    for a in elements:
        m = [[0] * n for _ in range(n)]
        for b in elements:
            m[index[(a + b).coords]][index[b.coords]] = 1
        rep.P[a.coords] = m
    for chi in elements:
        m = [[0] * n for _ in range(n)]
        for b in elements:
            m[index[b.coords]][index[b.coords]] = rep.root_power(pair(chi, b))
        rep.D[chi.coords] = m
    # D_chi P_a = chi(a) P_a D_chi
    for a in elements:
        for chi in elements:
            lhs = _matmul(rep.D[chi.coords], rep.P[a.coords], p)
            c = rep.root_power(pair(chi, a))
            rhs = [[c * x % p for x in row] for row in _matmul(rep.P[a.coords], rep.D[chi.coords], p)]
            if lhs != rhs:
                raise ConsistencyError("Heisenberg commutation relation fails")
    return rep


def _rank_mod_p(rows: list, p: int) -> int:
    rows = [list(r) for r in rows]
    rank, ncols = 0, len(rows[0]) if rows else 0
    for c in range(ncols):
        piv = next((i for i in range(rank, len(rows)) if rows[i][c] % p), None)
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        inv = pow(rows[rank][c], -1, p)
        rows[rank] = [x * inv % p for x in rows[rank]]
        for i in range(len(rows)):
            if i != rank and rows[i][c]:
                f = rows[i][c]
                rows[i] = [(x - f * y) % p for x, y in zip(rows[i], rows[rank])]
        rank += 1
    return rank


def span_check(h: HeisenbergRep) -> bool:
    """The ``n^2`` products ``P_a D_chi`` span all n x n matrices over F_p."""
    vectors = [
        [x for row in h.lift(a, chi) for x in row] for a in h.elements for chi in h.elements
    ]
    return _rank_mod_p(vectors, h.prime) == h.n * h.n


def _scalar_ratio(x: list, y: list, p: int) -> int:
    """The scalar ``c`` with ``x = c * y``; raises if there is none."""
    c = None
    for rx, ry in zip(x, y):
        for u, v in zip(rx, ry):
            if v % p:
                cand = u * pow(v, -1, p) % p
                if c is None:
                    c = cand
                elif c != cand:
                    raise ConsistencyError("commutator is not scalar")
            elif u % p:
                raise ConsistencyError("commutator is not scalar")
    if c is None:
        raise ConsistencyError("zero matrix in commutator")
    return c


def commutator_form(h: HeisenbergRep) -> BilinearForm:
    """``omega(x, y) = X Y X^-1 Y^-1`` on ``H = A x A*`` (interleaved coordinates).

    Computed as the scalar ``c`` with ``XY = c YX``, which does not depend on
    the lifts.  It equals ``a*(b) - b*(a)``, i.e. minus the standard Gram
    matrix: ``omega(e_i, f_i) = -1/n_i``.
    """
    base = h.base
    hgroup = heisenberg_group(base.factors)
    gens = hgroup.basis()

    gram = tuple(tuple(commutator(h, x, y) for y in gens) for x in gens)
    return BilinearForm(hgroup, gram)


def commutator(h: HeisenbergRep, x: GroupElement, y: GroupElement) -> QmodZ:
    """Scalar commutator of lifts of two elements of ``A x A*``, as a Q/Z value."""
    base = h.base

    def lift(z: GroupElement):
        return h.lift(base.element(z.coords[0::2]), base.element(z.coords[1::2]))

    mx, my = lift(x), lift(y)
    xy = _matmul(mx, my, h.prime)
    yx = _matmul(my, mx, h.prime)
    return h.discrete_log(_scalar_ratio(xy, yx, h.prime))
