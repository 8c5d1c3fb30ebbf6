"""Birational classification of faithful representations of diagonalizable groups.

A diagonalizable group is handled entirely through its character lattice,
a :class:`FinGenAbGroup`.  A representation ``chi_1 + ... + chi_d`` is the
tuple of its characters, and it is faithful iff the characters generate
the lattice.  Two faithful representations of equal dimension are
birationally equivalent iff their wedges agree up to sign.  When they do,
an explicit monomial map comes from a GL_d(Z) matrix relating the tuples.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from math import gcd, lcm
from typing import Optional, Sequence

from .abelian import Character, FinGenAbGroup, GroupAutomorphism, dual, dual_automorphism, is_generating
from .errors import InvalidInputError, NotEquivalentError
from .exactla import IntMatrix
from .exterior import WedgeClass, class_of, glz_witness, push_forward, wedge

__all__ = [
    "RepSpec",
    "FixedPointReport",
    "ClassCount",
    "invariant_i",
    "projective_fixed_points",
    "conjugation_twist",
    "birationally_equivalent",
    "monomial_witness",
    "count_classes",
    "katsylo_fails",
    "semidirect_counterexample",
    "unit_exponent_obstructs",
    "class_lower_bound_semidirect",
    "product_counterexample",
    "is_product_witness",
    "e8_class_count",
    "e8_classes",
]


@dataclass(frozen=True)
class RepSpec:
    """Characters ``(chi_1, ..., chi_d)`` of the group with character lattice ``group``."""

    group: FinGenAbGroup
    chars: tuple

    def __post_init__(self):
        lattice = dual(self.group)
        chars = tuple(
            c if isinstance(c, Character) else lattice.character(getattr(c, "coords", c))
            for c in self.chars
        )
        for c in chars:
            if c.group.factors != lattice.factors:
                raise InvalidInputError("character does not belong to the group's character lattice")
        object.__setattr__(self, "chars", chars)

    @property
    def dim(self) -> int:
        return len(self.chars)

    @property
    def faithful(self) -> bool:
        return is_generating(self.chars, dual(self.group))

    def wedge(self):
        return wedge(self.chars, dual(self.group))

    def to_json(self) -> dict:
        return {"group": self.group.to_json(), "chars": [c.to_json() for c in self.chars]}

    @classmethod
    def from_json(cls, obj) -> "RepSpec":
        try:
            group = FinGenAbGroup.from_json(obj["group"])
            chars = [c["coords"] if isinstance(c, dict) else c for c in obj["chars"]]
        except (KeyError, TypeError) as exc:
            raise InvalidInputError(f"malformed representation {obj!r}") from exc
        return cls(group, tuple(group.character(c) for c in chars))


@dataclass(frozen=True)
class FixedPointReport:
    point: int
    local_chars: tuple
    invariant: WedgeClass


def _require_faithful(rep: RepSpec):
    if not rep.faithful:
        raise InvalidInputError("representation is not faithful")


def _require_top_degree(rep: RepSpec):
    if rep.dim != rep.group.rank:
        raise InvalidInputError(
            f"invariant needs dimension equal to the rank ({rep.group.rank}), got {rep.dim}"
        )
    _require_faithful(rep)


def invariant_i(rep: RepSpec) -> WedgeClass:
    _require_top_degree(rep)
    return class_of(rep.wedge())


def projective_fixed_points(rep: RepSpec) -> list:
    """Fixed points of the completed action on P^r and their local invariants.

    At ``x_0`` the tangent characters are the ``chi_i``.  In the chart
    around ``x_j`` (j >= 1) they are ``chi_j^-1`` in slot ``j`` and
    ``chi_i chi_j^-1`` elsewhere.
    """
    _require_top_degree(rep)
    lattice = dual(rep.group)
    chars = rep.chars
    reports = [FixedPointReport(0, chars, class_of(wedge(chars, lattice)))]
    for j in range(len(chars)):
        local = tuple(-chars[j] if i == j else chars[i] - chars[j] for i in range(len(chars)))
        reports.append(FixedPointReport(j + 1, local, class_of(wedge(local, lattice))))
    return reports


def conjugation_twist(w: WedgeClass, phi: GroupAutomorphism) -> WedgeClass:
    """Transport an invariant along an automorphism ``phi`` of the group.

    The characters are pulled back along ``phi``; in top degree this is
    multiplication by ``det(phi)``.
    """
    if w.rep.power.base.factors != phi.group.factors:
        raise InvalidInputError("automorphism and invariant live on different groups")
    pullback = dual_automorphism(phi)
    return class_of(push_forward(w.rep, pullback.matrix))


def _check_comparable(v: RepSpec, w: RepSpec):
    if v.group != w.group:
        raise InvalidInputError("representations are of different groups")
    if v.dim != w.dim:
        raise InvalidInputError(f"dimensions differ: {v.dim} != {w.dim}")
    _require_faithful(v)
    _require_faithful(w)


def birationally_equivalent(v: RepSpec, w: RepSpec) -> bool:
    _check_comparable(v, w)
    return class_of(v.wedge()) == class_of(w.wedge())


def monomial_witness(v: RepSpec, w: RepSpec) -> IntMatrix:
    """Exponent matrix ``N`` of a monomial birational map ``V -> W``.

    ``y_i = x_1^N[0, i] * ... * x_d^N[d-1, i]`` and, additively,
    ``eta_i = sum_j N[j, i] chi_j``.  ``N`` is unimodular.
    """
    _check_comparable(v, w)
    if class_of(v.wedge()) != class_of(w.wedge()):
        raise NotEquivalentError("representations are not birationally equivalent")
    return glz_witness(v.chars, w.chars).T


@dataclass(frozen=True)
class ClassCount:
    count: int
    representatives: tuple  # of RepSpec


def _generators_up_to_sign(n: int) -> list:
    """Generators of Z/n (Z when n = 0), one per pair {u, -u}."""
    if n == 0:
        return [1]
    return [u for u in range(1, n) if gcd(u, n) == 1 and u <= n - u]


def count_classes(g: FinGenAbGroup, d: int) -> ClassCount:
    """Birational classes of faithful ``d``-dimensional representations."""
    r = g.rank
    if d < r:
        raise InvalidInputError(f"no faithful representation of dimension {d} < rank {r}")
    lattice = dual(g)
    basis = lattice.basis()
    basis = [lattice.character(b.coords) for b in basis]
    pad = [lattice.character((0,) * r)] * (d - r)
    if d > r or r == 0:
        return ClassCount(1, (RepSpec(g, tuple(basis + pad)),))
    reps = []
    for u in _generators_up_to_sign(g.factors[0]):
        reps.append(RepSpec(g, tuple([u * basis[0]] + basis[1:])))
    return ClassCount(len(reps), tuple(reps))


def katsylo_fails(g: FinGenAbGroup) -> bool:
    """True iff some dimension has two faithful representations that are not
    birationally equivalent; only the top dimension ``d = rank`` can."""
    return count_classes(g, g.rank).count > 1


def _units(n: int) -> list:
    return [m for m in range(1, n + 1) if gcd(m, n) == 1]


def semidirect_counterexample(n: int, r: int) -> Optional[int]:
    """Smallest ``m`` prime to ``n`` with ``m^r != +-1 (mod n)``, if any."""
    if n < 2 or r < 1:
        raise InvalidInputError("need n >= 2 and r >= 1")
    for m in _units(n):
        if pow(m, r, n) not in (1, n - 1):
            return m
    return None


def _unit_group_exponent(n: int) -> int:
    out = 1
    for m in _units(n):
        k, x = 1, m % n
        while x != 1 % n:
            x = x * m % n
            k += 1
        out = lcm(out, k)
    return out


def unit_exponent_obstructs(n: int, r: int) -> bool:
    """Sufficient condition for a counterexample: exp(U_n) does not divide 2r."""
    if n < 2 or r < 1:
        raise InvalidInputError("need n >= 2 and r >= 1")
    return (2 * r) % _unit_group_exponent(n) != 0


def class_lower_bound_semidirect(n: int, r: int) -> int:
    """Number of sign classes in ``{+-m^r mod n : m a unit}``."""
    if n < 2 or r < 1:
        raise InvalidInputError("need n >= 2 and r >= 1")
    values = {pow(m, r, n) for m in _units(n)}
    values |= {(-v) % n for v in values}
    return len({min(v, (-v) % n) for v in values})


def _check_params(params):
    params = [(int(n), int(r)) for n, r in params]
    if not params:
        raise InvalidInputError("at least one (n, r) pair is required")
    if params[0][0] < 2:
        raise InvalidInputError("n_1 must be >= 2")
    for (a, _), (b, _) in zip(params, params[1:]):
        if b % a:
            raise InvalidInputError(f"moduli must form a divisibility chain ({a} does not divide {b})")
    if any(r < 1 for _, r in params):
        raise InvalidInputError("exponents r_i must be >= 1")
    return params


def is_product_witness(params: Sequence, ms: Sequence[int]) -> bool:
    params = _check_params(params)
    if len(ms) != len(params):
        raise InvalidInputError("need one m per (n, r) pair")
    n1 = params[0][0]
    if any(gcd(m, n) != 1 for m, (n, _) in zip(ms, params)):
        return False
    prod = 1
    for m, (_, r) in zip(ms, params):
        prod = prod * pow(m, r, n1) % n1
    return prod not in (1, n1 - 1)


def _lift_unit(u: int, n1: int, n: int) -> int:
    m = u
    while gcd(m, n) != 1:
        m += n1
    return m


def product_counterexample(params: Sequence, torus_rank: int = 0) -> Optional[tuple]:
    """Exponents ``(m_1, ..., m_s)`` with ``m_i`` prime to ``n_i`` and
    ``prod m_i^{r_i} != +-1 (mod n_1)``, or None.

    Searches unit tuples mod ``n_1`` and lifts each to a unit mod ``n_i``.
    The torus rank only changes the dimension of the representations.
    """
    params = _check_params(params)
    if torus_rank < 0:
        raise InvalidInputError("torus rank must be nonnegative")
    n1 = params[0][0]
    for us in itertools.product(_units(n1), repeat=len(params)):
        ms = tuple(_lift_unit(u, n1, n) for u, (n, _) in zip(us, params))
        if is_product_witness(params, ms):
            return ms
    return None


E8_TORUS = FinGenAbGroup((5, 5, 5))


def e8_classes() -> tuple:
    """Top-degree wedge classes for the nontoral (Z/5)^3 in E8: {+-1} and {+-2}."""
    return tuple(invariant_i(rep) for rep in count_classes(E8_TORUS, 3).representatives)


def e8_class_count() -> int:
    return count_classes(E8_TORUS, 3).count
