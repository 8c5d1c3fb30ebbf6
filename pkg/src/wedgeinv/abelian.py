"""Finitely generated abelian groups in invariant-factor form.

A group is a chain of factors ``(n_1, ..., n_r)`` with each ``n_i`` either
0 (a copy of Z, or a torus factor when the group is read as a character
lattice) or at least 2, and ``n_i | n_{i+1}`` under the convention that
every integer divides 0.  Finite factors therefore come first and zeros
last.  Elements are coordinate vectors on the canonical generators, always
stored reduced.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from math import lcm
from typing import Iterable, Iterator, Optional, Sequence

from .errors import InvalidInputError
from .exactla import IntMatrix, det, snf

__all__ = [
    "FinGenAbGroup",
    "GroupElement",
    "Character",
    "QmodZ",
    "GroupAutomorphism",
    "canonicalize",
    "dual",
    "pair",
    "is_generating",
    "apply_automorphism",
    "dual_automorphism",
]


def _divides(a: int, b: int) -> bool:
    if a == 0:
        return b == 0
    return b % a == 0


@dataclass(frozen=True)
class FinGenAbGroup:
    factors: tuple

    def __post_init__(self):
        factors = tuple(int(n) for n in self.factors)
        for n in factors:
            if n < 0 or n == 1:
                raise InvalidInputError(f"invalid invariant factor {n}; need 0 or >= 2")
        for a, b in zip(factors, factors[1:]):
            if not _divides(a, b):
                raise InvalidInputError(f"factors {factors} do not form a divisibility chain")
        object.__setattr__(self, "factors", factors)

    @property
    def rank(self) -> int:
        return len(self.factors)

    @property
    def is_finite(self) -> bool:
        return 0 not in self.factors

    @property
    def order(self) -> Optional[int]:
        if not self.is_finite:
            return None
        out = 1
        for n in self.factors:
            out *= n
        return out

    @property
    def exponent(self) -> int:
        """Least common multiple of the factors (0 when infinite, 1 when trivial)."""
        if not self.is_finite:
            return 0
        return reduce(lcm, self.factors, 1)

    def element(self, coords: Sequence[int]) -> "GroupElement":
        return GroupElement(self, tuple(coords))

    def character(self, coords: Sequence[int]) -> "Character":
        return Character(self, tuple(coords))

    def zero(self) -> "GroupElement":
        return self.element((0,) * self.rank)

    def basis(self) -> list:
        return [self.element(tuple(int(i == j) for j in range(self.rank))) for i in range(self.rank)]

    def elements(self) -> Iterator["GroupElement"]:
        if not self.is_finite:
            raise InvalidInputError("cannot enumerate an infinite group")
        for coords in itertools.product(*(range(n) for n in self.factors)):
            yield GroupElement(self, coords)

    def reduce(self, coords: Sequence[int]) -> tuple:
        if len(coords) != self.rank:
            raise InvalidInputError(f"expected {self.rank} coordinates, got {len(coords)}")
        return tuple(c % n if n else int(c) for c, n in zip(coords, self.factors))

    def to_json(self) -> dict:
        return {"factors": list(self.factors)}

    @classmethod
    def from_json(cls, obj) -> "FinGenAbGroup":
        if isinstance(obj, (list, tuple)):
            return cls(tuple(obj))
        try:
            return cls(tuple(obj["factors"]))
        except (KeyError, TypeError) as exc:
            raise InvalidInputError(f"malformed group {obj!r}") from exc

    def __str__(self):
        if not self.factors:
            return "0"
        return " x ".join("Z" if n == 0 else f"Z/{n}" for n in self.factors)


@dataclass(frozen=True)
class GroupElement:
    group: FinGenAbGroup
    coords: tuple

    def __post_init__(self):
        object.__setattr__(self, "coords", self.group.reduce(tuple(self.coords)))

    def _check(self, other: "GroupElement"):
        if not isinstance(other, GroupElement) or other.group != self.group:
            raise InvalidInputError("elements belong to different groups")

    def __add__(self, other):
        self._check(other)
        return type(self)(self.group, tuple(a + b for a, b in zip(self.coords, other.coords)))

    def __sub__(self, other):
        self._check(other)
        return type(self)(self.group, tuple(a - b for a, b in zip(self.coords, other.coords)))

    def __neg__(self):
        return type(self)(self.group, tuple(-a for a in self.coords))

    def __mul__(self, k: int):
        return type(self)(self.group, tuple(k * a for a in self.coords))

    __rmul__ = __mul__

    def is_zero(self) -> bool:
        return not any(self.coords)

    def to_json(self) -> dict:
        return {"coords": list(self.coords)}


class Character(GroupElement):
    """An element of the dual group; same coordinates, paired via :func:`pair`."""


@dataclass(frozen=True, order=True)
class QmodZ:
    """A value in Q/Z, stored as ``numerator/denominator`` with ``0 <= numerator < denominator``."""

    numerator: int
    denominator: int = 1

    def __post_init__(self):
        if self.denominator <= 0:
            raise InvalidInputError("denominator must be positive")
        f = Fraction(self.numerator, self.denominator)
        f -= f.numerator // f.denominator
        object.__setattr__(self, "numerator", f.numerator)
        object.__setattr__(self, "denominator", f.denominator)

    @classmethod
    def of(cls, x) -> "QmodZ":
        if isinstance(x, QmodZ):
            return x
        f = Fraction(x)
        return cls(f.numerator, f.denominator)

    def as_fraction(self) -> Fraction:
        return Fraction(self.numerator, self.denominator)

    def __add__(self, other):
        return QmodZ.of(self.as_fraction() + QmodZ.of(other).as_fraction())

    def __sub__(self, other):
        return QmodZ.of(self.as_fraction() - QmodZ.of(other).as_fraction())

    def __neg__(self):
        return QmodZ.of(-self.as_fraction())

    def __mul__(self, k: int):
        return QmodZ.of(k * self.as_fraction())

    __rmul__ = __mul__

    def is_zero(self) -> bool:
        return self.numerator == 0

    def __str__(self):
        return f"{self.numerator}/{self.denominator}"


def canonicalize(relations: IntMatrix) -> FinGenAbGroup:
    """Invariant factors of the cokernel of ``relations`` (rows are relations).

    Unit invariants are dropped; generators beyond the rank of the relation
    matrix contribute free factors.
    """
    s = snf(relations).s
    diag = list(s.diagonal()) + [0] * (relations.cols - min(relations.rows, relations.cols))
    return FinGenAbGroup(tuple(d for d in diag if d != 1))


def dual(g: FinGenAbGroup) -> FinGenAbGroup:
    """Character group, with the same factors (finite parts self-dual, Z <-> torus)."""
    return FinGenAbGroup(g.factors)


def pair(chi: GroupElement, a: GroupElement) -> QmodZ:
    """Evaluate a character on an element: ``sum c_i a_i / n_i`` in Q/Z.

    A free coordinate contributes 0 when one side is zero there; a free
    coordinate that is nonzero on both sides has no Q/Z value and raises.
    """
    if chi.group.factors != a.group.factors:
        raise InvalidInputError("character and element live on incompatible groups")
    total = Fraction(0)
    for c, x, n in zip(chi.coords, a.coords, a.group.factors):
        if n == 0:
            if c and x:
                raise InvalidInputError("pairing two free coordinates is not defined in Q/Z")
            continue
        total += Fraction(c * x, n)
    return QmodZ.of(total)


def _presentation(vectors: Sequence[Sequence[int]], g: FinGenAbGroup) -> IntMatrix:
    rows = [list(v) for v in vectors]
    rows += [[n if i == j else 0 for j in range(g.rank)] for i, n in enumerate(g.factors) if n]
    return IntMatrix.from_rows(rows, g.rank)


def is_generating(elements: Iterable[GroupElement], g: FinGenAbGroup) -> bool:
    """True iff the elements generate ``g`` (cokernel of coords stacked on relations is trivial)."""
    elements = list(elements)
    for e in elements:
        if e.group.factors != g.factors:
            raise InvalidInputError("element does not belong to the group")
    if len(elements) < g.rank:
        return False
    return canonicalize(_presentation([e.coords for e in elements], g)).rank == 0


@dataclass(frozen=True)
class GroupAutomorphism:
    """Automorphism given by an r x r matrix acting on coordinate columns.

    The image of generator ``j`` is column ``j``; so ``a -> matrix @ a``.
    """

    group: FinGenAbGroup
    matrix: IntMatrix

    def __post_init__(self):
        r = self.group.rank
        m = self.matrix
        if (m.rows, m.cols) != (r, r):
            raise InvalidInputError(f"automorphism matrix must be {r}x{r}")
        ns = self.group.factors
        for j, nj in enumerate(ns):
            for i, ni in enumerate(ns):
                # n_j * e_j = 0 must map to 0
                if ni and (nj * m[i, j]) % ni:
                    raise InvalidInputError("matrix does not define a homomorphism of the group")
                if ni == 0 and nj and m[i, j]:
                    raise InvalidInputError("torsion cannot map into a free factor")
        cols = [self.group.element(m.column(j)) for j in range(r)]
        if not is_generating(cols, self.group):
            raise InvalidInputError("matrix is not surjective on the group")
        if not self.group.is_finite:
            # surjective endomorphisms of the free part must be invertible over Z
            free = [i for i, n in enumerate(ns) if n == 0]
            sub = IntMatrix.from_rows([[m[i, j] for j in free] for i in free], len(free))
            if abs(det(sub)) != 1:
                raise InvalidInputError("matrix is not invertible on the free part")

    def __call__(self, a: GroupElement) -> GroupElement:
        return apply_automorphism(self, a)


def apply_automorphism(phi: GroupAutomorphism, a: GroupElement) -> GroupElement:
    if a.group.factors != phi.group.factors:
        raise InvalidInputError("element is not in the automorphism's group")
    m = phi.matrix
    coords = tuple(sum(m[i, j] * a.coords[j] for j in range(m.cols)) for i in range(m.rows))
    return type(a)(a.group, coords)


def dual_automorphism(phi: GroupAutomorphism) -> GroupAutomorphism:
    """The pullback ``chi -> chi o phi`` on the character group, as a matrix.

    Coordinate ``j`` of the pullback is ``n_j * sum_i c_i m_ij / n_i`` on
    finite factors; on free factors the pairing is the plain dot product.
    """
    g = phi.group
    ns = g.factors
    m = phi.matrix
    r = g.rank
    out = [[0] * r for _ in range(r)]
    for j in range(r):
        for i in range(r):
            if ns[i] == 0 and ns[j] == 0:
                out[j][i] = m[i, j]
            elif ns[i] and ns[j]:
                out[j][i] = Fraction(ns[j] * m[i, j], ns[i])
                if out[j][i].denominator != 1:
                    raise InvalidInputError("automorphism does not dualize over the integers")
                out[j][i] = int(out[j][i])
            elif m[i, j]:
                raise InvalidInputError("cannot dualize an automorphism mixing free and torsion factors")
    return GroupAutomorphism(dual(g), IntMatrix.from_rows(out, r))
