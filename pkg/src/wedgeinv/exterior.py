"""Exterior powers of finitely generated abelian groups.

For ``A = Z/n_1 x ... x Z/n_r`` in canonical form,

    /\\^d(A) = sum over d-subsets S = (i_1 < ... < i_d) of Z/n_{i_1},

because the tensor product of cyclic factors is cyclic of order the gcd,
and the gcd of a chain is its first entry.  The wedge of a d-tuple has the
d x d minors of its coordinate matrix as components.  A top-degree wedge
(d = r) is a single residue mod n_1.
"""

from __future__ import annotations

import itertools
from math import gcd
from dataclasses import dataclass
from typing import Optional, Sequence

from .abelian import FinGenAbGroup, GroupElement, canonicalize, is_generating
from .errors import ConsistencyError, InvalidInputError, NotEquivalentError
from .exactla import IntMatrix, det, solve_left

__all__ = [
    "WedgePower",
    "WedgeElement",
    "WedgeClass",
    "ElementaryOp",
    "wedge_power",
    "wedge",
    "class_of",
    "is_generator",
    "apply_elem_op",
    "replay",
    "synthesize_elem_ops",
    "glz_witness",
    "elementary_matrix",
    "push_forward",
]


@dataclass(frozen=True)
class WedgePower:
    base: FinGenAbGroup
    degree: int

    def __post_init__(self):
        if self.degree < 0:
            raise InvalidInputError("degree must be nonnegative")

    @property
    def subsets(self) -> tuple:
        return tuple(itertools.combinations(range(self.base.rank), self.degree))

    @property
    def moduli(self) -> tuple:
        # the empty subset (degree 0) is /\^0 = Z
        return tuple(self.base.factors[s[0]] if s else 0 for s in self.subsets)

    @property
    def components(self) -> tuple:
        return tuple(zip(self.subsets, self.moduli))

    def is_zero_group(self) -> bool:
        return not self.subsets

    def element(self, coords: Sequence[int]) -> "WedgeElement":
        return WedgeElement(self, tuple(coords))

    def zero(self) -> "WedgeElement":
        return self.element((0,) * len(self.subsets))


def wedge_power(a: FinGenAbGroup, d: int) -> WedgePower:
    return WedgePower(a, d)


@dataclass(frozen=True)
class WedgeElement:
    power: WedgePower
    coords: tuple

    def __post_init__(self):
        moduli = self.power.moduli
        if len(self.coords) != len(moduli):
            raise InvalidInputError(f"expected {len(moduli)} wedge components, got {len(self.coords)}")
        object.__setattr__(
            self, "coords", tuple(c % m if m else int(c) for c, m in zip(self.coords, moduli))
        )

    def _check(self, other):
        if not isinstance(other, WedgeElement) or other.power != self.power:
            raise InvalidInputError("wedge elements live in different exterior powers")

    def __add__(self, other):
        self._check(other)
        return WedgeElement(self.power, tuple(a + b for a, b in zip(self.coords, other.coords)))

    def __sub__(self, other):
        self._check(other)
        return WedgeElement(self.power, tuple(a - b for a, b in zip(self.coords, other.coords)))

    def __neg__(self):
        return WedgeElement(self.power, tuple(-a for a in self.coords))

    def __mul__(self, k: int):
        return WedgeElement(self.power, tuple(k * a for a in self.coords))

    __rmul__ = __mul__

    def is_zero(self) -> bool:
        return not any(self.coords)

    def to_json(self) -> dict:
        return {
            "degree": self.power.degree,
            "components": [
                {"subset": [i + 1 for i in s], "modulus": m, "coord": c}
                for (s, m), c in zip(self.power.components, self.coords)
            ],
        }


@dataclass(frozen=True)
class WedgeClass:
    """A wedge element up to sign; ``rep`` is the lexicographically smaller of w, -w."""

    rep: WedgeElement

    def contains(self, w: WedgeElement) -> bool:
        return class_of(w) == self

    def to_json(self) -> dict:
        out = self.rep.to_json()
        out["negated"] = (-self.rep).to_json()["components"]
        return out


def _coordinate_matrix(elements: Sequence[GroupElement]) -> list:
    return [list(e.coords) for e in elements]


def wedge(elements: Sequence[GroupElement], group: Optional[FinGenAbGroup] = None) -> WedgeElement:
    """``a_1 /\\ ... /\\ a_d``: minors of the coordinate matrix on each column subset."""
    elements = list(elements)
    if group is None:
        if not elements:
            raise InvalidInputError("group must be given for an empty tuple")
        group = elements[0].group
    for e in elements:
        if e.group.factors != group.factors:
            raise InvalidInputError("all elements must lie in the same group")
    power = WedgePower(group, len(elements))
    rows = _coordinate_matrix(elements)
    coords = []
    for s in power.subsets:
        minor = IntMatrix.from_rows([[row[j] for j in s] for row in rows], len(s))
        coords.append(det(minor))
    return WedgeElement(power, tuple(coords))


def class_of(w: WedgeElement) -> WedgeClass:
    neg = -w
    return WedgeClass(min(w, neg, key=lambda x: x.coords))


def is_generator(w: WedgeElement) -> bool:
    """True iff ``w`` alone generates its exterior power."""
    moduli = w.power.moduli
    if len(moduli) == 1:
        return gcd(w.coords[0], moduli[0]) == 1
    # w generates iff Z^k / <w, moduli relations> is trivial
    k = len(moduli)
    rows = [list(w.coords)] + [[m if i == j else 0 for j in range(k)] for i, m in enumerate(moduli) if m]
    return canonicalize(IntMatrix.from_rows(rows, k)).rank == 0


@dataclass(frozen=True)
class ElementaryOp:
    """``a_i <- a_i + m * a_j`` with ``i != j`` (0-based indices)."""

    i: int
    j: int
    m: int

    def __post_init__(self):
        if self.i == self.j:
            raise InvalidInputError("elementary operation needs i != j")
        if self.i < 0 or self.j < 0:
            raise InvalidInputError("indices must be nonnegative")

    def inverse(self) -> "ElementaryOp":
        return ElementaryOp(self.i, self.j, -self.m)

    def to_json(self) -> dict:
        return {"i": self.i + 1, "j": self.j + 1, "m": self.m}

    @classmethod
    def from_json(cls, obj) -> "ElementaryOp":
        return cls(int(obj["i"]) - 1, int(obj["j"]) - 1, int(obj["m"]))


def apply_elem_op(elements: Sequence[GroupElement], op: ElementaryOp) -> tuple:
    elements = tuple(elements)
    if max(op.i, op.j) >= len(elements):
        raise InvalidInputError(f"operation {op} out of range for a {len(elements)}-tuple")
    out = list(elements)
    out[op.i] = elements[op.i] + op.m * elements[op.j]
    return tuple(out)


def replay(ops: Sequence[ElementaryOp], elements: Sequence[GroupElement]) -> tuple:
    out = tuple(elements)
    for op in ops:
        out = apply_elem_op(out, op)
    return out


def _normalize(elements: Sequence[GroupElement]) -> tuple:
    """Elementary operations taking a generating tuple to a normal form.

    The normal form depends only on the group and the wedge of the tuple.
    Euclid on the last column leaves (0, ..., 0, 1)^T, the last row is then
    cleared using the other rows, and the procedure recurses on the first
    d - 1 rows and r - 1 columns.
    """
    group = elements[0].group
    ns = list(group.factors)
    rows = _coordinate_matrix(elements)
    ops: list = []

    def add(i, j, m, active_cols):
        # row_i += m * row_j, reduced on the active columns
        if m == 0:
            return
        ops.append(ElementaryOp(i, j, m))
        rows[i] = [x + m * y for x, y in zip(rows[i], rows[j])]
        for c in range(len(ns)):
            if c < active_cols - 1 and ns[c]:
                rows[i][c] %= ns[c]

    d, r = len(rows), len(ns)
    while r > 0 and d > 1:
        col = r - 1
        n = ns[col]
        if n:
            for k in range(d):
                rows[k][col] %= n
        # Euclid on integer representatives of the last column
        retried = False
        while True:
            while True:
                nz = [k for k in range(d) if rows[k][col]]
                if len(nz) <= 1:
                    break
                p = min(nz, key=lambda k: (abs(rows[k][col]), k))
                for k in nz:
                    if k != p:
                        add(k, p, -(rows[k][col] // rows[p][col]), r)
            if not nz:
                raise InvalidInputError("tuple does not generate the group")
            p = nz[0]
            g = rows[p][col]
            if n == 0 or g % n == 1 or retried:
                break
            # g is a unit mod n: represent some zero entry by n and rerun
            q = next(k for k in range(d) if k != p)
            rows[q][col] = n
            retried = True
        if n:
            g %= n
            rows[p][col] = g
            for k in range(d):
                rows[k][col] %= n
        if (n and g != 1) or (not n and g not in (1, -1)):
            raise InvalidInputError("tuple does not generate the group")
        last = d - 1
        if p != last:
            add(last, p, g, r)
            add(p, last, -g, r)
        elif g == -1:
            q = 0
            add(q, last, -1, r)
            add(last, q, 2, r)
            add(q, last, -1, r)
        if n:
            rows[last][col] %= n
        if rows[last][col] != 1 or any(rows[k][col] % n if n else rows[k][col] for k in range(last)):
            raise ConsistencyError("Euclid step did not isolate a unit in the last row")
        # clear the last row with the remaining rows, which generate the quotient
        if r > 1:
            sub = [rows[k][: r - 1] for k in range(last)]
            sub += [[ns[c] if c == i else 0 for c in range(r - 1)] for i in range(r - 1) if ns[i]]
            coeffs = solve_left(IntMatrix.from_rows(sub, r - 1), rows[last][: r - 1])
            if coeffs is None:
                raise InvalidInputError("tuple does not generate the group")
            for k in range(last):
                add(last, k, -coeffs[k], r)
            if any((x % ns[c] if ns[c] else x) for c, x in enumerate(rows[last][: r - 1])):
                raise ConsistencyError("failed to clear the last row")
        d -= 1
        r -= 1
    return ops


def _check_pair(a, b):
    a, b = tuple(a), tuple(b)
    if len(a) != len(b):
        raise InvalidInputError("tuples must have the same length")
    if not a:
        raise InvalidInputError("tuples must be nonempty")
    group = a[0].group
    for x in a + b:
        if x.group.factors != group.factors:
            raise InvalidInputError("all elements must lie in the same group")
    for name, t in (("first", a), ("second", b)):
        if not is_generating(t, group):
            raise InvalidInputError(f"{name} tuple does not generate the group")
    return a, b


def _merge(ops: list) -> list:
    # consecutive ops on the same (i, j) compose by adding multipliers
    out: list = []
    for op in ops:
        if out and (out[-1].i, out[-1].j) == (op.i, op.j):
            m = out.pop().m + op.m
            if m:
                out.append(ElementaryOp(op.i, op.j, m))
        else:
            out.append(op)
    return out


def synthesize_elem_ops(a: Sequence[GroupElement], b: Sequence[GroupElement]) -> list:
    """Elementary operations carrying ``a`` to ``b`` exactly.

    Requires both tuples to generate the same group and to have the same
    wedge (not merely up to sign).
    """
    a, b = _check_pair(a, b)
    wa, wb = wedge(a), wedge(b)
    if wa != wb:
        raise NotEquivalentError(f"wedges differ: {wa.coords} != {wb.coords}")
    ops_a = _normalize(a)
    ops_b = _normalize(b)
    if replay(ops_a, a) != replay(ops_b, b):
        raise ConsistencyError("normal forms of equal-wedge tuples differ")
    ops = _merge(ops_a + [op.inverse() for op in reversed(ops_b)])
    if replay(ops, a) != b:
        raise ConsistencyError("synthesized operations do not replay to the target")
    return ops


def elementary_matrix(op: ElementaryOp, d: int) -> IntMatrix:
    out = [[int(i == j) for j in range(d)] for i in range(d)]
    out[op.i][op.j] += op.m
    return IntMatrix.from_rows(out, d)


def glz_witness(a: Sequence[GroupElement], b: Sequence[GroupElement]) -> IntMatrix:
    """Unimodular ``N`` with ``b_i = sum_j N[i, j] a_j``.

    Exists iff the wedges agree up to sign; a sign difference is absorbed
    by negating ``a_1`` first.
    """
    a, b = _check_pair(a, b)
    d = len(a)
    wa, wb = wedge(a), wedge(b)
    start = IntMatrix.identity(d)
    if wa != wb:
        if wa != -wb:
            raise NotEquivalentError(
                f"wedge classes differ: {class_of(wa).rep.coords} != {class_of(wb).rep.coords}"
            )
        start = IntMatrix.diag([-1] + [1] * (d - 1))
        a = (-a[0],) + a[1:]
    n = start
    for op in synthesize_elem_ops(a, b):
        n = elementary_matrix(op, d) @ n
    return n


def push_forward(w: WedgeElement, matrix: IntMatrix) -> WedgeElement:
    """Image of ``w`` under the map induced by a homomorphism with the given
    matrix (images of generators as columns): entries of the d-th compound."""
    power = w.power
    subsets = power.subsets
    coords = []
    for s in subsets:
        total = 0
        for t, c in zip(subsets, w.coords):
            if c:
                minor = IntMatrix.from_rows([[matrix[i, j] for j in t] for i in s], len(t))
                total += det(minor) * c
        coords.append(total)
    return WedgeElement(power, tuple(coords))
