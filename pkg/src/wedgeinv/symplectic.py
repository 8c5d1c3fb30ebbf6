"""Q/Z-valued bilinear forms on finite abelian groups.

The standard model is ``A0 + A0*`` with generators ordered
``e_1, f_1, ..., e_r, f_r`` and Gram matrix J, the block diagonal of
``[[0, 1/n_i], [-1/n_i, 0]]``.  So ``omega(e_i, f_i) = 1/n_i``.

An automorphism of the total group is given by an integer matrix ``C``
whose row ``i`` holds the coordinates of the image of generator ``i``.
It preserves the form iff ``C J C^T - J`` is integral.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction


from .abelian import FinGenAbGroup, GroupElement, QmodZ, is_generating
from .errors import InvalidInputError
from .exactla import IntMatrix, RatMatrix, det, standard_skew_form

__all__ = [
    "BilinearForm",
    "SymplecticSpace",
    "eval_form",
    "is_alternating",
    "is_nondegenerate",
    "is_symplectic",
    "preserves_form",
    "det_mod_n1",
    "enumerate_form_automorphisms",
]


@dataclass(frozen=True)
class BilinearForm:
    group: FinGenAbGroup
    gram: tuple  # r x r tuple of tuples of QmodZ

    def __post_init__(self):
        g = self.group
        if not g.is_finite:
            raise InvalidInputError("bilinear forms are only supported on finite groups")
        r = g.rank
        gram = tuple(tuple(QmodZ.of(x) for x in row) for row in self.gram)
        if len(gram) != r or any(len(row) != r for row in gram):
            raise InvalidInputError(f"gram matrix must be {r}x{r}")
        ns = g.factors
        for i in range(r):
            for j in range(r):
                # n_i * omega(e_i, e_j) = 0 and n_j * omega(e_i, e_j) = 0
                if not (ns[i] * gram[i][j]).is_zero() or not (ns[j] * gram[i][j]).is_zero():
                    raise InvalidInputError(f"gram entry ({i}, {j}) is not compatible with the group orders")
        object.__setattr__(self, "gram", gram)

    @classmethod
    def from_rational(cls, group: FinGenAbGroup, m: RatMatrix) -> "BilinearForm":
        return cls(group, tuple(tuple(m.row(i)) for i in range(m.rows)))

    def __call__(self, x: GroupElement, y: GroupElement) -> QmodZ:
        return eval_form(self, x, y)

    def to_json(self) -> dict:
        return {"base": self.group.to_json(), "gram": [[str(x) for x in row] for row in self.gram]}


def eval_form(f: BilinearForm, x: GroupElement, y: GroupElement) -> QmodZ:
    if x.group.factors != f.group.factors or y.group.factors != f.group.factors:
        raise InvalidInputError("elements are not in the form's group")
    total = Fraction(0)
    for i, xi in enumerate(x.coords):
        if xi:
            for j, yj in enumerate(y.coords):
                if yj:
                    total += xi * yj * f.gram[i][j].as_fraction()
    return QmodZ.of(total)


def is_alternating(f: BilinearForm) -> bool:
    r = f.group.rank
    gram_ok = all(f.gram[i][i].is_zero() for i in range(r)) and all(
        (f.gram[i][j] + f.gram[j][i]).is_zero() for i in range(r) for j in range(r)
    )
    if any(n % 2 == 0 for n in f.group.factors):
        # 2-torsion: omega(a, a) = 0 is a pointwise condition, check it everywhere
        return all(eval_form(f, a, a).is_zero() for a in f.group.elements())
    return gram_ok


def is_nondegenerate(f: BilinearForm) -> bool:
    basis = f.group.basis()
    for a in f.group.elements():
        if a.is_zero():
            continue
        if all(eval_form(f, a, b).is_zero() for b in basis):
            return False
    return True


def is_symplectic(f: BilinearForm) -> bool:
    return is_alternating(f) and is_nondegenerate(f)


@dataclass(frozen=True)
class SymplecticSpace:
    """``A0 + A0*`` with the standard form, generators interleaved ``e_1, f_1, ...``."""

    base: FinGenAbGroup

    def __post_init__(self):
        if not self.base.is_finite:
            raise InvalidInputError("the base of a symplectic space must be finite")

    @property
    def degrees(self) -> tuple:
        return self.base.factors

    @property
    def total(self) -> FinGenAbGroup:
        return FinGenAbGroup(tuple(n for n in self.base.factors for _ in range(2)))

    @property
    def gram(self) -> RatMatrix:
        return standard_skew_form(self.base.factors)

    @property
    def form(self) -> BilinearForm:
        return BilinearForm.from_rational(self.total, self.gram)

    def e(self, i: int) -> GroupElement:
        return self.total.basis()[2 * i]

    def f(self, i: int) -> GroupElement:
        return self.total.basis()[2 * i + 1]


def _check_dims(c: IntMatrix, s: SymplecticSpace):
    k = 2 * s.base.rank
    if (c.rows, c.cols) != (k, k):
        raise InvalidInputError(f"expected a {k}x{k} matrix, got {c.rows}x{c.cols}")


def induces_automorphism(c: IntMatrix, s: SymplecticSpace) -> bool:
    """Rows of ``c`` define a well-defined bijective map of the total group."""
    _check_dims(c, s)
    total = s.total
    ns = total.factors
    for i, ni in enumerate(ns):
        for j, nj in enumerate(ns):
            if (ni * c[i, j]) % nj:
                return False
    return is_generating([total.element(c.row(i)) for i in range(c.rows)], total)


def preserves_form(c: IntMatrix, s: SymplecticSpace) -> bool:
    _check_dims(c, s)
    J = s.gram
    if not (c @ J @ c.T - J).is_integral:
        return False
    return induces_automorphism(c, s)


def det_mod_n1(c: IntMatrix, s: SymplecticSpace) -> int:
    """``det(c) mod n1``; equal to 1 for every form-preserving ``c``."""
    if not s.base.factors:
        raise InvalidInputError("empty base group has no n1")
    if not preserves_form(c, s):
        raise InvalidInputError("matrix does not preserve the symplectic form")
    return det(c) % s.base.factors[0]


def enumerate_form_automorphisms(s: SymplecticSpace, bound: int = 4096) -> list:
    """All form-preserving automorphisms of ``s.total`` as reduced matrices.

    Images of the generators are chosen one at a time by backtracking:
    each candidate must have order dividing its generator's and pair with
    the earlier images as the form prescribes.  Non-degeneracy makes every
    such endomorphism injective, hence bijective.  Output is sorted.
    """
    total = s.total
    order = total.order
    if order > bound:
        raise InvalidInputError(f"group of order {order} exceeds the enumeration bound {bound}")
    k = total.rank
    if k == 0:
        return [IntMatrix.identity(0)]
    e = total.exponent
    # integer Gram matrix of e * omega, so pairings are dot products mod e
    G = [[int(x * e) % e for x in s.gram.row(i)] for i in range(k)]
    elements = [x.coords for x in total.elements()]
    target = [[G[i][j] for j in range(k)] for i in range(k)]
    candidates = [[x for x in elements if all((n * c) % m == 0 for c, m in zip(x, total.factors))]
                  for n in total.factors]

    def row_times_gram(y):
        return [sum(y[a] * G[a][b] for a in range(k)) for b in range(k)]

    out = []

    def extend(images, pairs):
        i = len(images)
        if i == k:
            out.append(IntMatrix.from_rows(images, k))
            return
        for x in candidates[i]:
            if all(sum(p * c for p, c in zip(pairs[j], x)) % e == target[j][i] for j in range(i)):
                extend(images + [x], pairs + [row_times_gram(x)])

    extend([], [])
    out.sort(key=lambda m: m.entries)
    return out
