"""Exact integer and rational linear algebra.

Everything here works on Python ints and :class:`fractions.Fraction`, so
there is no overflow and no rounding.  The matrices are small (tens of rows
at most) and the algorithms are the textbook ones: Smith normal form by
repeated row/column Euclid steps, Bareiss determinants, and a skew Gaussian
elimination for Pfaffians.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Sequence

from .errors import InvalidInputError

__all__ = [
    "IntMatrix",
    "RatMatrix",
    "SnfResult",
    "snf",
    "det",
    "is_unimodular",
    "pfaffian",
    "pfaffian_congruence_check",
    "standard_skew_form",
    "solve_left",
]


@dataclass(frozen=True)
class _Matrix:
    rows: int
    cols: int
    entries: tuple

    @classmethod
    def _coerce(cls, x):
        raise NotImplementedError

    def __post_init__(self):
        if self.rows < 0 or self.cols < 0:
            raise InvalidInputError("matrix dimensions must be nonnegative")
        if len(self.entries) != self.rows * self.cols:
            raise InvalidInputError(
                f"expected {self.rows * self.cols} entries, got {len(self.entries)}"
            )
        object.__setattr__(self, "entries", tuple(self._coerce(x) for x in self.entries))

    @classmethod
    def from_rows(cls, rows: Iterable[Sequence], cols: Optional[int] = None):
        rows = [list(r) for r in rows]
        if cols is None:
            if not rows:
                raise InvalidInputError("cols must be given for a matrix with no rows")
            cols = len(rows[0])
        for r in rows:
            if len(r) != cols:
                raise InvalidInputError("ragged matrix rows")
        return cls(len(rows), cols, tuple(x for r in rows for x in r))

    @classmethod
    def zeros(cls, rows: int, cols: int):
        return cls(rows, cols, (0,) * (rows * cols))

    @classmethod
    def identity(cls, n: int):
        return cls(n, n, tuple(1 if i == j else 0 for i in range(n) for j in range(n)))

    @classmethod
    def diag(cls, values: Sequence, rows: Optional[int] = None, cols: Optional[int] = None):
        k = len(values)
        rows = k if rows is None else rows
        cols = k if cols is None else cols
        out = [[0] * cols for _ in range(rows)]
        for i, v in enumerate(values):
            out[i][i] = v
        return cls.from_rows(out, cols)

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i * self.cols + j]

    def row(self, i: int) -> tuple:
        return self.entries[i * self.cols:(i + 1) * self.cols]

    def column(self, j: int) -> tuple:
        return tuple(self.entries[i * self.cols + j] for i in range(self.rows))

    def tolist(self) -> list:
        return [list(self.row(i)) for i in range(self.rows)]

    @property
    def is_square(self) -> bool:
        return self.rows == self.cols

    @property
    def T(self):
        return type(self).from_rows(
            [self.column(j) for j in range(self.cols)], self.rows
        )

    def diagonal(self) -> tuple:
        return tuple(self[i, i] for i in range(min(self.rows, self.cols)))

    def __matmul__(self, other):
        if not isinstance(other, _Matrix):
            return NotImplemented
        if self.cols != other.rows:
            raise InvalidInputError(
                f"shape mismatch: {self.rows}x{self.cols} @ {other.rows}x{other.cols}"
            )
        kind = RatMatrix if RatMatrix in (type(self), type(other)) else IntMatrix
        cols = [other.column(j) for j in range(other.cols)]
        out = [
            [sum(a * b for a, b in zip(self.row(i), c)) for c in cols]
            for i in range(self.rows)
        ]
        return kind.from_rows(out, other.cols)

    def __add__(self, other):
        return self._zip(other, lambda a, b: a + b)

    def __sub__(self, other):
        return self._zip(other, lambda a, b: a - b)

    def __neg__(self):
        return type(self)(self.rows, self.cols, tuple(-x for x in self.entries))

    def _zip(self, other, op):
        if not isinstance(other, _Matrix):
            return NotImplemented
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise InvalidInputError("shape mismatch")
        kind = RatMatrix if RatMatrix in (type(self), type(other)) else IntMatrix
        return kind(self.rows, self.cols, tuple(op(a, b) for a, b in zip(self.entries, other.entries)))

    def __repr__(self):
        return f"{type(self).__name__}({self.tolist()!r})"


class IntMatrix(_Matrix):
    """Exact integer matrix, stored row-major."""

    @classmethod
    def _coerce(cls, x):
        if isinstance(x, bool) or not isinstance(x, int):
            if isinstance(x, Fraction) and x.denominator == 1:
                return int(x)
            raise InvalidInputError(f"non-integer entry {x!r}")
        return x


class RatMatrix(_Matrix):
    """Exact rational matrix; entries are reduced Fractions."""

    @classmethod
    def _coerce(cls, x):
        if isinstance(x, str):
            return Fraction(x)
        if isinstance(x, (int, Fraction)) and not isinstance(x, bool):
            return Fraction(x)
        raise InvalidInputError(f"non-rational entry {x!r}")

    @property
    def is_integral(self) -> bool:
        return all(x.denominator == 1 for x in self.entries)

    def to_int(self) -> IntMatrix:
        if not self.is_integral:
            raise InvalidInputError("matrix has non-integral entries")
        return IntMatrix(self.rows, self.cols, tuple(int(x) for x in self.entries))


@dataclass(frozen=True)
class SnfResult:
    """``u @ m @ v == s`` with ``u``, ``v`` unimodular and ``s`` in Smith form."""

    s: IntMatrix
    u: IntMatrix
    v: IntMatrix

    @property
    def invariants(self) -> tuple:
        return self.s.diagonal()


def snf(m: IntMatrix) -> SnfResult:
    """Smith normal form with transforms.

    The diagonal is nonnegative and every entry divides the next, where
    ``d | 0`` for all ``d``; so zeros come last.
    """
    R, C = m.rows, m.cols
    a = m.tolist()
    u = IntMatrix.identity(R).tolist()
    v = IntMatrix.identity(C).tolist()

    def swap_rows(i, j):
        a[i], a[j] = a[j], a[i]
        u[i], u[j] = u[j], u[i]

    def swap_cols(i, j):
        for row in a:
            row[i], row[j] = row[j], row[i]
        for row in v:
            row[i], row[j] = row[j], row[i]

    def add_row(dst, src, q):
        # row_dst += q * row_src
        a[dst] = [x + q * y for x, y in zip(a[dst], a[src])]
        u[dst] = [x + q * y for x, y in zip(u[dst], u[src])]

    def add_col(dst, src, q):
        for row in a:
            row[dst] += q * row[src]
        for row in v:
            row[dst] += q * row[src]

    for t in range(min(R, C)):
        best = None
        for i in range(t, R):
            for j in range(t, C):
                if a[i][j] and (best is None or abs(a[i][j]) < abs(a[best[0]][best[1]])):
                    best = (i, j)
        if best is None:
            break
        swap_rows(t, best[0])
        swap_cols(t, best[1])
        while True:
            p = a[t][t]
            for i in range(t + 1, R):
                if a[i][t]:
                    add_row(i, t, -(a[i][t] // p))
            for j in range(t + 1, C):
                if a[t][j]:
                    add_col(j, t, -(a[t][j] // p))
            # a smaller remainder in the pivot row/column becomes the new pivot
            cand = [(abs(a[i][t]), 0, i) for i in range(t + 1, R) if a[i][t]]
            cand += [(abs(a[t][j]), 1, j) for j in range(t + 1, C) if a[t][j]]
            if cand:
                _, kind, k = min(cand)
                if kind == 0:
                    swap_rows(t, k)
                else:
                    swap_cols(t, k)
                continue
            bad = next(
                (i for i in range(t + 1, R) for j in range(t + 1, C) if a[i][j] % p),
                None,
            )
            if bad is None:
                break
            add_row(t, bad, 1)
        if a[t][t] < 0:
            a[t] = [-x for x in a[t]]
            u[t] = [-x for x in u[t]]

    return SnfResult(
        IntMatrix.from_rows(a, C), IntMatrix.from_rows(u, R), IntMatrix.from_rows(v, C)
    )


def _require_square(m: _Matrix):
    if not m.is_square:
        raise InvalidInputError(f"matrix is {m.rows}x{m.cols}, not square")


def det(m: _Matrix):
    """Exact determinant (Bareiss for integers, elimination for rationals)."""
    _require_square(m)
    n = m.rows
    if n == 0:
        return 1
    if isinstance(m, RatMatrix):
        return _det_fraction(m.tolist())
    a = m.tolist()
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if a[i][k]), None)
            if swap is None:
                return 0
            a[k], a[swap] = a[swap], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def _det_fraction(a) -> Fraction:
    n = len(a)
    a = [[Fraction(x) for x in row] for row in a]
    out = Fraction(1)
    for k in range(n):
        piv = next((i for i in range(k, n) if a[i][k]), None)
        if piv is None:
            return Fraction(0)
        if piv != k:
            a[k], a[piv] = a[piv], a[k]
            out = -out
        out *= a[k][k]
        for i in range(k + 1, n):
            if a[i][k]:
                f = a[i][k] / a[k][k]
                a[i] = [x - f * y for x, y in zip(a[i], a[k])]
    return out


def is_unimodular(m: IntMatrix) -> bool:
    return abs(det(m)) == 1


def pfaffian(m: _Matrix) -> Fraction:
    """Pfaffian of a skew-symmetric matrix, normalized so Pf([[0, a], [-a, 0]]) = a.

    Skew Gaussian elimination: each step splits off a 2x2 block with a
    congruence of determinant +-1 and multiplies the block's entry in.
    """
    _require_square(m)
    n = m.rows
    if n % 2:
        raise InvalidInputError("Pfaffian needs an even-dimensional matrix")
    a = [[Fraction(x) for x in row] for row in m.tolist()]
    for i in range(n):
        for j in range(i, n):
            if a[i][j] != -a[j][i]:
                raise InvalidInputError("matrix is not skew-symmetric")

    def swap(i, j):
        a[i], a[j] = a[j], a[i]
        for row in a:
            row[i], row[j] = row[j], row[i]

    def congruence(dst, src, f):
        # row_dst -= f * row_src, then the same on columns
        a[dst] = [x - f * y for x, y in zip(a[dst], a[src])]
        for row in a:
            row[dst] -= f * row[src]

    out = Fraction(1)
    for k in range(0, n, 2):
        p = next((j for j in range(k + 1, n) if a[k][j]), None)
        if p is None:
            return Fraction(0)
        if p != k + 1:
            swap(k + 1, p)
            out = -out
        piv = a[k][k + 1]
        out *= piv
        for i in range(k + 2, n):
            if a[k][i]:
                congruence(i, k + 1, a[k][i] / piv)
            if a[k + 1][i]:
                congruence(i, k, -a[k + 1][i] / piv)
    return out


def standard_skew_form(degrees: Sequence[int]) -> RatMatrix:
    """Block-diagonal matrix with blocks [[0, 1/n], [-1/n, 0]], one per degree."""
    r = len(degrees)
    out = [[Fraction(0)] * (2 * r) for _ in range(2 * r)]
    for i, n in enumerate(degrees):
        out[2 * i][2 * i + 1] = Fraction(1, n)
        out[2 * i + 1][2 * i] = Fraction(-1, n)
    return RatMatrix.from_rows(out, 2 * r)


def _check_degree_chain(degrees: Sequence[int]):
    if not degrees:
        raise InvalidInputError("at least one degree is required")
    if degrees[0] < 2:
        raise InvalidInputError("first degree must be >= 2")
    for a, b in zip(degrees, degrees[1:]):
        if b % a:
            raise InvalidInputError(f"degrees must form a divisibility chain ({a} does not divide {b})")


def pfaffian_congruence_check(c: IntMatrix, degrees: Sequence[int]) -> int:
    """Residue of det(c) mod n1, computed only through Pfaffians.

    With J the standard skew form for ``degrees`` and ``c J c^T = J + N``
    for an integral skew N, we have Pf(c J c^T) = det(c) Pf(J).  The
    quotient is reduced mod n1; for form-preserving ``c`` it is always 1.
    Never calls :func:`det`.
    """
    degrees = list(degrees)
    _check_degree_chain(degrees)
    r = len(degrees)
    if (c.rows, c.cols) != (2 * r, 2 * r):
        raise InvalidInputError(f"expected a {2 * r}x{2 * r} matrix")
    J = standard_skew_form(degrees)
    M = c @ J @ c.T
    N = M - J
    if not N.is_integral:
        raise InvalidInputError("c J c^T - J is not integral; c does not preserve the form")
    pf_j = pfaffian(J)
    pf_m = pfaffian(M)
    ratio = pf_m / pf_j
    if ratio.denominator != 1:
        raise InvalidInputError("Pfaffian ratio is not an integer")
    # the correction Pf(J + N) - Pf(J) must have denominator dividing n2...nr
    tail = 1
    for n in degrees[1:]:
        tail *= n
    z = (pf_m - pf_j) * tail
    if z.denominator != 1:
        raise InvalidInputError("Pfaffian correction term is not in (1/(n2...nr))Z")
    return int(ratio) % degrees[0]


def solve_left(m: IntMatrix, rhs: Sequence[int]) -> Optional[tuple]:
    """Integer row vector ``y`` with ``y @ m == rhs``, or None if none exists."""
    rhs = list(rhs)
    if len(rhs) != m.cols:
        raise InvalidInputError("right-hand side has the wrong length")
    res = snf(m)
    # y U^-1 S = rhs V
    target = [sum(x * res.v[i, j] for i, x in enumerate(rhs)) for j in range(m.cols)]
    z = [0] * m.rows
    for j in range(m.cols):
        s = res.s[j, j] if j < m.rows else 0
        if s == 0:
            if target[j] != 0:
                return None
        elif target[j] % s:
            return None
        else:
            z[j] = target[j] // s
    return tuple(sum(z[k] * res.u[k, i] for k in range(m.rows)) for i in range(m.rows))
