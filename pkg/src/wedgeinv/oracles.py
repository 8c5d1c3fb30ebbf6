"""Brute-force reference computations.

These enumerate instead of reasoning, and share no code path with the
routines they check: orbits are found by breadth-first search over the
actual group action, subgroups by closure, Smith invariants by gcds of
minors, Pfaffians by summing over perfect matchings.  Used by the test
suite and by ``wedgeinv selftest``.
"""

from __future__ import annotations

import itertools
from collections import deque
from fractions import Fraction
from math import gcd


__all__ = [
    "subgroup_closure",
    "generating_tuples",
    "elementary_orbits",
    "glz_orbits",
    "wedge_fibers",
    "minors_gcd_invariants",
    "pfaffian_by_matchings",
    "form_preserving_residue_matrices",
    "det_by_permutations",
]


def _add(x, y, ns):
    return tuple((a + b) % n if n else a + b for a, b, n in zip(x, y, ns))


def subgroup_closure(coords_list, ns) -> set:
    """Subgroup of the finite group ``prod Z/n_i`` generated by the given coordinate tuples."""
    zero = tuple(0 for _ in ns)
    seen = {zero}
    queue = deque([zero])
    gens = [tuple(c % n for c, n in zip(g, ns)) for g in coords_list]
    while queue:
        x = queue.popleft()
        for g in gens:
            y = _add(x, g, ns)
            if y not in seen:
                seen.add(y)
                queue.append(y)
    return seen


def generating_tuples(ns, d) -> list:
    order = 1
    for n in ns:
        order *= n
    elements = list(itertools.product(*(range(n) for n in ns)))
    return [t for t in itertools.product(elements, repeat=d) if len(subgroup_closure(t, ns)) == order]


def _orbits(states, neighbours) -> list:
    remaining = set(states)
    out = []
    for s in states:
        if s not in remaining:
            continue
        orbit = {s}
        queue = deque([s])
        remaining.discard(s)
        while queue:
            x = queue.popleft()
            for y in neighbours(x):
                if y not in orbit:
                    orbit.add(y)
                    remaining.discard(y)
                    queue.append(y)
        out.append(frozenset(orbit))
    return out


def _elementary_neighbours(ns, d):
    e = 1
    for n in ns:
        e = e * n // gcd(e, n)

    def neighbours(t):
        for i in range(d):
            for j in range(d):
                if i == j:
                    continue
                for m in range(1, e):
                    new = list(t)
                    new[i] = tuple((a + m * b) % n for a, b, n in zip(t[i], t[j], ns))
                    yield tuple(new)

    return neighbours


def elementary_orbits(ns, d, tuples=None) -> list:
    """Orbits of generating d-tuples under ``a_i <- a_i + m a_j``."""
    tuples = generating_tuples(ns, d) if tuples is None else tuples
    return _orbits(tuples, _elementary_neighbours(ns, d))


def glz_orbits(ns, d, tuples=None) -> list:
    """Orbits under GL_d(Z): elementary operations plus negating the first entry."""
    tuples = generating_tuples(ns, d) if tuples is None else tuples
    elem = _elementary_neighbours(ns, d)

    def neighbours(t):
        yield from elem(t)
        yield (tuple((-a) % n for a, n in zip(t[0], ns)),) + tuple(t[1:])

    return _orbits(tuples, neighbours)


def wedge_fibers(ns, d, tuples, wedge_of) -> list:
    fibers: dict = {}
    for t in tuples:
        fibers.setdefault(wedge_of(t), set()).add(t)
    return [frozenset(f) for f in fibers.values()]


def det_by_permutations(rows) -> int:
    n = len(rows)
    total = 0
    for perm in itertools.permutations(range(n)):
        inversions = sum(1 for i in range(n) for j in range(i + 1, n) if perm[i] > perm[j])
        term = -1 if inversions % 2 else 1
        for i, p in enumerate(perm):
            term *= rows[i][p]
        total += term
    return total


def minors_gcd_invariants(rows) -> list:
    """Smith invariants ``d_k = D_k / D_{k-1}``, ``D_k`` the gcd of all k x k minors."""
    m, n = len(rows), len(rows[0]) if rows else 0
    out, prev = [], 1
    for k in range(1, min(m, n) + 1):
        g = 0
        for ri in itertools.combinations(range(m), k):
            for ci in itertools.combinations(range(n), k):
                g = gcd(g, det_by_permutations([[rows[i][j] for j in ci] for i in ri]))
        if g == 0:
            out.extend([0] * (min(m, n) - k + 1))
            break
        out.append(g // prev)
        prev = g
    return out


def pfaffian_by_matchings(rows) -> Fraction:
    """Sum over perfect matchings with the crossing sign; Pf([[0, a], [-a, 0]]) = a."""
    n = len(rows)

    def rec(idx):
        if not idx:
            return Fraction(1)
        first, rest = idx[0], idx[1:]
        total = Fraction(0)
        for k, j in enumerate(rest):
            entry = rows[first][j]
            if entry:
                total += (-1) ** k * Fraction(entry) * rec(rest[:k] + rest[k + 1:])
        return total

    return rec(tuple(range(n)))


def form_preserving_residue_matrices(degrees) -> list:
    """All residue matrices C (row i = image of generator i, entries reduced) on
    ``prod (Z/n_i)^2`` with ``C J C^T = J (mod 1)`` and well-defined on the group,
    found by scanning every matrix.  Only feasible for tiny groups."""
    ns = [n for n in degrees for _ in range(2)]
    k = len(ns)
    J = [[Fraction(0)] * k for _ in range(k)]
    for i, n in enumerate(degrees):
        J[2 * i][2 * i + 1] = Fraction(1, n)
        J[2 * i + 1][2 * i] = Fraction(-1, n)
    rows_by_gen = [
        [r for r in itertools.product(*(range(m) for m in ns)) if all((ni * c) % m == 0 for c, m in zip(r, ns))]
        for ni in ns
    ]
    out = []
    for rows in itertools.product(*rows_by_gen):
        ok = True
        for a in range(k):
            for b in range(k):
                v = sum(rows[a][i] * J[i][j] * rows[b][j] for i in range(k) for j in range(k) if rows[a][i] and rows[b][j])
                if (v - J[a][b]).denominator != 1:
                    ok = False
                    break
            if not ok:
                break
        if ok:
            out.append(rows)
    return out
