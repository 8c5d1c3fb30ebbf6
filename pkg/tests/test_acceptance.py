"""Acceptance gate: eleven exact criteria, each with a time limit.

Every test prints one ``PASS``/``FAIL`` line (visible without ``-s``) and
then asserts both the result and the time budget.
"""

import itertools
import random
import time
from fractions import Fraction
from math import gcd

import pytest

from wedgeinv import oracles
from wedgeinv.abelian import FinGenAbGroup, dual, is_generating
from wedgeinv.classify import (
    RepSpec,
    birationally_equivalent,
    count_classes,
    e8_class_count,
    e8_classes,
    katsylo_fails,
    monomial_witness,
    projective_fixed_points,
)
from wedgeinv.errors import NotEquivalentError
from wedgeinv.exactla import RatMatrix, det, is_unimodular, pfaffian, pfaffian_congruence_check
from wedgeinv.exterior import class_of, replay, synthesize_elem_ops, wedge, wedge_power
from wedgeinv.qtorus import QuantumTorusSpec, commutator_form, heisenberg, k_isomorphic, span_check, wedge_criterion
from wedgeinv.symplectic import SymplecticSpace, enumerate_form_automorphisms, is_symplectic


@pytest.fixture
def report(capsys):
    def emit(number, title, ok, seconds, limit, detail=""):
        passed = ok and seconds < limit
        line = f"{'PASS' if passed else 'FAIL'} [{number:2d}] {title} ({seconds:.2f}s / {limit}s){': ' + detail if detail else ''}"
        with capsys.disabled():
            print("\n" + line)
        assert ok, detail
        assert seconds < limit, f"took {seconds:.2f}s, limit {limit}s"

    return emit


def timed(fn):
    start = time.perf_counter()
    result = fn()
    return result, time.perf_counter() - start


def _chains(max_n, max_len):
    out = []

    def rec(prefix):
        if prefix:
            out.append(tuple(prefix))
        if len(prefix) == max_len:
            return
        start = prefix[-1] if prefix else 2
        for n in range(start, max_n + 1):
            if n % start == 0:
                rec(prefix + [n])

    rec([])
    return out


def _random_faithful(rng, g, d):
    lattice = dual(g)
    while True:
        chars = tuple(lattice.character([rng.randrange(n) for n in g.factors]) for _ in range(d))
        if is_generating(chars, lattice):
            return RepSpec(g, chars)


def test_01_class_counts(report):
    def run():
        got = {
            "(5) d=1": count_classes(FinGenAbGroup((5,)), 1).count,
            "(7,7) d=2": count_classes(FinGenAbGroup((7, 7)), 2).count,
            "(9) d=1": count_classes(FinGenAbGroup((9,)), 1).count,
            "(2,4) d=2": count_classes(FinGenAbGroup((2, 4)), 2).count,
        }
        expected = {"(5) d=1": 2, "(7,7) d=2": 3, "(9) d=1": 3, "(2,4) d=2": 1}
        above = [
            count_classes(FinGenAbGroup(f), len(f) + 1).count
            for f in [(), (2,), (5,), (9,), (7, 7), (2, 4), (5, 5, 5), (0, 0), (3, 0)]
        ]
        return got == expected and all(c == 1 for c in above), f"{got}, d=r+1 counts {above}"

    (ok, detail), secs = timed(run)
    report(1, "class counts", ok, secs, 1, detail)


def test_02_katsylo_failure_set(report):
    def run():
        bad = [n for n in range(2, 31) if katsylo_fails(FinGenAbGroup((n,))) != (n == 5 or n >= 7)]
        return not bad, f"mismatches at n1 = {bad}"

    (ok, detail), secs = timed(run)
    report(2, "Katsylo failure set for n1 <= 30", ok, secs, 1, detail)


def test_03_rank_one_quantum_torus(report):
    def run():
        sets = {
            n: {m for m in range(1, n) if gcd(m, n) == 1 and k_isomorphic(QuantumTorusSpec((n,), (m,)))}
            for n in (5, 7)
        }
        return sets == {5: {1, 4}, 7: {1, 6}}, f"{sets}"

    (ok, detail), secs = timed(run)
    report(3, "rank-one quantum torus isomorphism", ok, secs, 1, detail)


def test_04_criterion_agreement(report):
    def run():
        checked, bad = 0, []
        for degrees in _chains(12, 3):
            units = [[m for m in range(1, n) if gcd(m, n) == 1] for n in degrees]
            for ms in itertools.product(*units):
                spec = QuantumTorusSpec(degrees, ms)
                checked += 1
                if k_isomorphic(spec) != wedge_criterion(spec):
                    bad.append((degrees, ms))
        return not bad, f"{checked} specs, {len(bad)} disagreements"

    (ok, detail), secs = timed(run)
    report(4, "wedge criterion vs exponent criterion", ok, secs, 120, detail)


def test_05_elementary_operations_completeness(report):
    def run():
        rng = random.Random(5)
        mismatches, pairs = 0, 0
        for factors in [(2, 2), (3, 3), (2, 4)]:
            g = FinGenAbGroup(factors)
            for d in (2, 3):
                tuples = oracles.generating_tuples(factors, d)
                orbits = oracles.elementary_orbits(factors, d, tuples)
                fibers = oracles.wedge_fibers(factors, d, tuples, lambda t: wedge([g.element(x) for x in t], g).coords)
                if set(orbits) != set(fibers):
                    mismatches += 1
                sorted_fibers = [sorted(f) for f in fibers]
                for _ in range(40):
                    members = rng.choice(sorted_fibers)
                    a = tuple(g.element(x) for x in rng.choice(members))
                    b = tuple(g.element(x) for x in rng.choice(members))
                    pairs += 1
                    if replay(synthesize_elem_ops(a, b), a) != b:
                        mismatches += 1
        return mismatches == 0 and pairs >= 200, f"{pairs} pairs replayed, {mismatches} mismatches"

    (ok, detail), secs = timed(run)
    report(5, "elementary-operation orbits equal wedge fibers", ok, secs, 120, detail)


def test_06_symplectic_determinant(report):
    def run():
        checked, bad = 0, 0
        for base in [(2,), (3,), (4,), (5,), (2, 2), (2, 4)]:
            n1 = base[0]
            for c in enumerate_form_automorphisms(SymplecticSpace(FinGenAbGroup(base))):
                checked += 1
                d = det(c) % n1
                if d != 1 % n1 or pfaffian_congruence_check(c, base) != d:
                    bad += 1
        return bad == 0, f"{checked} automorphisms, {bad} violations"

    (ok, detail), secs = timed(run)
    report(6, "form-preserving automorphisms have det 1", ok, secs, 120, detail)


def test_07_pfaffian_identity(report):
    def run():
        rng = random.Random(7)
        bad = 0
        for _ in range(100):
            n = 2 * rng.randint(1, 5)
            rows = [[Fraction(0)] * n for _ in range(n)]
            for i in range(n):
                for j in range(i + 1, n):
                    x = Fraction(rng.randint(-9, 9), rng.randint(1, 9))
                    rows[i][j], rows[j][i] = x, -x
            m = RatMatrix.from_rows(rows, n)
            if pfaffian(m) ** 2 != det(m):
                bad += 1
        return bad == 0, f"{bad} violations in 100 matrices"

    (ok, detail), secs = timed(run)
    report(7, "Pf^2 = det", ok, secs, 10, detail)


def test_08_fixed_point_invariance(report):
    def run():
        rng = random.Random(8)
        bad = 0
        for factors in [(5,), (3, 3), (2, 4)]:
            g = FinGenAbGroup(factors)
            for _ in range(20):
                reports = projective_fixed_points(_random_faithful(rng, g, g.rank))
                if len(reports) != g.rank + 1 or len({r.invariant for r in reports}) != 1:
                    bad += 1
        return bad == 0, f"{bad} violations in 60 representations"

    (ok, detail), secs = timed(run)
    report(8, "fixed points of P^r share one class", ok, secs, 10, detail)


def test_09_heisenberg_span(report):
    def run():
        results = {}
        for base in [(2,), (3,), (4,), (2, 2), (6,)]:
            h = heisenberg(FinGenAbGroup(base))
            results[base] = (span_check(h), is_symplectic(commutator_form(h)))
        return all(a and b for a, b in results.values()), f"{results}"

    (ok, detail), secs = timed(run)
    report(9, "Heisenberg span and symplectic commutator", ok, secs, 30, detail)


def test_10_witness_soundness(report):
    def run():
        rng = random.Random(10)
        groups = [(5,), (7,), (9,), (5, 5), (7, 7), (3, 9), (4, 8), (5, 5, 5)]
        equiv = inequiv = bad = 0
        while equiv < 500 or inequiv < 500:
            g = FinGenAbGroup(rng.choice(groups))
            d = g.rank
            v = _random_faithful(rng, g, d)
            w = _random_faithful(rng, g, d)
            if birationally_equivalent(v, w):
                if equiv >= 500:
                    continue
                equiv += 1
                n = monomial_witness(v, w)
                zero = v.chars[0] * 0
                moved = tuple(sum((n[j, i] * chi for j, chi in enumerate(v.chars)), zero) for i in range(d))
                if not is_unimodular(n) or moved != w.chars:
                    bad += 1
            else:
                if inequiv >= 500:
                    continue
                inequiv += 1
                try:
                    monomial_witness(v, w)
                    bad += 1
                except NotEquivalentError:
                    pass
        return bad == 0, f"{equiv} equivalent, {inequiv} inequivalent, {bad} violations"

    (ok, detail), secs = timed(run)
    report(10, "monomial witness soundness", ok, secs, 60, detail)


def test_11_e8_classes(report):
    def run():
        power = wedge_power(FinGenAbGroup((5, 5, 5)), 3)
        expected = {class_of(power.element((1,))), class_of(power.element((2,)))}
        classes = set(e8_classes())
        return e8_class_count() == 2 and classes == expected, f"count {e8_class_count()}, reps {sorted(c.rep.coords for c in classes)}"

    (ok, detail), secs = timed(run)
    report(11, "nontoral (Z/5)^3 in E8 has two classes", ok, secs, 1, detail)
