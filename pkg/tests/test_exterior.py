import itertools
import random

import pytest

from wedgeinv import oracles
from wedgeinv.abelian import FinGenAbGroup, is_generating
from wedgeinv.errors import InvalidInputError, NotEquivalentError
from wedgeinv.exactla import IntMatrix, det, is_unimodular
from wedgeinv.exterior import (
    ElementaryOp,
    apply_elem_op,
    class_of,
    elementary_matrix,
    glz_witness,
    is_generator,
    push_forward,
    replay,
    synthesize_elem_ops,
    wedge,
    wedge_power,
)


def rand_elem(rng, g):
    return g.element([rng.randrange(n) if n else rng.randint(-5, 5) for n in g.factors])


def rand_generating(rng, g, d):
    while True:
        t = tuple(rand_elem(rng, g) for _ in range(d))
        if is_generating(t, g):
            return t


# -- wedge powers --------------------------------------------------------------


def test_wedge_power_examples():
    w = wedge_power(FinGenAbGroup((2, 4)), 2)
    assert w.moduli == (2,)
    assert wedge_power(FinGenAbGroup((2, 4)), 3).is_zero_group
    free = wedge_power(FinGenAbGroup((0, 0)), 2)
    assert free.moduli == (0,)


def test_wedge_power_moduli_use_smallest_index():
    w = wedge_power(FinGenAbGroup((2, 4, 8)), 2)
    assert dict(zip(w.subsets, w.moduli)) == {(0, 1): 2, (0, 2): 2, (1, 2): 4}
    assert wedge_power(FinGenAbGroup((3, 9)), 0).moduli == (0,)


# -- wedge ---------------------------------------------------------------------


def test_wedge_examples():
    g = FinGenAbGroup((2, 4))
    assert wedge(g.basis()).coords == (1,)
    assert wedge([g.element((1, 1)), g.element((1, 3))]).coords == (0,)
    h = FinGenAbGroup((5, 5, 5))
    x, y = h.element((1, 2, 3)), h.element((4, 0, 1))
    assert wedge([x, y, x]).is_zero()


def test_wedge_needs_common_group():
    with pytest.raises(InvalidInputError):
        wedge([FinGenAbGroup((3,)).element((1,)), FinGenAbGroup((5,)).element((1,))])
    with pytest.raises(InvalidInputError):
        wedge([])


def test_wedge_multilinear_and_alternating_200_seeded():
    rng = random.Random(2718)
    groups = [(5, 5), (2, 4), (3, 3, 3), (2, 2, 4), (0, 0), (3, 0), (4, 8, 8)]
    for _ in range(200):
        g = FinGenAbGroup(rng.choice(groups))
        d = rng.randint(1, g.rank + 1)
        t = [rand_elem(rng, g) for _ in range(d)]
        k = rng.randrange(d)
        x, y = rand_elem(rng, g), rand_elem(rng, g)
        with_x = t[:k] + [x] + t[k + 1:]
        with_y = t[:k] + [y] + t[k + 1:]
        with_sum = t[:k] + [x + y] + t[k + 1:]
        assert wedge(with_sum, g) == wedge(with_x, g) + wedge(with_y, g)
        if d >= 2:
            i, j = rng.sample(range(d), 2)
            swapped = list(t)
            swapped[i], swapped[j] = swapped[j], swapped[i]
            assert wedge(swapped, g) == -wedge(t, g)
            repeated = list(t)
            repeated[i] = repeated[j]
            assert wedge(repeated, g).is_zero()


# -- classes and generators ----------------------------------------------------


def test_class_of_examples():
    p = wedge_power(FinGenAbGroup((5,)), 1)
    two = p.element((2,))
    assert class_of(two).rep.coords == (2,)
    assert class_of(p.element((3,))) == class_of(two)
    assert class_of(p.zero()).rep == p.zero()
    assert class_of(two).contains(-two)


def test_is_generator_examples():
    assert is_generator(wedge_power(FinGenAbGroup((5,)), 1).element((2,)))
    assert not is_generator(wedge_power(FinGenAbGroup((4,)), 1).element((2,)))
    z = wedge_power(FinGenAbGroup((0,)), 1)
    assert is_generator(z.element((1,))) and is_generator(z.element((-1,)))
    assert not is_generator(z.element((2,)))


def test_top_wedge_of_generating_tuple_generates():
    rng = random.Random(4)
    for factors in [(5,), (3, 3), (2, 4), (6, 12), (0, 0)]:
        g = FinGenAbGroup(factors)
        for _ in range(20):
            assert is_generator(wedge(rand_generating(rng, g, g.rank), g))


# -- elementary operations -----------------------------------------------------


def test_elem_op_examples():
    g = FinGenAbGroup((5, 5))
    e1, e2 = g.basis()
    assert apply_elem_op((e1, e2), ElementaryOp(0, 1, 0)) == (e1, e2)
    assert apply_elem_op((e1, e2), ElementaryOp(0, 1, 1)) == (e1 + e2, e2)
    with pytest.raises(InvalidInputError):
        ElementaryOp(1, 1, 3)
    with pytest.raises(InvalidInputError):
        apply_elem_op((e1, e2), ElementaryOp(0, 2, 1))


def test_elem_op_json_is_one_based():
    op = ElementaryOp(0, 2, -3)
    assert op.to_json() == {"i": 1, "j": 3, "m": -3}
    assert ElementaryOp.from_json(op.to_json()) == op


def test_elem_ops_preserve_wedge():
    rng = random.Random(8)
    for factors in [(5, 5), (2, 4), (3, 9), (2, 2, 2), (0, 0), (4, 0)]:
        g = FinGenAbGroup(factors)
        for d in (2, 3):
            t = tuple(rand_elem(rng, g) for _ in range(d))
            w = wedge(t, g)
            for i, j in itertools.permutations(range(d), 2):
                for m in (-3, 1, 2, 7):
                    assert wedge(apply_elem_op(t, ElementaryOp(i, j, m)), g) == w


def test_synthesis_examples():
    g = FinGenAbGroup((5, 5))
    a = tuple(g.basis())
    b = (g.element((1, 1)), g.element((0, 1)))
    ops = synthesize_elem_ops(a, b)
    assert replay(ops, a) == b
    assert len(ops) == 1
    assert replay(synthesize_elem_ops(a, a), a) == a
    h = FinGenAbGroup((5,))
    with pytest.raises(NotEquivalentError, match="wedges differ"):
        synthesize_elem_ops((h.element((1,)),), (h.element((2,)),))


def test_synthesis_rejects_non_generating():
    g = FinGenAbGroup((2, 4))
    a = tuple(g.basis())
    with pytest.raises(InvalidInputError):
        synthesize_elem_ops(a, (g.element((1, 1)), g.element((1, 3))))


def test_synthesis_replays_on_random_pairs():
    rng = random.Random(1618)
    groups = [(5, 5), (2, 4), (3, 3), (6, 12), (2, 2, 2), (3, 3, 9), (0, 0), (2, 0), (7,)]
    checked = 0
    for _ in range(400):
        g = FinGenAbGroup(rng.choice(groups))
        d = rng.randint(g.rank, g.rank + 2)
        if d == 1:
            continue
        a = rand_generating(rng, g, d)
        # move a by random unimodular-with-det-1 operations to get b with the same wedge
        b = a
        for _ in range(rng.randint(0, 8)):
            i, j = rng.sample(range(d), 2)
            b = apply_elem_op(b, ElementaryOp(i, j, rng.randint(-4, 4)))
        ops = synthesize_elem_ops(a, b)
        assert replay(ops, a) == b
        checked += 1
    assert checked >= 200


@pytest.mark.parametrize("factors,d", [(f, d) for f in [(2, 2), (3, 3), (2, 4)] for d in (2, 3)])
def test_orbits_equal_wedge_fibers(factors, d):
    g = FinGenAbGroup(factors)
    tuples = oracles.generating_tuples(factors, d)
    orbits = oracles.elementary_orbits(factors, d, tuples)
    fibers = oracles.wedge_fibers(factors, d, tuples, lambda t: wedge([g.element(x) for x in t], g).coords)
    assert set(orbits) == set(fibers)


# -- GL_d(Z) witnesses -----------------------------------------------------------


def test_glz_witness_examples():
    g = FinGenAbGroup((5, 5))
    e1, e2 = g.basis()
    n = glz_witness((e1, e2), (e2, e1))
    assert n == IntMatrix.from_rows([[0, 1], [1, 0]])
    assert glz_witness((e1, e2), (e1, e2)) == IntMatrix.identity(2)


def _apply(n, a):
    d = len(a)
    return tuple(sum((n[i, j] * a[j] for j in range(d)), a[0] * 0) for i in range(d))


def test_glz_witness_unimodular_and_exact():
    rng = random.Random(77)
    groups = [(5, 5), (7, 7), (2, 4), (3, 3, 3), (0, 0), (5,)]
    for _ in range(200):
        g = FinGenAbGroup(rng.choice(groups))
        d = rng.randint(g.rank, g.rank + 1)
        a = rand_generating(rng, g, d)
        b = rand_generating(rng, g, d)
        if class_of(wedge(a, g)) != class_of(wedge(b, g)):
            with pytest.raises(NotEquivalentError):
                glz_witness(a, b)
            continue
        n = glz_witness(a, b)
        assert is_unimodular(n)
        assert _apply(n, a) == b


def test_unimodular_action_scales_wedge_by_det():
    rng = random.Random(12)
    for factors in [(5, 5), (4, 8), (3, 3, 3), (0, 0)]:
        g = FinGenAbGroup(factors)
        d = g.rank
        for _ in range(30):
            a = rand_generating(rng, g, d)
            n = IntMatrix.identity(d)
            for _ in range(6):
                i, j = rng.sample(range(d), 2)
                n = elementary_matrix(ElementaryOp(i, j, rng.randint(-2, 2) or 1), d) @ n
            if rng.random() < 0.5:
                n = IntMatrix.diag([-1] + [1] * (d - 1)) @ n
            assert is_unimodular(n)
            assert wedge(_apply(n, a), g) == wedge(a, g) * det(n)


def test_push_forward_top_degree_is_det():
    g = FinGenAbGroup((5, 5))
    w = wedge(g.basis(), g)
    m = IntMatrix.from_rows([[2, 1], [1, 1]])
    assert push_forward(w, m) == w * det(m)
