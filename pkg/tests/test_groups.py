import random
from fractions import Fraction as F

import pytest
from hypothesis import given, settings, strategies as st

from eqresolve import linalg as la
from eqresolve.errors import CapExceeded, NotASubgroup, NotOrthogonal
from eqresolve.groups import (FiniteMatrixGroup, are_conjugate, generate_group, normalizer, point_stabilizer,
                              pointwise_stabilizer, representation_kernel, restrict)
from conftest import ROT90, diag

D4 = [ROT90, diag(1, -1)]


def ids(group, *mats):
    return frozenset(group.index[(la.matrix(m), ())] for m in mats)


def test_generate_examples():
    assert generate_group([[[-1]]], cap=10).order == 2
    assert generate_group([diag(-1, 1), diag(1, -1)], cap=10).order == 4
    assert generate_group([ROT90], cap=10).order == 4
    with pytest.raises(CapExceeded):
        generate_group([[["3/5", "-4/5"], ["4/5", "3/5"]]], cap=100)
    with pytest.raises(NotOrthogonal):
        generate_group([[[2, 0], [0, 1]]])


def test_ids_are_breadth_first(klein):
    assert klein.elements[0] == la.identity(2)
    assert klein.elements[1] == la.matrix(diag(-1, 1))
    assert klein.elements[2] == la.matrix(diag(1, -1))
    assert klein.elements[3] == la.matrix(diag(-1, -1))


def test_point_stabilizer_examples(klein, c4):
    assert point_stabilizer(klein, (0, 0)).members == frozenset(range(4))
    assert point_stabilizer(klein, (F(1), F(0))).members == ids(klein, diag(1, 1), diag(1, -1))
    assert point_stabilizer(c4, (F(1), F(0))).members == {0}


def test_pointwise_stabilizer_examples(klein):
    assert pointwise_stabilizer(klein, la.Subspace.zero(2)) == klein.whole()
    assert pointwise_stabilizer(klein, la.Subspace.span([(1, 0)], 2)).members == ids(klein, diag(1, 1), diag(1, -1))
    assert pointwise_stabilizer(klein, la.Subspace.ambient(2)) == representation_kernel(klein)


def test_normalizer_examples(klein):
    assert normalizer(klein, klein.subgroup([0])) == klein.whole()
    assert normalizer(klein, klein.whole()) == klein.whole()
    assert normalizer(klein, klein.subgroup(ids(klein, diag(1, 1), diag(1, -1)))) == klein.whole()


def test_conjugacy_examples(klein):
    x = klein.subgroup(ids(klein, diag(1, 1), diag(1, -1)))
    y = klein.subgroup(ids(klein, diag(1, 1), diag(-1, 1)))
    assert are_conjugate(klein, x, x) == 0
    assert are_conjugate(klein, x, y) is None
    d4 = FiniteMatrixGroup(D4)
    assert d4.order == 8
    flip_y = d4.subgroup(ids(d4, diag(1, 1), diag(1, -1)))
    flip_x = d4.subgroup(ids(d4, diag(1, 1), diag(-1, 1)))
    swap = d4.subgroup(ids(d4, diag(1, 1), [[0, 1], [1, 0]]))
    assert are_conjugate(d4, flip_y, swap) is None
    w = are_conjugate(d4, flip_y, flip_x)
    assert w is not None and d4.conjugate(w, flip_y) == flip_x
    assert la.matrix(ROT90) in {d4.elements[g] for g in range(d4.order) if d4.conjugate(g, flip_y) == flip_x}


def test_kernel_examples(klein):
    assert representation_kernel(klein).members == {0}
    triv = FiniteMatrixGroup([diag(1, 1)])
    assert representation_kernel(triv) == triv.whole()
    tagged = FiniteMatrixGroup([diag(-1, 1), diag(1, 1)], tags=[[[1]], [[-1]]])
    assert tagged.order == 4
    assert representation_kernel(tagged).order == 2


def test_subgroup_checks(klein):
    with pytest.raises(NotASubgroup):
        klein.subgroup([0, 1, 2])
    with pytest.raises(NotASubgroup):
        klein.subgroup([1])


def test_restrict_keeps_tags():
    g = FiniteMatrixGroup([diag(-1, 1), diag(1, 1)], tags=[[[1]], [[-1]]])
    k = representation_kernel(g)
    assert restrict(k).order == 2


GROUPS = [[diag(-1, 1), diag(1, -1)], [ROT90], D4, [[[0, -1, 0], [1, 0, 0], [0, 0, 1]], diag(1, 1, -1)],
          [[[0, 0, 1], [1, 0, 0], [0, 1, 0]], diag(-1, 1, 1)]]


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(GROUPS), st.integers(0, 10 ** 6))
def test_group_properties(gens, seed):
    g = FiniteMatrixGroup(gens)
    rng = random.Random(seed)
    n = g.ambient_dim
    v = tuple(F(rng.randint(-3, 3), rng.randint(1, 3)) if rng.random() < 0.6 else F(0) for _ in range(n))
    k = point_stabilizer(g, v)
    assert g.order % k.order == 0
    assert k == pointwise_stabilizer(g, la.Subspace.span([v], n))
    w1 = la.Subspace.span([v], n)
    w2 = la.span_sum(w1, la.Subspace.span([tuple(F(rng.randint(-2, 2)) for _ in range(n))], n))
    assert pointwise_stabilizer(g, w2).issubset(pointwise_stabilizer(g, w1))
    fixed = la.fixed_subspace(k.matrices())
    assert pointwise_stabilizer(g, fixed) == k
    subs = [k, pointwise_stabilizer(g, w2), g.conjugate(rng.randrange(g.order), k)]
    for a in subs:
        assert are_conjugate(g, a, a) is not None
        for b in subs:
            ab = are_conjugate(g, a, b)
            assert (ab is None) == (are_conjugate(g, b, a) is None)
            for c in subs:
                bc = are_conjugate(g, b, c)
                if ab is not None and bc is not None:
                    assert g.conjugate(g.mul(bc, ab), a) == c
