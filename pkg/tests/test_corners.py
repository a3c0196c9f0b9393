from itertools import permutations, product

import pytest
from hypothesis import given, settings, strategies as st

from eqresolve import corners as cc
from eqresolve.errors import CollectionNotDisjoint, CollectionNotInvariant, SpecError

KLEIN = [((0, 1), (-1, 1)), ((0, 1), (1, -1))]


def square_z4():
    sq = cc.square_complex()
    return sq, cc.square_rotation_action(sq)


def test_cube_complex_census():
    assert cc.interval_complex().census() == {0: 1, 1: 2}
    assert cc.square_complex().census() == {0: 1, 1: 4, 2: 4}
    assert cc.cube_complex(3).census() == {0: 1, 1: 6, 2: 12, 3: 8}
    assert cc.cube_complex(3).validate() == []


def test_bif_examples():
    sq, rot = square_z4()
    res = cc.check_boundary_intersection_free(sq, rot)
    assert not res and res.witness is not None
    a, b = res.witness
    assert a[:2] != b[:2] and sq.meets(a, b)
    triv = cc.check_boundary_intersection_free(sq, cc.trivial_action(sq))
    assert triv and sorted(len(p) for p in triv.partition) == [1, 1, 1, 1]


def test_octagon():
    sq, rot = square_z4()
    octa, act, blown = cc.partial_boundary_blowup(sq, rot)
    assert sorted(blown) == sorted(sq.of_codim(2))
    assert len(octa.hypersurfaces) == 8 and octa.census() == {0: 1, 1: 8, 2: 8}
    res = cc.check_boundary_intersection_free(octa, act)
    assert res and sorted(len(p) for p in res.partition) == [4, 4]
    assert act.validate(octa) == []


def test_partial_blowup_does_nothing_without_intertwining():
    sq = cc.square_complex()
    for action in (cc.trivial_action(sq), cc.coordinate_action(sq, KLEIN)):
        out, _, blown = cc.partial_boundary_blowup(sq, action)
        assert blown == [] and out.census() == sq.census()


def test_total_blowup_examples():
    i = cc.interval_complex()
    out, _ = cc.total_boundary_blowup(i, cc.trivial_action(i))
    assert out.census() == {0: 1, 1: 2}
    sq = cc.square_complex()
    out, _ = cc.total_boundary_blowup(sq, cc.trivial_action(sq))
    assert out.census() == {0: 1, 1: 8, 2: 8}
    cube = cc.cube_complex(3)
    out, _ = cc.total_boundary_blowup(cube, cc.trivial_action(cube))
    assert len(out.hypersurfaces) == 26
    assert out.census() == cc.chain_census(cube) == {0: 1, 1: 26, 2: 72, 3: 48}


def signed_perm_actions(n):
    perms = list(permutations(range(n)))
    signs = list(product((1, -1), repeat=n))
    return st.lists(st.tuples(st.sampled_from(perms), st.sampled_from(signs)), min_size=1, max_size=2)


@settings(max_examples=25, deadline=None)
@given(st.data())
def test_total_blowup_properties(data):
    n = data.draw(st.integers(1, 3))
    cx = cc.cube_complex(n)
    action = cc.coordinate_action(cx, data.draw(signed_perm_actions(n)))
    out, act = cc.total_boundary_blowup(cx, action)
    proper = [a for a, f in cx.faces.items() if f.codim >= 1]
    assert len(out.hypersurfaces) == len(proper)
    assert out.census() == cc.chain_census(cx)
    assert cc.check_boundary_intersection_free(out, act)
    assert act.validate(out) == [] and out.validate() == []


def test_doubling_interval():
    i = cc.interval_complex()
    out, act = cc.double_across(i, cc.trivial_action(i), ["x0-"])
    assert out.census() == {0: 1, 1: 2}
    assert act.order == 2 and cc.swaps_faithful_and_central(act, 1)


def test_doubling_square_to_cylinder_and_torus():
    sq = cc.square_complex()
    act = cc.trivial_action(sq)
    cyl, cact = cc.double_across(sq, act, ["x0-", "x0+"])
    assert len(cyl.hypersurfaces) == 2 and cyl.census() == {0: 1, 1: 2}
    torus, tact = cc.double_across(cyl, cact, cc.lift_collection(cyl, ["x1-", "x1+"]))
    assert torus.census() == {0: 1} and len(torus.sheets) == 4
    assert cc.swaps_faithful_and_central(tact, 2)
    again, _ = cc.iterated_double(sq, act, [["x0-", "x0+"], ["x1-", "x1+"]])
    assert again.census() == torus.census()


def test_doubling_errors():
    sq = cc.square_complex()
    with pytest.raises(CollectionNotDisjoint):
        cc.double_across(sq, cc.trivial_action(sq), ["x0-", "x1-"])
    with pytest.raises(CollectionNotInvariant):
        cc.double_across(sq, cc.coordinate_action(sq, KLEIN), ["x0-"])
    with pytest.raises(CollectionNotDisjoint):
        cc.iterated_double(*square_z4())


@settings(max_examples=15, deadline=None)
@given(st.data())
def test_iterated_doubling_closes_up(data):
    n = data.draw(st.integers(1, 3))
    cx = cc.cube_complex(n)
    gens = [(tuple(range(n)), s) for s in data.draw(st.lists(st.sampled_from(list(product((1, -1), repeat=n))),
                                                             max_size=2))]
    action = cc.coordinate_action(cx, gens) if gens else cc.trivial_action(cx)
    res = cc.check_boundary_intersection_free(cx, action)
    out, act = cc.iterated_double(cx, action)
    assert out.hypersurfaces == []
    assert cc.swaps_faithful_and_central(act, len(res.partition))
    assert act.validate(out) == []


def test_complex_from_json_and_export():
    data = {"name": "wedge", "hypersurfaces": ["a", "b"],
            "faces": [{"codim": 0}, {"codim": 2, "hypersurfaces": ["a", "b"]}]}
    cx = cc.complex_from_json(data)
    assert cx.census() == {0: 1, 1: 2, 2: 1} and cx.validate() == []
    js = cc.to_json(cx, cc.trivial_action(cx))
    assert js["hypersurfaces"] == ["a", "b"] and js["census"] == {"0": 1, "1": 2, "2": 1}
    assert '"ab"' in cc.to_dot(cx)
    with pytest.raises(SpecError):
        cc.complex_from_json({"hypersurfaces": ["a"], "faces": [{"codim": 1, "hypersurfaces": ["z"]}]})
