"""End-to-end acceptance criteria, one test per criterion.

Each test records a PASS/FAIL line that is printed in the terminal summary.
"""
import time

import pytest
from click.testing import CliRunner

from eqresolve import corners as cc
from eqresolve import linalg as la
from eqresolve.cli import main
from eqresolve.groups import FiniteMatrixGroup, representation_kernel
from eqresolve.resolve import (PASS, FAIL, GeometricModel, _space_stabilizers, canonical_resolution, fiber_space,
                               product_of_outcomes, resolved_point_stabilizer, verify_fiber_recursion)
from chart_oracle import oracle
from conftest import GOLDEN, MODELS, ROT90, ROT90_Z, diag
from suite_models import sign_generators, sign_subgroups, suite, suite_result


def model(gens, kind="signbox"):
    return GeometricModel(kind, FiniteMatrixGroup(gens))


@pytest.mark.criterion(1, "interval resolves to two intervals")
def test_interval():
    out = canonical_resolution(model([[[-1]]]))
    assert len(out.trace) == 1
    assert out.resolved.census() == {0: 2, 1: 4}
    assert sorted(out.resolved.component_hypersurface_counts().values()) == [2, 2]
    assert out.report["unique_isotropy"]["status"] == PASS and out.space.kernel() == frozenset({0})
    assert resolved_point_stabilizer(out, out.face("0 [|+]")).members == {0}
    result = CliRunner().invoke(main, ["--json", "resolve", str(MODELS / "interval-z2.json")])
    assert result.exit_code == 0
    assert result.output == (GOLDEN / "resolve-interval-z2.json").read_text()


@pytest.mark.criterion(2, "Klein square: four quadrants with the corner blown up")
def test_square():
    out = canonical_resolution(model([diag(-1, 1), diag(1, -1)]))
    rounds = out.trace.rounds()
    assert [len(r) for r in rounds] == [1, 2]
    assert rounds[0][0].centers == (la.Subspace.zero(2),)
    assert {s.center_codim for s in rounds[1]} == {1}
    assert len(out.resolved.components) == 4
    assert set(out.resolved.component_hypersurface_counts().values()) == {5}
    assert sorted(len(c.hypersurfaces) for c in out.structure.collectives.values()) == [4, 4, 4]
    for n in (1, 2):
        for gens in sign_subgroups(n):
            got = canonical_resolution(model(sign_generators(gens, n)), verify=False).resolved.census()
            assert got == oracle([tuple(-1 if b else 1 for b in v) for v in gens], n)["census"], gens


@pytest.mark.criterion(3, "product of resolved intervals differs from the resolved square")
def test_product_counterexample():
    one = canonical_resolution(model([[[-1]]]))
    square = canonical_resolution(model([diag(-1, 1), diag(1, -1)]))
    prod = product_of_outcomes(one, one)
    assert set(prod.component_hypersurface_counts().values()) == {4}
    assert set(square.resolved.component_hypersurface_counts().values()) == {5}


@pytest.mark.criterion(4, "partial boundary blow-up of the Z4 square is an octagon")
def test_octagon():
    sq = cc.square_complex()
    rot = cc.square_rotation_action(sq)
    before = cc.check_boundary_intersection_free(sq, rot)
    assert not before.ok and len(before.witness) == 2
    assert any(set(before.witness) <= f.hypersurfaces for f in sq.faces.values() if f.codim == 2)
    octa, act, blown = cc.partial_boundary_blowup(sq, rot)
    assert sorted(blown) == sorted(sq.of_codim(2))
    assert len(octa.hypersurfaces) == 8
    assert cc.check_boundary_intersection_free(octa, act).ok


@pytest.mark.criterion(5, "doubling the square twice gives a torus")
def test_torus():
    sq = cc.square_complex()
    torus, act = cc.iterated_double(sq, cc.trivial_action(sq), [["x0-", "x0+"], ["x1-", "x1+"]])
    assert len(torus.hypersurfaces) == 0 and torus.census() == {0: 1}
    assert len(cc.swap_subgroup(act)) == 4 and cc.swaps_faithful_and_central(act, 2)


@pytest.mark.criterion(6, "rotation models")
def test_rotations():
    out = canonical_resolution(model([ROT90], "ball"))
    assert len(out.trace) == 1 and out.trace.steps[0].centers == (la.Subspace.zero(2),)
    assert len(out.resolved.hypersurfaces) == 2
    assert out.report["unique_isotropy"]["status"] == PASS and out.space.kernel() == frozenset({0})

    out = canonical_resolution(model([ROT90_Z], "ball"))
    (coll,) = out.structure.collectives.values()
    assert coll.fibration_codim == 1
    fib = fiber_space(out.space, coll.centers[0], out.structure._fibers)
    zero = la.Subspace.zero(3)
    front = [f for f in fib.complex.faces if f.chain and f.chain[-1] == zero and not f.at_infinity]
    # a single closed codim-1 face of the normal disk: a circle
    assert [fib.complex.faces[f].codim for f in front] == [1]
    stabs = _space_stabilizers(fib, 5, 0, keys=front)
    assert stabs and all(s == fib.kernel() for _, s in stabs) and fib.kernel() == frozenset({0})
    rep = verify_fiber_recursion(out)
    assert rep["status"] == PASS and rep["types"][0]["fiber_census"] == {"1": 1}


@pytest.mark.criterion(7, "property suite over sign and rotation models")
def test_property_suite():
    models = suite()
    assert len(models) <= 40
    start = time.perf_counter()
    failed = [name for name, kind, gens in models
              if set(suite_result(name, kind, gens).values()) != {PASS}]
    assert not failed
    assert time.perf_counter() - start < 300


@pytest.mark.criterion(8, "ineffective Z2xZ2 action")
def test_ineffective():
    g = FiniteMatrixGroup([diag(-1, 1), diag(1, 1)], tags=[[[1]], [[-1]]])
    assert g.order == 4
    out = canonical_resolution(GeometricModel("ball", g))
    rep = out.report["unique_isotropy"]
    assert rep["status"] == PASS
    assert set(rep["stabilizer"]) == set(representation_kernel(g).member_ids) and len(rep["stabilizer"]) == 2


@pytest.mark.criterion(9, "truncated resolution fails at a mirror face")
def test_negative_control():
    klein = FiniteMatrixGroup([diag(-1, 1), diag(1, -1)])
    out = canonical_resolution(GeometricModel("signbox", klein), truncate_last_step=True)
    rep = out.report["unique_isotropy"]
    assert rep["status"] == FAIL
    bad = rep["violations"][0]
    assert bad["face"]
    (g,) = [i for i in bad["stabilizer"] if i != 0]
    m = klein.elements[g]
    assert la.matmul(m, m) == la.identity(2) and la.fixed_subspace([m]).dim == 1
