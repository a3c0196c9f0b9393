import pytest

from eqresolve.errors import UnverifiedInput
from eqresolve.groups import FiniteMatrixGroup
from eqresolve.quotient import borel_check, orbit_space
from eqresolve.resolve import PASS, GeometricModel, canonical_resolution
from conftest import ROT90, diag
from suite_models import sign_generators, sign_subgroups


def quotient(kind, gens):
    out = canonical_resolution(GeometricModel(kind, FiniteMatrixGroup(gens)))
    return out, orbit_space(out)


def test_interval(interval_model):
    z = orbit_space(canonical_resolution(interval_model))
    assert z.census() == {0: 1, 1: 2}
    assert len(z.collectives) == 1 and len(z.carriers) == 1
    assert set(z.orbit_size.values()) == {2}


def test_klein_square(klein_model):
    out = canonical_resolution(klein_model)
    z = orbit_space(out)
    assert z.census() == {0: 1, 1: 5, 2: 5}
    assert len(z.complex.hypersurfaces) == 5
    assert all(len(v) == 1 for v in z.collectives.values()) and len(z.carriers) == 2
    assert {k: v["status"] for k, v in z.report.items()} == dict.fromkeys(z.report, PASS)


def test_trivial_group_is_identity():
    out, z = quotient("signbox", [diag(1, 1)])
    assert z.census() == out.resolved.census()
    assert all(s == 1 for s in z.orbit_size.values())
    assert z.complex.hypersurfaces == out.resolved.hypersurfaces


@pytest.mark.parametrize("n", [1, 2, 3])
def test_one_hypersurface_per_type(n):
    for gens in sign_subgroups(n):
        out, z = quotient("signbox", sign_generators(gens, n))
        assert len(z.complex.hypersurfaces) == len(out.poset.types) - 1 + len(z.carriers)
        assert len(z.complex.components) == 1
        assert all(r["status"] == PASS for r in z.report.values()), gens


def test_rotation_disk():
    out, z = quotient("ball", [ROT90])
    assert z.census() == {0: 1, 1: 2}
    assert z.report["projected_structure"]["status"] == PASS


def test_borel(klein_model, c4):
    poset = canonical_resolution(klein_model, verify=False).poset
    data = [borel_check(klein_model, t) for t in poset.types]
    assert all(d.status == PASS for d in data)
    assert sorted(d.W_order for d in data) == [1, 2, 2, 4]
    c4_model = GeometricModel("ball", c4)
    for t in canonical_resolution(c4_model, verify=False).poset.types:
        d = borel_check(c4_model, t)
        assert d.status == PASS and d.N.order == 4


def test_unverified_input(klein_model):
    out = canonical_resolution(klein_model, truncate_last_step=True)
    with pytest.raises(UnverifiedInput):
        orbit_space(out)
