import pytest

from suite_models import suite, suite_result

SUITE = suite()


def test_suite_size():
    assert len(SUITE) <= 40
    assert [n for n, k, _ in SUITE if k == "ball"] == ["c2-plane", "c4-plane", "c2-axis", "c4-axis"]


@pytest.mark.parametrize("name,kind,gens", SUITE, ids=[m[0] for m in SUITE])
def test_model(name, kind, gens):
    res = suite_result(name, kind, gens)
    assert res == dict.fromkeys(res, "PASS")
