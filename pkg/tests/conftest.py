import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from eqresolve.groups import FiniteMatrixGroup  # noqa: E402
from eqresolve.resolve import GeometricModel  # noqa: E402

ROOT = Path(__file__).resolve().parents[1]
MODELS = ROOT / "models"
GOLDEN = Path(__file__).parent / "golden"


def diag(*d):
    return [[d[i] if i == j else 0 for j in range(len(d))] for i in range(len(d))]


ROT90 = [[0, -1], [1, 0]]
ROT90_Z = [[0, -1, 0], [1, 0, 0], [0, 0, 1]]


@pytest.fixture
def klein():
    return FiniteMatrixGroup([diag(-1, 1), diag(1, -1)], name="klein")


@pytest.fixture
def c4():
    return FiniteMatrixGroup([ROT90], name="c4")


@pytest.fixture
def klein_model(klein):
    return GeometricModel("signbox", klein, "klein-square")


@pytest.fixture
def interval_model():
    return GeometricModel("signbox", FiniteMatrixGroup([[[-1]]]), "interval")


_CRITERIA = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion checked by the test")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None:
        return
    number, title = mark.args
    if report.when == "call" or (report.when == "setup" and not report.passed):
        status = "PASS" if report.passed else "FAIL"
        _CRITERIA[number] = f"criterion {number}: {status}  {title}"


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_CRITERIA):
        terminalreporter.write_line(_CRITERIA[number])
