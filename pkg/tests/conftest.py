from fractions import Fraction
from importlib import resources

import pytest

from polytc.lengths import LengthVector
from polytc.presentation import load_fixture

FIXTURE_LENGTHS = {
    "n4_sphere": "1,1,1,2",
    "n4_1112": "1,1,1,2",
    "n5_equilateral": "1,1,1,1,1",
    "n5_13335": "1,3,3,3,5",
    "n6_111112": "1,1,1,1,1,2",
    "n6_112223": "1,1,2,2,2,3",
    "n7_equilateral": "1,1,1,1,1,1,1",
    "n4_3331": "3,3,3,1",
    "n6_114441": "1,1,4,4,4,1",
    "n6_111444": "1,1,1,4,4,4",
    "n7_1133333": "1,1,3,3,3,3,3",
}


def fixture_path(name):
    return str(resources.files("polytc") / "fixtures" / f"{name}.json")


@pytest.fixture(params=sorted(FIXTURE_LENGTHS))
def bundled(request):
    name = request.param
    return name, LengthVector.parse(FIXTURE_LENGTHS[name]), load_fixture(fixture_path(name))


@pytest.fixture
def sphere():
    return load_fixture(fixture_path("n4_sphere"))


def L(text):
    return LengthVector.parse(text)


def F(x):
    return Fraction(x)


_criteria = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(num, title): acceptance criterion")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None or rep.when != "call" and not rep.failed:
        return
    num, title = mark.args
    ok, _ = _criteria.get(num, (True, title))
    _criteria[num] = (ok and not rep.failed, title)


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(_criteria):
        ok, title = _criteria[num]
        terminalreporter.write_line(f"[{'PASS' if ok else 'FAIL'}] criterion {num}: {title}")
