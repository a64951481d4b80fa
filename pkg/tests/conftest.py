import pytest
from hypothesis import settings

from cliffmat.exactfield import Mat
from helpers import GF2, GF3, mats

settings.register_profile("default", deadline=None)
settings.load_profile("default")


@pytest.fixture
def diagonal_gf3_gens():
    return [Mat.diag(d, GF3) for d in [(2, 1), (1, 2), (0, 1), (1, 0)]]


@pytest.fixture
def gl2_f2_gens():
    return mats(GF2, [[0, 1], [1, 0]], [[1, 1], [0, 1]])


@pytest.fixture
def gl2_f2_zero_gens(gl2_f2_gens):
    return gl2_f2_gens + [Mat.zero(2, GF2)]


@pytest.fixture
def right_zero_gens():
    return mats(GF2, [[1, 0], [0, 0]], [[1, 1], [0, 0]])


@pytest.fixture
def nilpotent_gens():
    return mats(GF2, [[0, 1], [0, 0]])


# acceptance summary: one line per criterion, whatever the capture mode

_criteria: dict[int, dict] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None or rep.when not in ("setup", "call"):
        return
    number, title = marker.args
    entry = _criteria.setdefault(number, {"title": title, "ok": True, "notes": []})
    if rep.failed or (rep.when == "call" and rep.skipped):
        entry["ok"] = False
    if rep.when == "call":
        entry["notes"].extend(v for k, v in item.user_properties if k == "note")


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_criteria):
        entry = _criteria[number]
        status = "PASS" if entry["ok"] else "FAIL"
        notes = "; ".join(entry["notes"])
        terminalreporter.write_line(f"[{status}] criterion {number}: {entry['title']}" + (f" ({notes})" if notes else ""))
