import pytest

from preproj.algebra import build_preprojective
from preproj.hochschild import build_complex


@pytest.fixture(scope="session")
def a2():
    return build_preprojective("A2")


@pytest.fixture(scope="session")
def a2_pair(a2):
    return build_complex(a2, 8)


@pytest.fixture(scope="session")
def a3_pair():
    return build_complex(build_preprojective("A3"), 8, check=False)


# ---- acceptance summary: one line per criterion, from the real test outcomes ----------

_CRITERIA: dict = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n, text): acceptance criterion exercised by this test")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None or (rep.when != "call" and not rep.failed):
        return
    n, text = mark.args
    row = _CRITERIA.setdefault(n, {"text": text, "ok": True, "tests": 0, "secs": 0.0})
    if rep.when == "call":
        row["tests"] += 1
        row["secs"] += rep.duration
    row["ok"] &= rep.passed or rep.skipped


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_CRITERIA):
        row = _CRITERIA[n]
        status = "PASS" if row["ok"] else "FAIL"
        terminalreporter.write_line(f"criterion {n}: {status}  {row['text']}  "
                                    f"({row['tests']} tests, {row['secs']:.1f} s)")
