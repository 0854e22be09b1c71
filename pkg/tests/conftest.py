from pathlib import Path

import pytest

from tensorbounds import from_unique_entries

DATA = Path(__file__).parent / "data"

_criteria: dict[int, list[tuple[str, str]]] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n): acceptance criterion number")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None:
        return
    if rep.when == "call" or (rep.when == "setup" and rep.outcome != "passed"):
        _criteria.setdefault(marker.args[0], []).append((item.name, rep.outcome))


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_criteria):
        results = _criteria[number]
        ok = all(outcome == "passed" for _, outcome in results)
        failed = [name for name, outcome in results if outcome != "passed"]
        line = f"criterion {number}: {'PASS' if ok else 'FAIL'} ({len(results) - len(failed)}/{len(results)} checks)"
        if failed:
            line += " failing: " + ", ".join(failed)
        terminalreporter.write_line(line)


@pytest.fixture
def diagonal_quartic():
    return from_unique_entries(4, 2, {(1, 1, 1, 1): 1.1, (2, 2, 2, 2): 1.0})


@pytest.fixture
def coupled_quartic():
    return from_unique_entries(4, 2, {(1, 1, 1, 1): 12, (1, 1, 2, 2): -2, (2, 2, 2, 2): 10})


@pytest.fixture
def sextic():
    return from_unique_entries(
        6, 2, {(1,) * 6: 10, (1, 1, 1, 1, 2, 2): 5.2, (1, 1, 2, 2, 2, 2): -1.6, (2,) * 6: 8}
    )
