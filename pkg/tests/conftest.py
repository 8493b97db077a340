from pathlib import Path

import numpy as np
import pytest

from nilproj.matrixio import read_matrix

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"

_acceptance = []


@pytest.fixture
def fixture_matrix():
    def load(name):
        return read_matrix(FIXTURES / f"{name}.json")

    return load


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


def pytest_configure(config):
    config.addinivalue_line("markers", "acceptance(number, title): acceptance criterion")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    marker = item.get_closest_marker("acceptance")
    if marker is None:
        return
    if rep.when == "call" or (rep.when == "setup" and rep.outcome != "passed"):
        number, title = marker.args
        _acceptance.append((number, title, rep.outcome, rep.duration))


def pytest_terminal_summary(terminalreporter):
    if not _acceptance:
        return
    terminalreporter.section("acceptance criteria")
    for number, title, outcome, duration in sorted(_acceptance):
        verdict = "PASS" if outcome == "passed" else "FAIL"
        terminalreporter.write_line(f"[{verdict}] {number:>2}. {title} ({duration:.1f}s)")


def pytest_addoption(parser):
    parser.addoption("--full-sweep", action="store_true", default=False,
                     help="run the conjecture table for all r <= n <= 10 instead of n <= 6")
