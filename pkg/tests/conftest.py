import os
from pathlib import Path

import pytest

DATA_DIR = Path(__file__).resolve().parent / "data"
NORWEGIAN_ENV = "NORWEGIAN_FIRE_1975"

_outcomes = {}


def norwegian_path():
    """Location of the user-supplied 1975 claims file, or None."""
    env = os.environ.get(NORWEGIAN_ENV)
    candidates = [Path(env)] if env else []
    candidates.append(DATA_DIR / "norwegianfire_1975.csv")
    for p in candidates:
        if p.is_file():
            return p
    return None


@pytest.fixture
def norwegian_file():
    path = norwegian_path()
    if path is None:
        pytest.skip(f"Norwegian 1975 claims file not supplied (set {NORWEGIAN_ENV})")
    return path


def pytest_runtest_logreport(report):
    label = getattr(report, "acceptance_label", None)
    if label is None:
        return
    if report.when == "call" or (report.when == "setup" and not report.passed):
        if report.passed:
            state = "PASS"
        elif report.skipped:
            state = "SKIP"
        else:
            state = "FAIL"
        _outcomes.setdefault(label, []).append(state)


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    marker = item.get_closest_marker("acceptance")
    if marker is not None:
        outcome.get_result().acceptance_label = marker.args[0]


def pytest_terminal_summary(terminalreporter):
    if not _outcomes:
        return
    terminalreporter.section("acceptance criteria")
    for label, states in _outcomes.items():
        if "FAIL" in states:
            state = "FAIL"
        elif all(s == "SKIP" for s in states):
            state = "SKIP"
        else:
            state = "PASS"
        terminalreporter.write_line(f"{state}  {label}")
