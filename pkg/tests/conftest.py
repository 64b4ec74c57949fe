"""Shared fixtures plus a pass/fail summary line per acceptance criterion."""

from __future__ import annotations

import re

import pytest

from tempo_bgp.fixtures import TA_WIDTHS, load_bgp, load_interactions, load_ta


@pytest.fixture(scope="session")
def interactions():
    return load_interactions()


@pytest.fixture(scope="session")
def bgp():
    names = (
        "cycle2",
        "cycle2u",
        "path2",
        "path3",
        "cycle3",
        "cycle4",
        "star2",
        "example1",
        "office",
    )
    return {name: load_bgp(name) for name in names}


@pytest.fixture(scope="session")
def ta():
    return {name: load_ta(name) for name in TA_WIDTHS}


_ACCEPTANCE = re.compile(r"test_acceptance\.py::test_criterion_(\d+)_(\w+)")
_acceptance_results: dict[str, str] = {}


def pytest_runtest_logreport(report):
    m = _ACCEPTANCE.search(report.nodeid)
    if not m:
        return
    key = f"criterion {int(m.group(1)):02d} ({m.group(2)})"
    if report.when == "call":
        _acceptance_results[key] = "PASS" if report.passed else "FAIL"
    elif report.when == "setup" and report.failed:
        _acceptance_results[key] = "ERROR"


def pytest_terminal_summary(terminalreporter):
    if not _acceptance_results:
        return
    terminalreporter.write_sep("-", "acceptance criteria")
    for key in sorted(_acceptance_results):
        terminalreporter.write_line(f"{key}: {_acceptance_results[key]}")
