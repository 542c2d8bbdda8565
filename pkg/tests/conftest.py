from __future__ import annotations

import functools
import re

import pytest

from lpalgebra.explorer import explore, label_by_sequences
from lpalgebra.graphs import Digraph, initial_seed


@functools.lru_cache(maxsize=None)
def explored(n: int, kind: str = "binomial"):
    """Exchange graph of K_n, shared across the whole session."""
    return explore(initial_seed(Digraph.complete(n), kind))


@functools.lru_cache(maxsize=None)
def labeled(n: int, kind: str = "binomial"):
    return label_by_sequences(explored(n, kind))


@pytest.fixture
def graph_of():
    return explored


@pytest.fixture
def labels_of():
    return labeled


# -- acceptance reporting ----------------------------------------------------
# test_criterion_N functions call note(N, text); the summary prints one line per criterion.

_NOTES: dict = {}
_OUTCOMES: dict = {}


def note(criterion: int, text: str) -> None:
    _NOTES[criterion] = text


def pytest_addoption(parser):
    parser.addoption("--run-slow", action="store_true", help="also run the optional rank-5 exploration")


def pytest_configure(config):
    config.addinivalue_line("markers", "slow: long-running; needs --run-slow")


def pytest_collection_modifyitems(config, items):
    if config.getoption("--run-slow"):
        return
    skip = pytest.mark.skip(reason="needs --run-slow")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip)


def pytest_runtest_logreport(report):
    m = re.search(r"::test_criterion_(\w+?)(?:\[|$)", report.nodeid)
    if not m:
        return
    key = m.group(1)
    if report.when == "call" or report.outcome != "passed":
        prev = _OUTCOMES.get(key)
        if prev != "failed":
            _OUTCOMES[key] = report.outcome


def pytest_terminal_summary(terminalreporter):
    if not _OUTCOMES:
        return
    terminalreporter.write_sep("=", "acceptance criteria")

    def order(k):
        num = re.match(r"\d+", k)
        return (int(num.group()) if num else 99, k)

    for key in sorted(_OUTCOMES, key=order):
        verdict = {"passed": "PASS", "failed": "FAIL"}.get(_OUTCOMES[key], "SKIP")
        num = re.match(r"\d+", key)
        detail = _NOTES.get(int(num.group()) if num and num.group() == key else key, "")
        terminalreporter.write_line(f"criterion {key.replace('_', ' ')}: {verdict}" + (f"  {detail}" if detail else ""))
