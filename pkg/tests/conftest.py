from functools import reduce

import numpy as np
import pytest

SINGLE = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}


def dense(label: str) -> np.ndarray:
    """Kronecker-product matrix of a Pauli label, built independently of the package."""
    return reduce(np.kron, (SINGLE[c] for c in label))


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


# --- per-criterion summary for the acceptance suite ----------------------------

_criteria: dict[int, list[tuple[str, str]]] = {}


def pytest_runtest_logreport(report):
    marker = _criterion_of.get(report.nodeid)
    if marker is None:
        return
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        if hasattr(report, "wasxfail"):
            outcome = "failed (expected)" if report.outcome == "skipped" else "failed"
        else:
            outcome = report.outcome
        _criteria.setdefault(marker, []).append((report.nodeid.split("::")[-1], outcome))


_criterion_of: dict[str, int] = {}


def pytest_collection_modifyitems(items):
    for item in items:
        mark = item.get_closest_marker("criterion")
        if mark is not None:
            _criterion_of[item.nodeid] = mark.args[0]


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(_criteria):
        results = _criteria[k]
        bad = [name for name, outcome in results if outcome != "passed"]
        status = "PASS" if not bad else "FAIL"
        line = f"criterion {k}: {status} ({len(results) - len(bad)}/{len(results)} checks)"
        if bad:
            line += " failing: " + ", ".join(bad)
        terminalreporter.write_line(line)
