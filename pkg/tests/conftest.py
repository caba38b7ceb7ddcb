import numpy as np
import pytest


@pytest.fixture
def example_panel():
    return np.array([[0.9, 0.1], [0.05, 0.95], [0.2, 0.8]])


def random_panel(rng, n_max=20, z_max=8, n_min=1, z_min=2):
    n = int(rng.integers(n_min, n_max + 1))
    z = int(rng.integers(z_min, z_max + 1))
    return rng.dirichlet(np.ones(z), size=n)


_acceptance = {}


def pytest_runtest_logreport(report):
    if "test_acceptance.py" in report.nodeid and (report.when == "call" or report.failed):
        name = report.nodeid.rsplit("::", 1)[-1]
        if report.failed or name not in _acceptance:
            _acceptance[name] = report.outcome


def pytest_terminal_summary(terminalreporter):
    if not _acceptance:
        return
    from test_acceptance import CRITERIA

    terminalreporter.section("acceptance criteria")
    for name, desc in CRITERIA.items():
        outcome = _acceptance.get(name)
        if outcome is None:
            continue
        status = "PASS" if outcome == "passed" else "FAIL"
        terminalreporter.write_line(f"[{status}] {desc}")
