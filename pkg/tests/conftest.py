import random

import pytest

from latticeknots.bracket import precompute_cube
from latticeknots.knotdb import default_table
from latticeknots.lattice import build_diagram

_property_outcomes: dict[str, str] = {}


@pytest.fixture(scope="session")
def table():
    return default_table()


@pytest.fixture(scope="session")
def diagrams():
    return {n: build_diagram(n) for n in range(5)}


@pytest.fixture(scope="session")
def cube5(diagrams):
    """Loop counts of all 2^25 smoothings of the 5x5 diagram."""
    return precompute_cube(diagrams[2])


@pytest.fixture
def rng():
    return random.Random(20240611)


def pytest_runtest_logreport(report):
    if "property_suite" not in report.keywords:
        return
    if report.failed or (report.when == "call" and report.passed):
        if _property_outcomes.get(report.nodeid) != "failed":
            _property_outcomes[report.nodeid] = report.outcome


def pytest_terminal_summary(terminalreporter, config):
    import test_acceptance as acc

    results = dict(config.stash.get(acc.ACCEPTANCE_KEY, {}))
    if _property_outcomes:
        failed = sum(v == "failed" for v in _property_outcomes.values())
        results[6] = (failed == 0, f"{len(_property_outcomes) - failed}/{len(_property_outcomes)} "
                                   "property tests passed")
    if not results:
        return
    terminalreporter.section("acceptance")
    for k in sorted(acc.TITLES):
        if k in results:
            terminalreporter.write_line(acc.line(k, *results[k]))
        else:
            terminalreporter.write_line(f"criterion {k} [NOT RUN] {acc.TITLES[k]}")
