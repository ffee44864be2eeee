from pathlib import Path

import pytest
from hypothesis import HealthCheck, settings

from graphkern.graph import LabeledGraph

settings.register_profile(
    "default", max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")

DATA = Path(__file__).parent / "data"


@pytest.fixture
def data_dir():
    return DATA


@pytest.fixture
def mutag_dir():
    return DATA / "MUTAG"


@pytest.fixture
def tiny_dir():
    return DATA / "TINY"


def bonds(labels, edges=()):
    return LabeledGraph.from_bonds(labels, edges)


@pytest.fixture
def cs_edge():
    """Two carbons joined by a single bond."""
    return bonds(["C", "C"], [(0, 1, "s")])


@pytest.fixture
def path3():
    return bonds(["C", "C", "C"], [(0, 1), (1, 2)])


@pytest.fixture
def triangle():
    return bonds(["C", "C", "C"], [(0, 1), (1, 2), (0, 2)])


def pytest_terminal_summary(terminalreporter):
    import sys

    acceptance = sys.modules.get("test_acceptance")
    if acceptance is None or not acceptance.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in acceptance.summary_lines():
        terminalreporter.write_line(line)
