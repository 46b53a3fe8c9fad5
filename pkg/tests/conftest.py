import pytest
from hypothesis import HealthCheck, settings

from forestswap.graph import MultiGraph

settings.register_profile("default", max_examples=60, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


@pytest.fixture
def k4():
    return MultiGraph(4, ((0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)))


@pytest.fixture
def c3():
    return MultiGraph(3, ((0, 1), (0, 2), (1, 2)))


@pytest.fixture
def doubled_triangle():
    # every triangle edge doubled: 6 edges = 3 * rank
    return MultiGraph(3, ((0, 1), (0, 1), (0, 2), (0, 2), (1, 2), (1, 2)))


_ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def acceptance_log():
    """Collects one verdict line per acceptance criterion for the terminal summary."""
    return _ACCEPTANCE_LINES.append


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in _ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
