import pytest

from energycoop.demand import TrafficProcess, demand_distribution


@pytest.fixture
def poisson5():
    return demand_distribution(TrafficProcess.from_quantity(5.0))


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if not RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for key, (ok, detail) in RESULTS.items():
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  {key}: {detail}")
