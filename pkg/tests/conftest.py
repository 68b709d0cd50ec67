import pytest

from crouzeix_lab import conformal

ACCEPTANCE_LINES = []


@pytest.fixture(scope="session")
def maps():
    """g(A_k) for k = 3..6 at the default 1205-node discretization."""
    return {k: conformal.conformal_map(k, 1205) for k in (3, 4, 5, 6)}


@pytest.fixture(scope="session")
def convergence_rows():
    """a(n), b(n), g''(n) for k = 3 against the 1447-node reference."""
    return conformal.convergence_study(3, [23, 47, 95, 191, 383, 767, 1205, 1447])


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
