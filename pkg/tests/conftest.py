import pytest

from hbzeros import SolverConfig, fixed_point_solve
from hbzeros.solver import extended_zeros

ACCEPTANCE_LINES = []


@pytest.fixture(scope="session")
def report400():
    return fixed_point_solve(SolverConfig(N=400))


@pytest.fixture(scope="session")
def zeros400(report400):
    return report400.zeros()


@pytest.fixture(scope="session")
def zeros_ext(report400):
    # the 400-row solve continued to 4096 rows through B
    return extended_zeros(report400, 4096)


@pytest.fixture
def acceptance_line():
    def emit(criterion, passed, detail):
        line = f"[{'PASS' if passed else 'FAIL'}] criterion {criterion}: {detail}"
        print(line)
        ACCEPTANCE_LINES.append(line)
        return passed
    return emit


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
