import numpy as np
import pytest

from lindecomp import kernels
from lindecomp.platform import make_block_fixture, make_polynomial_fixture

P = 1009

_acceptance_lines: list[str] = []


@pytest.fixture
def acceptance_report():
    def report(criterion: str, passed: bool, detail: str = "") -> None:
        _acceptance_lines.append(f"[{'PASS' if passed else 'FAIL'}] {criterion}" + (f" - {detail}" if detail else ""))

    return report


def pytest_terminal_summary(terminalreporter):
    if _acceptance_lines:
        terminalreporter.section("acceptance criteria")
        for line in _acceptance_lines:
            terminalreporter.write_line(line)


@pytest.fixture(params=kernels.available())
def each_backend(request):
    with kernels.backend(request.param):
        yield request.param


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture
def block_fixture(rng):
    return make_block_fixture(2, 2, 2, 2, P, rng, seed=12345)


@pytest.fixture
def poly_fixture(rng):
    return make_polynomial_fixture(4, P, rng, seed=12345)
