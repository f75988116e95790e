import numpy as np
import pytest

from deltainv import ExpPolynomial


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def poly(*coeffs):
    return ExpPolynomial.polynomial(coeffs)


def expo(lam, *coeffs):
    return ExpPolynomial.exponential(lam, coeffs or (1,))


_ACCEPTANCE_LINES = []


@pytest.fixture
def acceptance_log():
    return _ACCEPTANCE_LINES


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(_ACCEPTANCE_LINES, key=lambda s: int(s.split()[2])):
            terminalreporter.write_line(line)
