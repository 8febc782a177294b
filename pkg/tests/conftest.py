import numpy as np
import pytest

from bellquant import random_haar_state

ACCEPTANCE_LINES = []


@pytest.fixture
def record_criterion():
    def _record(number, title, passed, detail=""):
        line = f"{'PASS' if passed else 'FAIL'} criterion {number}: {title}"
        if detail:
            line += f" [{detail}]"
        ACCEPTANCE_LINES.append(line)
        print(line)
        return passed

    return _record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def haar_states(d1, d2, n, base=0):
    return [random_haar_state(d1, d2, base + i) for i in range(n)]


def brute_partial_trace(rho, d1, d2, keep):
    """Index-by-index partial trace, independent of the einsum route."""
    out = np.zeros((d1, d1) if keep == 1 else (d2, d2), dtype=complex)
    for a in range(out.shape[0]):
        for b in range(out.shape[0]):
            if keep == 1:
                out[a, b] = sum(rho[a * d2 + j, b * d2 + j] for j in range(d2))
            else:
                out[a, b] = sum(rho[j * d2 + a, j * d2 + b] for j in range(d1))
    return out
