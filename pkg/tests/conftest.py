import numpy as np
import pytest
from hypothesis import strategies as st
from hypothesis.extra import numpy as hnp

from bezout import GOLDEN_Q, CoeffSeries, SolveConfig, example, solve

Q = GOLDEN_Q
N_GOLD = np.array([[1 - Q, -(1 - Q)], [Q, -Q]])


def y_gold(nu):
    """Closed-form Taylor coefficient of Y for G = [1+z, -z]."""
    if nu == 0:
        return np.eye(2)
    return (-Q) ** nu / (1 - 2 * Q) * N_GOLD


def geometric(vec, deg):
    """Coefficients of ``vec / (1 + q z)`` up to ``deg``."""
    return np.array([(-Q) ** k * np.asarray(vec, dtype=complex) for k in range(deg + 1)])


def xi_gold(deg):
    return CoeffSeries(geometric([[1.0], [1 - Q]], deg))


def theta_gold(deg):
    # sqrt(q)/(1 + q z) [z; 1 + z]
    base = geometric([[0.0], [1.0]], deg)
    shifted = np.concatenate([np.zeros((1, 2, 1)), geometric([[1.0], [1.0]], deg - 1)])
    return CoeffSeries(np.sqrt(Q) * (base + shifted))


@pytest.fixture(scope="session")
def gold():
    return example("polynomial_1x2")


@pytest.fixture(scope="session")
def gold_data(gold):
    return solve(gold, SolveConfig(section_blocks=128, output_degree=64))


def complex_arrays(shape, bound=2.0):
    floats = st.floats(-bound, bound, allow_nan=False, allow_infinity=False, width=64)
    return st.tuples(hnp.arrays(float, shape, elements=floats),
                     hnp.arrays(float, shape, elements=floats)).map(lambda t: t[0] + 1j * t[1])


@st.composite
def series(draw, rows=None, cols=None, max_len=5, lo=0):
    r = draw(st.integers(1, 3)) if rows is None else rows
    c = draw(st.integers(1, 3)) if cols is None else cols
    n = draw(st.integers(1, max_len))
    return CoeffSeries(draw(complex_arrays((n, r, c))), lo)


ACCEPTANCE = {}


def record(number, passed, detail):
    """Store and print the outcome of one acceptance criterion."""
    line = f"criterion {number}: {'PASS' if passed else 'FAIL'}  {detail}"
    ACCEPTANCE[number] = line
    print(line)
    return passed


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for k in sorted(ACCEPTANCE):
            terminalreporter.write_line(ACCEPTANCE[k])
