import numpy as np
import pytest
from hypothesis import strategies as st

from graphon_norms import StepGraphon, make_step_kernel


@st.composite
def step_kernels(draw, n_min=1, n_max=6, lo=-1.0, hi=1.0):
    n = draw(st.integers(n_min, n_max))
    raw = draw(st.lists(st.floats(0.05, 1.0), min_size=n, max_size=n))
    vals = draw(st.lists(st.floats(lo, hi), min_size=n * (n + 1) // 2, max_size=n * (n + 1) // 2))
    weights = np.asarray(raw) / np.sum(raw)
    values = np.zeros((n, n))
    iu = np.triu_indices(n)
    values[iu] = vals
    values.T[iu] = vals
    k = make_step_kernel(values, weights)
    if lo >= 0.0 and hi <= 1.0:
        return StepGraphon(k.weights, k.values)
    return k


def step_graphons(n_min=1, n_max=6):
    return step_kernels(n_min=n_min, n_max=n_max, lo=0.0, hi=1.0)


@pytest.fixture
def constant_half():
    return make_step_kernel([[0.5]], [1.0])


@pytest.fixture
def bipartite():
    return make_step_kernel([[0.0, 1.0], [1.0, 0.0]], [0.5, 0.5])


@pytest.fixture
def zero_kernel():
    return make_step_kernel(np.zeros((3, 3)), [1 / 3, 1 / 3, 1 / 3])


def pytest_terminal_summary(terminalreporter):
    import sys

    acceptance = sys.modules.get("test_acceptance")
    if acceptance is None or not acceptance.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(acceptance.RESULTS):
        terminalreporter.write_line(acceptance.RESULTS[number])
