import numpy as np
import pytest

from emoframe.solution import BitVector, Individual


def make_pop(points):
    """Valid individuals with the given objective vectors and dummy genotypes."""
    pop = []
    for k, p in enumerate(points):
        ind = Individual(BitVector(np.array([bool(b) for b in np.binary_repr(k, 16)])))
        ind.set_objectives(p)
        pop.append(ind)
    return pop


@pytest.fixture
def pop_of():
    return make_pop


ACCEPTANCE_RESULTS = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(ACCEPTANCE_RESULTS):
        ok, detail = ACCEPTANCE_RESULTS[number]
        terminalreporter.write_line(f"criterion {number:2d}: {'PASS' if ok else 'FAIL'}  {detail}")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    if call.when == "call":
        item.rep_call = outcome.get_result()


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n): acceptance criterion number")
