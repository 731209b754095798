import itertools

import pytest
from hypothesis import settings

from fpoisson.measure import FpmParams

settings.register_profile("fpoisson", max_examples=40, deadline=None, derandomize=True)
settings.load_profile("fpoisson")

LAMBDAS = (0.5, 1.0, 2.0)
BETAS = (0.25, 0.5, 0.75, 1.0)
GRID = [FpmParams(lam, beta) for lam, beta in itertools.product(LAMBDAS, BETAS)]


def cell_id(p):
    return f"lam{p.lam:g}-beta{p.beta:g}"


@pytest.fixture(params=GRID, ids=cell_id)
def cell(request):
    return request.param


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import REPORT
    except ImportError:
        return
    if REPORT:
        terminalreporter.section("acceptance criteria")
        for i in sorted(REPORT):
            terminalreporter.write_line(REPORT[i])
