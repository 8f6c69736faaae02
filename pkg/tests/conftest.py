import sys

import pytest
from hypothesis import HealthCheck, settings

from linkhom import complex as cx
from linkhom.diagram import Parity

settings.register_profile(
    "default", max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")


@pytest.fixture(scope="session")
def cocycles():
    return {p: cx.builtin_cocycles(p) for p in Parity}


@pytest.fixture(scope="session")
def pool():
    """Canonical diagrams on up to two strands, orders 1 and 2, both parities."""
    out = []
    for p in Parity:
        for m in (1, 2):
            for t in (1, 2):
                for deg in cx.degrees_in_order(m, t):
                    out.extend(cx.enumerate_diagrams(m, t, deg, p))
    return out


def pytest_terminal_summary(terminalreporter):
    test_acceptance = sys.modules.get("tests.test_acceptance")
    if test_acceptance is None or not test_acceptance.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(test_acceptance.RESULTS):
        ok, title, detail = test_acceptance.RESULTS[number]
        line = f"{'PASS' if ok else 'FAIL'}  criterion {number:>2}: {title}"
        if detail:
            line += f"  ({detail})"
        terminalreporter.write_line(line)
