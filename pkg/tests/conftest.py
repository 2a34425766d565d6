import os
import sys

import pytest
from hypothesis import HealthCheck, settings

sys.path.insert(0, os.path.dirname(__file__))

settings.register_profile(
    "default", max_examples=40, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")


@pytest.fixture(scope="session")
def conlon_6_5():
    from hdx.constructions import build_conlon, find_sidon_set

    return build_conlon(6, find_sidon_set(6, 5, seed=1))


@pytest.fixture(scope="session")
def k222():
    from hdx.constructions import complete_multipartite_base

    return complete_multipartite_base(3, 2)


def pytest_terminal_summary(terminalreporter):
    from acceptance_log import summary_lines

    lines = summary_lines()
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
