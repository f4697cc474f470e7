import os
import sys

import pytest
from hypothesis import HealthCheck, settings

from hyperforge import catalog

settings.register_profile(
    "repo", derandomize=True, deadline=None, max_examples=60,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "repo"))


@pytest.fixture(scope="session")
def Q2():
    return catalog.by_name("Q2")


@pytest.fixture(scope="session")
def K():
    return catalog.by_name("K")


@pytest.fixture(scope="session")
def fan4():
    return catalog.by_name("FAN4")


@pytest.fixture(scope="session")
def fan8():
    return catalog.by_name("FAN8")


def pytest_terminal_summary(terminalreporter):
    mod = next((m for name, m in list(sys.modules.items())
                if name.endswith("test_acceptance") and hasattr(m, "RESULTS")), None)
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance")
    for n in sorted(mod.RESULTS):
        terminalreporter.write_line(mod.RESULTS[n])
