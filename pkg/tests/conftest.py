import random

import pytest
from hypothesis import HealthCheck, settings, strategies as st

from tambara.groups import cyclic, klein4, symmetric

settings.register_profile(
    "default",
    deadline=None,
    max_examples=40,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("default")

SMALL_GROUPS = {
    "C2": cyclic(2),
    "C3": cyclic(3),
    "C4": cyclic(4),
    "K4": klein4(),
    "S3": symmetric(3),
}

groups = st.sampled_from(sorted(SMALL_GROUPS)).map(SMALL_GROUPS.get)
rngs = st.integers(min_value=0, max_value=2**32 - 1).map(random.Random)

ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def acceptance_log():
    return ACCEPTANCE_LINES


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
