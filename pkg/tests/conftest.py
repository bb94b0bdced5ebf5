from pathlib import Path

import pytest
from hypothesis import HealthCheck, settings

from nmprob.kb import parse_kb

settings.register_profile(
    "default", deadline=None, max_examples=60, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")

KB_DIR = Path(__file__).resolve().parent.parent / "kbs"


def load(name):
    return parse_kb((KB_DIR / name).read_text())


@pytest.fixture
def kb_dir():
    return KB_DIR


@pytest.fixture
def igor_a1():
    return load("igor_a1.npr")


@pytest.fixture
def igor_a2():
    return load("igor_a2.npr")


@pytest.fixture
def neptune_a1():
    return load("neptune_a1.npr")


@pytest.fixture
def neptune_a2():
    return load("neptune_a2.npr")


@pytest.fixture
def evidential():
    return load("evidential.npr")


# one "CRITERION n PASS|FAIL ..." line per acceptance check, echoed at the end
ACCEPTANCE = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE:
            terminalreporter.write_line(line)
