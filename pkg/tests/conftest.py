import sys
from pathlib import Path

import pytest
from hypothesis import settings

sys.path.insert(0, str(Path(__file__).parent))

from kamienny.modular_symbols import PresentationCache  # noqa: E402
from kamienny.projective_line import PrimePowerLevel  # noqa: E402

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")

ACCEPTANCE_LINES: list[str] = []

_CACHE = PresentationCache(None)


def presentation(q: int):
    return _CACHE.get(PrimePowerLevel.from_q(q))


@pytest.fixture(scope="session")
def pres():
    return presentation


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
