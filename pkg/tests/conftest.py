import sys

import numpy as np
import pytest

from thermoform import catalog


@pytest.fixture(scope="session")
def nottot():
    return catalog.build("nottot").system


@pytest.fixture(scope="session")
def recoded():
    return catalog.build("nottot-recoded").system


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def pytest_terminal_summary(terminalreporter):
    module = next((m for name, m in sys.modules.items() if name.endswith("test_acceptance")), None)
    lines = getattr(module, "LINES", [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines, key=lambda s: int(s.split()[1])):
            terminalreporter.write_line(line)
