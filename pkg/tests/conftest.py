import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from qcrt.runtime import QpuManager  # noqa: E402


@pytest.fixture(autouse=True)
def _no_leftover_qpu():
    """Tests start and end with an uninitialised main worker."""
    QpuManager.instance().remove()
    yield
    QpuManager.instance().remove()


@pytest.fixture
def tight_switching():
    """Force frequent GIL hand-offs to shake out interleavings."""
    old = sys.getswitchinterval()
    sys.setswitchinterval(1e-6)
    yield
    sys.setswitchinterval(old)


def pytest_terminal_summary(terminalreporter):
    from acceptance_log import LINES

    if LINES:
        terminalreporter.section("acceptance criteria")
        for line in LINES:
            terminalreporter.write_line(line)
