import numpy as np
import pytest

_ACCEPTANCE_KEY = pytest.StashKey[list]()


def pytest_configure(config):
    config.stash[_ACCEPTANCE_KEY] = []


@pytest.fixture
def report(request):
    """Record one acceptance line: ``report(name, passed, detail)``."""
    lines = request.config.stash[_ACCEPTANCE_KEY]

    def _report(name, passed, detail=""):
        lines.append(f"[{'PASS' if passed else 'FAIL'}] {name}: {detail}")
        print(lines[-1])
        return passed

    return _report


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = config.stash.get(_ACCEPTANCE_KEY, [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)

