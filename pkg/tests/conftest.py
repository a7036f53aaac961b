import numpy as np
import pytest
from hypothesis import settings

settings.register_profile("default", deadline=None, max_examples=60)
settings.load_profile("default")

ACCEPTANCE = pytest.StashKey[dict]()


def pytest_configure(config):
    config.stash[ACCEPTANCE] = {}


def pytest_terminal_summary(terminalreporter, config):
    log = config.stash.get(ACCEPTANCE, {})
    if not log:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(log):
        title, passed, detail = log[number]
        terminalreporter.write_line(f"[{'PASS' if passed else 'FAIL'}] {number}. {title}: {detail}")


@pytest.fixture
def acceptance(request):
    """``record(number, title, passed, detail)`` for the acceptance summary."""
    log = request.config.stash[ACCEPTANCE]

    def record(number, title, passed, detail):
        log[number] = (title, bool(passed), detail)
        print(f"[{'PASS' if passed else 'FAIL'}] {number}. {title}: {detail}")
        return bool(passed)

    return record


@pytest.fixture
def rng():
    return np.random.default_rng(20240917)
