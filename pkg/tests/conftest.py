import contextlib

import pytest

_KEY = pytest.StashKey[dict]()


def pytest_configure(config):
    config.stash[_KEY] = {}


@pytest.fixture
def criterion(request):
    """Context manager recording one acceptance line: pass unless the block raises."""
    table = request.config.stash[_KEY]

    @contextlib.contextmanager
    def record(number, label):
        table[number] = (label, "FAIL", "")
        try:
            yield
        except BaseException as exc:
            table[number] = (label, "FAIL", str(exc).splitlines()[0][:100] if str(exc) else "")
            raise
        table[number] = (label, "PASS", "")

    return record


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    table = config.stash.get(_KEY, {})
    if not table:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(table):
        label, status, why = table[number]
        line = f"criterion {number:>2}: {status}  {label}"
        terminalreporter.write_line(line + (f"  ({why})" if why else ""))
