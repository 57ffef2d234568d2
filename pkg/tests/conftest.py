import time

import pytest

_LINES = []


class Verdict:
    """Collects one PASS/FAIL line per acceptance criterion."""

    def __init__(self, name):
        self.name = name
        self.start = time.perf_counter()

    def __call__(self, ok, detail):
        took = time.perf_counter() - self.start
        line = f"{'PASS' if ok else 'FAIL'} {self.name}: {detail} [{took:.2f} s]"
        _LINES.append(line)
        print(line)
        return ok


@pytest.fixture
def verdict(request):
    return Verdict(request.node.name.removeprefix("test_"))


def pytest_terminal_summary(terminalreporter):
    if _LINES:
        terminalreporter.section("acceptance criteria")
        for line in _LINES:
            terminalreporter.write_line(line)
