import time

import pytest

_ACCEPTANCE = []


class _Recorder:
    def __init__(self, number, title):
        self.number = number
        self.title = title
        self.start = time.perf_counter()

    def check(self, passed, detail, max_seconds=None):
        elapsed = time.perf_counter() - self.start
        if max_seconds is not None and elapsed > max_seconds:
            passed = False
            detail += f"; runtime {elapsed:.1f}s exceeds {max_seconds}s"
        line = f"[{'PASS' if passed else 'FAIL'}] {self.number:>2}. {self.title}: {detail} ({elapsed:.2f}s)"
        _ACCEPTANCE.append((self.number, line))
        print(line)
        assert passed, line


@pytest.fixture
def criterion():
    return _Recorder


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for _, line in sorted(_ACCEPTANCE):
        terminalreporter.write_line(line)
