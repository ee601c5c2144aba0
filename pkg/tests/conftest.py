import os

import pytest

ACCEPTANCE_LINES = []


@pytest.fixture
def acceptance_line():
    def record(code, passed, text):
        line = f"[{'PASS' if passed else 'FAIL'}] {code}: {text}"
        ACCEPTANCE_LINES.append(line)
        print(line)
        return passed

    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
        backend = os.environ.get("XPROB_PURE_PYTHON", "")
        from xprob import BACKEND

        terminalreporter.write_line(f"kernel backend: {BACKEND}" + (" (forced)" if backend else ""))
