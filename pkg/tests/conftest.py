import pytest

# (criterion, passed, detail) lines recorded by test_acceptance
ACCEPTANCE_LINES = []


@pytest.fixture
def acceptance_line():
    def record(criterion, passed, detail):
        line = f"ACCEPTANCE {criterion}: {'PASS' if passed else 'FAIL'} {detail}"
        ACCEPTANCE_LINES.append(line)
        print(line)
        return passed

    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
