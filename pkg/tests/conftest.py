import pathlib

import pytest

DATA_DIR = pathlib.Path(__file__).parent / "data"

# filled by tests/test_acceptance.py, reported at the end of the run
ACCEPTANCE_RESULTS = {}


@pytest.fixture
def data_dir():
    return DATA_DIR


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(ACCEPTANCE_RESULTS):
        ok, detail = ACCEPTANCE_RESULTS[number]
        terminalreporter.write_line(f"criterion {number:2d}: {'PASS' if ok else 'FAIL'}  {detail}")
