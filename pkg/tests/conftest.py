from pathlib import Path

import pytest

from apne import circuit as circ

DATA = Path(__file__).parent / "data"

# name -> number of satisfying assignments (by hand)
SUITE_SAT = {
    "sat_nand": 3,
    "sat_and": 1,
    "sat_three": 5,
    "unsat_contradiction": 0,
    "unsat_pair": 0,
    "unsat_three": 0,
}


def load_suite():
    return {name: circ.load(DATA / f"{name}.net") for name in SUITE_SAT}


@pytest.fixture(scope="session")
def suite():
    return load_suite()


# one line per acceptance criterion, printed after the run
ACCEPTANCE = []


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number, title, ok, detail in sorted(ACCEPTANCE):
        terminalreporter.write_line(f"criterion {number}: {'PASS' if ok else 'FAIL'}  {title}  [{detail}]")
