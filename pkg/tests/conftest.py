import pytest

from ksupplier_dna.model import validate_instance

# ten vertices so the worked strands (which span v1..v10) fit; weights are made up
FIG1_LIKE = {
    "n": 10,
    "edges": [[1, 2, 2], [2, 3, 3], [3, 4, 1], [4, 5, 6], [5, 6, 2], [6, 1, 4], [2, 5, 5],
              [7, 8, 1], [8, 9, 2], [9, 10, 1], [10, 1, 3], [6, 7, 2]],
    "clients": [2, 5],
    "facilities": [1, 3, 4, 6],
    "k": 3,
}

TINY = {"n": 2, "edges": [[1, 2, 3]], "clients": [1], "facilities": [2], "k": 1}


@pytest.fixture
def tiny():
    return validate_instance(dict(TINY))


@pytest.fixture(scope="session")
def fig1_like():
    return validate_instance(dict(FIG1_LIKE))


def pytest_terminal_summary(terminalreporter):
    import sys

    module = sys.modules.get("test_acceptance")
    if module is not None and module.VERDICTS:
        terminalreporter.section("acceptance")
        for line in module.VERDICTS:
            terminalreporter.write_line(line)
