import pytest

from shuffleword import catalog
from shuffleword.words import to_str, word

_ACCEPTANCE: list[str] = []

G_RULES = {"0": "0121", "1": "032", "2": "013", "3": "0302"}
H_RULES = {"0": "012", "1": "02", "2": "1"}
HP_RULES = {"0": "210", "1": "20", "2": "1"}


@pytest.fixture
def hall():
    return catalog.word("hall")


@pytest.fixture
def gfix():
    return catalog.word("g-fix")


@pytest.fixture
def s():
    """Short alias: digit string -> word."""
    return word


@pytest.fixture
def t():
    return to_str


@pytest.fixture
def criterion(request):
    """Record one PASS/FAIL line per acceptance criterion for the summary."""
    lines = {}

    def record(label: str, ok: bool, detail: str = ""):
        lines[label] = f"{'PASS' if ok else 'FAIL'}  {label}" + (f": {detail}" if detail else "")
        _ACCEPTANCE.append(lines[label])
        return ok

    yield record
    if not lines:
        _ACCEPTANCE.append(f"FAIL  {request.node.name}: no result recorded")


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in _ACCEPTANCE:
            terminalreporter.write_line(line)
