import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from dialup.noisers import Resources  # noqa: E402
from dialup.phonology import load_inventory, load_table  # noqa: E402
from dialup.resources import (  # noqa: E402
    build_vocabulary,
    extract_function_words,
    extract_suffixes,
    parse_conllu,
    train_char_ngram,
)

FIXTURES = Path(__file__).parent / "fixtures"
GOLDEN = Path(__file__).parent / "golden"


def read_lines(name):
    return (FIXTURES / name).read_text(encoding="utf-8").splitlines()


@pytest.fixture(scope="session")
def fixtures_dir():
    return FIXTURES


@pytest.fixture(scope="session")
def inventory():
    return load_inventory()


@pytest.fixture(scope="session")
def tur_table():
    return load_table("latn_tur")


@pytest.fixture(scope="session")
def tr_resources(inventory, tur_table):
    """Resources built from the hand-written Turkish fixtures."""
    with open(FIXTURES / "tr_fixture.conllu", encoding="utf-8") as f:
        funcs = extract_function_words(parse_conllu(f))
    vocab = build_vocabulary(read_lines("tr_corpus.txt"))
    return Resources(
        inventory, tur_table, extract_suffixes(vocab, 4, 2, 100), funcs, train_char_ngram(vocab, 3), vocab
    )


# -- acceptance summary -------------------------------------------------------

ACCEPTANCE: list[str] = []


def record(criterion: str, ok: bool, detail: str) -> None:
    line = f"{'PASS' if ok else 'FAIL'}  {criterion}: {detail}"
    ACCEPTANCE.append(line)
    print(line)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE, key=lambda l: int(l.split()[1].rstrip("."))):
            terminalreporter.write_line(line)
