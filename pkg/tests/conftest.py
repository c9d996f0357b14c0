from pathlib import Path

import pytest
from hypothesis import settings

from artinrigid.graph_core import DefiningGraph, parse

settings.register_profile("repo", deadline=None)
settings.load_profile("repo")

CORPUS = Path(__file__).resolve().parents[1] / "corpus"


def load(name: str) -> DefiningGraph:
    return parse((CORPUS / f"{name}.graph").read_text())


def corpus_names():
    return sorted(p.stem for p in CORPUS.glob("*.graph") if p.stem != "bad_label")


@pytest.fixture
def corpus():
    return load


ACCEPTANCE = {}


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for n in sorted(ACCEPTANCE):
            terminalreporter.write_line(ACCEPTANCE[n])
