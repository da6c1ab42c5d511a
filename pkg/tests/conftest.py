from __future__ import annotations

from pathlib import Path

import pytest

DATA_DIR = Path(__file__).parent / "data"
TIMEML_DIR = DATA_DIR / "timeml"


@pytest.fixture(scope="session")
def timeml_dir() -> Path:
    return TIMEML_DIR


@pytest.fixture(scope="session")
def fixture_docs(timeml_dir):
    from chronoboard.timeml import parse_timeml

    return [
        parse_timeml(path.read_text(encoding="utf-8"), default_doc_id=path.stem)
        for path in sorted(timeml_dir.glob("*.tml"))
    ]


@pytest.fixture(scope="session")
def fixture_windows(fixture_docs):
    from chronoboard.timeml import split_sentences

    windows = []
    for doc in fixture_docs:
        windows.extend(split_sentences(doc))
    return windows
