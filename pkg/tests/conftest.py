from __future__ import annotations

from pathlib import Path

import pytest

REPO_ROOT = Path(__file__).resolve().parent.parent
CORPUS_DIR = REPO_ROOT / "corpus"
GOLDEN_DIR = Path(__file__).resolve().parent / "golden"

CORPUS_FILES = ("creditcard.oz", "twocards.oz")


@pytest.fixture(scope="session")
def corpus_sources() -> dict[str, str]:
    return {name: (CORPUS_DIR / name).read_text(encoding="utf-8") for name in CORPUS_FILES}


@pytest.fixture(scope="session")
def creditcard_source(corpus_sources) -> str:
    return corpus_sources["creditcard.oz"]


@pytest.fixture(scope="session")
def twocards_source(corpus_sources) -> str:
    return corpus_sources["twocards.oz"]
