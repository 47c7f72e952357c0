from __future__ import annotations

from pathlib import Path

import pytest

from fitodx import KnowledgeBase, load_kb_file

REPO_ROOT = Path(__file__).resolve().parent.parent
REFERENCE_KB_PATH = REPO_ROOT / "kb" / "reference.fdx"
CORPUS_DIR = Path(__file__).resolve().parent / "corpus"

ACCEPTANCE_VERDICTS: list[str] = []


def record_verdict(line: str) -> None:
    """Collect an acceptance-criterion verdict for the end-of-run summary."""
    ACCEPTANCE_VERDICTS.append(line)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_VERDICTS:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_VERDICTS:
            terminalreporter.write_line(line)


@pytest.fixture(scope="session")
def reference_kb() -> KnowledgeBase:
    result = load_kb_file(REFERENCE_KB_PATH)
    assert result.ok, [str(d) for d in result.diagnostics]
    return result.kb
