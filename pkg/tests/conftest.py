import json
from pathlib import Path

import pytest

from pepr.features import BugFeatures, LineFeatures
from pepr.history import FixStatus, HistoryStore

FIXTURES = Path(__file__).parent / "fixtures"


@pytest.fixture(scope="session")
def fixture_source() -> str:
    return (FIXTURES / "Inventory.java").read_text(encoding="utf-8")


@pytest.fixture(scope="session")
def fixture_labels() -> list[dict]:
    return json.loads((FIXTURES / "labels.json").read_text(encoding="utf-8"))["labels"]


@pytest.fixture(scope="session")
def log_dir() -> Path:
    return FIXTURES / "logs"


def make_line(line_id=1, bf1="Invocation", bf2=(), bf4=None) -> LineFeatures:
    return LineFeatures(line_id=line_id, bf1=bf1, bf2=frozenset(bf2), bf4=bf4)


def make_bug(*line_specs, bug_id="bug") -> BugFeatures:
    """Each spec is (bf1, bf2-iterable, bf4) or a LineFeatures."""
    lines = []
    for i, spec in enumerate(line_specs, start=1):
        if isinstance(spec, LineFeatures):
            lines.append(spec)
        else:
            bf1, bf2, bf4 = spec
            lines.append(make_line(i, bf1, bf2, bf4))
    return BugFeatures(bug_id=bug_id, lines=lines)


_seed_counter = 0


def seed_counts(store: HistoryStore, tool: str, kind: str, value: str,
                fail: int, correct: int) -> None:
    """Drive (tool, kind, value) counters to exact values via update()."""
    global _seed_counter
    store.ensure_tool(tool)
    for status, times in ((FixStatus.CORRECT, correct), (FixStatus.FAIL, fail)):
        for _ in range(times):
            _seed_counter += 1
            if kind == "BF1":
                bug = make_bug((value, (), None), bug_id=f"seed-{_seed_counter}")
            else:
                # BF4 updates ride on a throwaway BF1 so only the target
                # key's ratio is meaningful
                bug = make_bug(
                    (f"Other(Seed{_seed_counter})", (), value),
                    bug_id=f"seed-{_seed_counter}",
                )
            store.update(tool, bug, status)
