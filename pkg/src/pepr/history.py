"""Categorized repair history: per-(tool, feature) outcome counters.

History is indexed by the statement node type (BF1) and the test error
type (BF4) only. A tool's score for a feature is its correct-fix rate
``correct / (correct + fail)``; a feature never seen scores 0. Overfit
verdicts count as failures in the rate but stay distinguishable in the
session event log.
"""

from __future__ import annotations

import json
import logging
import os
import tempfile
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Iterable

from .errors import DuplicateToolError, SchemaError, UnknownTool
from .features import BugFeatures, LineFeatures, extract_bug_features

log = logging.getLogger(__name__)

SCHEMA_VERSION = 1


class FixStatus(Enum):
    CORRECT = "correct"
    OVERFIT = "overfit"
    FAIL = "fail"

    @classmethod
    def parse(cls, text: str) -> "FixStatus":
        try:
            return cls(text.strip().lower())
        except ValueError:
            raise ValueError(
                f"unknown fix status {text!r} (expected correct|overfit|fail)"
            ) from None


@dataclass(frozen=True)
class FeatureKey:
    kind: str  # "BF1" | "BF4"
    value: str


@dataclass(frozen=True)
class HistoryRecord:
    tool: str
    feature: FeatureKey
    fail_times: int
    correct_times: int


@dataclass(frozen=True)
class HistoryEvent:
    """One labelled repair result for history import."""

    bug: BugFeatures
    tool: str
    status: FixStatus


def line_feature_keys(lf: LineFeatures) -> tuple[FeatureKey, ...]:
    """History-indexed keys of one line: its BF1, plus BF4 when present."""
    keys = [FeatureKey("BF1", lf.bf1)]
    if lf.bf4 is not None:
        keys.append(FeatureKey("BF4", lf.bf4))
    return tuple(keys)


def bug_feature_keys(bug: BugFeatures) -> list[FeatureKey]:
    """Distinct history keys of a bug: each BF1 value once, plus BF4."""
    keys: list[FeatureKey] = []
    seen: set[FeatureKey] = set()
    for lf in bug.lines:
        for key in line_feature_keys(lf):
            if key not in seen:
                seen.add(key)
                keys.append(key)
    return keys


class HistoryStore:
    """Counters keyed by (tool, feature) plus the tool roster.

    Single-writer, multi-reader: score queries are safe concurrently,
    mutation goes through one writer. Saving is atomic (temp + rename).
    """

    def __init__(self) -> None:
        self._tools: dict[str, tuple[str, ...]] = {}
        self._counters: dict[tuple[str, str, str], list[int]] = {}  # [fail, correct]
        self.events: list[tuple[str, FixStatus, tuple[FeatureKey, ...]]] = []

    # --- roster -----------------------------------------------------------

    def register_tool(self, name: str, patterns: Iterable[str] = ()) -> None:
        if name in self._tools:
            raise DuplicateToolError(name)
        self._tools[name] = tuple(patterns)

    def ensure_tool(self, name: str) -> None:
        if name not in self._tools:
            self._tools[name] = ()

    def has_tool(self, name: str) -> bool:
        return name in self._tools

    def tools(self) -> list[str]:
        """Tool names in registration order."""
        return list(self._tools)

    def tool_patterns(self, name: str) -> tuple[str, ...]:
        if name not in self._tools:
            raise UnknownTool(name)
        return self._tools[name]

    # --- scores and updates -------------------------------------------------

    def history_score(self, tool: str, feature: FeatureKey) -> float:
        """Correct-fix rate for (tool, feature); 0 without history."""
        counts = self._counters.get((tool, feature.kind, feature.value))
        if not counts:
            return 0.0
        fail, correct = counts
        total = correct + fail
        return correct / total if total else 0.0

    def update(self, tool: str, bug: BugFeatures, status: FixStatus) -> list[FeatureKey]:
        """Apply one verdict: bump each of the bug's distinct keys once."""
        if tool not in self._tools:
            raise UnknownTool(tool)
        keys = bug_feature_keys(bug)
        for key in keys:
            counts = self._counters.setdefault((tool, key.kind, key.value), [0, 0])
            if status is FixStatus.CORRECT:
                counts[1] += 1
            else:  # overfit and fail both failed to fix correctly
                counts[0] += 1
        self.events.append((tool, status, tuple(keys)))
        return keys

    def import_history(self, records: Iterable[HistoryEvent]) -> list[str]:
        """Apply recorded results in order; returns per-record problems.

        Unknown tools are registered on the fly with an empty pattern set
        so that any tool with existing repair data can be onboarded.
        """
        problems: list[str] = []
        for idx, event in enumerate(records):
            try:
                self.ensure_tool(event.tool)
                self.update(event.tool, event.bug, event.status)
            except Exception as exc:  # keep going; report afterwards
                problems.append(f"record {idx}: {exc}")
        return problems

    def records(self) -> list[HistoryRecord]:
        rows = [
            HistoryRecord(tool, FeatureKey(kind, value), counts[0], counts[1])
            for (tool, kind, value), counts in self._counters.items()
        ]
        rows.sort(key=lambda r: (r.tool, r.feature.kind, r.feature.value))
        return rows

    def copy(self) -> "HistoryStore":
        dup = HistoryStore()
        dup._tools = dict(self._tools)
        dup._counters = {k: list(v) for k, v in self._counters.items()}
        return dup

    # --- persistence -----------------------------------------------------

    def to_json(self) -> dict:
        return {
            "schema_version": SCHEMA_VERSION,
            "tools": {name: {"patterns": list(pats)} for name, pats in self._tools.items()},
            "records": [
                {
                    "tool": r.tool,
                    "kind": r.feature.kind,
                    "value": r.feature.value,
                    "fail": r.fail_times,
                    "correct": r.correct_times,
                }
                for r in self.records()
            ],
        }

    def save(self, path) -> None:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=path.name, suffix=".tmp")
        try:
            with os.fdopen(fd, "w", encoding="utf-8") as fh:
                json.dump(self.to_json(), fh, indent=2)
                fh.write("\n")
            os.replace(tmp, path)
        except BaseException:
            if os.path.exists(tmp):
                os.unlink(tmp)
            raise

    @classmethod
    def from_json(cls, doc: dict) -> "HistoryStore":
        if not isinstance(doc, dict):
            raise SchemaError("history document must be a JSON object")
        version = doc.get("schema_version")
        if version != SCHEMA_VERSION:
            raise SchemaError(f"unsupported history schema version {version!r}")
        store = cls()
        tools = doc.get("tools") or {}
        if not isinstance(tools, dict):
            raise SchemaError("'tools' must be an object")
        for name, spec in tools.items():
            patterns = tuple((spec or {}).get("patterns") or ())
            store._tools[str(name)] = tuple(str(p) for p in patterns)
        for row in doc.get("records") or []:
            try:
                tool = str(row["tool"])
                kind = str(row["kind"])
                value = str(row["value"])
                fail = int(row["fail"])
                correct = int(row["correct"])
            except (KeyError, TypeError, ValueError) as exc:
                raise SchemaError(f"bad history record {row!r}: {exc}") from exc
            if kind not in ("BF1", "BF4"):
                raise SchemaError(f"bad feature kind {kind!r} in record {row!r}")
            if fail < 0 or correct < 0:
                raise SchemaError(f"negative counts in record {row!r}")
            store.ensure_tool(tool)
            store._counters[(tool, kind, value)] = [fail, correct]
        return store

    @classmethod
    def load(cls, path) -> "HistoryStore":
        try:
            with open(path, "r", encoding="utf-8") as fh:
                doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise SchemaError(f"history file {path} is not valid JSON: {exc}") from exc
        return cls.from_json(doc)


def read_history_jsonl(path) -> tuple[list[HistoryEvent], list[str]]:
    """Parse a JSON-lines history dump into importable events.

    Each line carries {tool, status, bug_id} plus either precomputed
    ``features`` or ``source_path``/``lines`` (and optional
    ``error_type``) for on-the-fly extraction. Bad lines are reported,
    not fatal.
    """
    events: list[HistoryEvent] = []
    problems: list[str] = []
    base = Path(path).parent
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            raw = raw.strip()
            if not raw:
                continue
            try:
                obj = json.loads(raw)
                tool = str(obj["tool"])
                status = FixStatus.parse(str(obj["status"]))
                bug_id = str(obj.get("bug_id") or f"record-{lineno}")
                if "features" in obj:
                    feat = obj["features"]
                    if isinstance(feat, dict) and "lines" in feat:
                        bug = BugFeatures.from_json({"bug_id": bug_id, **feat})
                    else:
                        raise ValueError("'features' must hold a 'lines' array")
                else:
                    src_path = Path(str(obj["source_path"]))
                    if not src_path.is_absolute():
                        src_path = base / src_path
                    source = src_path.read_text(encoding="utf-8")
                    line_ids = [int(x) for x in obj["lines"]]
                    bug = extract_bug_features(source, line_ids, bug_id=bug_id)
                    error_type = obj.get("error_type")
                    if error_type:
                        bug = BugFeatures(
                            bug_id=bug.bug_id,
                            lines=[
                                LineFeatures(lf.line_id, lf.bf1, lf.bf2, str(error_type))
                                for lf in bug.lines
                            ],
                        )
                events.append(HistoryEvent(bug=bug, tool=tool, status=status))
            except Exception as exc:
                problems.append(f"line {lineno}: {exc}")
    return events, problems
