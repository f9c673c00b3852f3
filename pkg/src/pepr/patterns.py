"""Repair-pattern registry: predicates over line features, per tool.

Ships three built-in patterns whose pre-requirements are public
knowledge (cast checker, range checker, throw-exception); the remaining
catalogued ids (P5+) are only available through user-authored configs.
"Unchecked" pre-requirements are approximated by syntactic presence of
the cast / array- or collection-access construct inside the statement.
"""

from __future__ import annotations

import fnmatch
import json
from dataclasses import dataclass, field

from .errors import DuplicatePatternId, MalformedPredicate, UnknownTool
from .features import BugFeatures, LineFeatures

# Feature class each catalogued pattern id keys on.
FEATURE_KIND_BY_PATTERN = {
    "P1": "BF3",
    "P3": "BF2",
    "P4": "BF4",
    "P5": "BF2",
    "P6": "BF1",
    "P7": "BF2",
    "P8": "BF2",
    "P9": "BF2",
    "P10": "BF3",
    "P11": "BF1",
    "P12": "BF1",
}

# P2 (null-pointer checker) matches nearly every statement, so it is
# excluded from every registry.
EXCLUDED_PATTERN_IDS = frozenset({"P2"})

PREDICATE_KINDS = frozenset(
    {
        "statement_type_in",
        "child_types_contain_any",
        "statement_and_child",
        "error_type_matches",
    }
)

ERROR_WILDCARD = "any"


@dataclass(frozen=True)
class PredicateSpec:
    """Declarative match rule evaluable against a single LineFeatures."""

    kind: str
    statement_types: frozenset[str] = frozenset()
    child_types: frozenset[str] = frozenset()
    error_patterns: tuple[str, ...] = ()

    def evaluate(self, lf: LineFeatures) -> bool:
        if self.kind == "statement_type_in":
            return lf.bf1 in self.statement_types
        if self.kind == "child_types_contain_any":
            return bool(lf.bf2 & self.child_types)
        if self.kind == "statement_and_child":
            # empty statement set = any statement type
            if self.statement_types and lf.bf1 not in self.statement_types:
                return False
            return bool(lf.bf2 & self.child_types)
        if self.kind == "error_type_matches":
            if lf.bf4 is None:
                return False
            if ERROR_WILDCARD in self.error_patterns:
                return True
            return any(fnmatch.fnmatchcase(lf.bf4, p) for p in self.error_patterns)
        raise MalformedPredicate(f"unknown predicate kind {self.kind!r}")

    def to_json(self) -> dict:
        out: dict = {"kind": self.kind}
        if self.kind == "statement_type_in":
            out["types"] = sorted(self.statement_types)
        elif self.kind == "child_types_contain_any":
            out["types"] = sorted(self.child_types)
        elif self.kind == "statement_and_child":
            out["statement_types"] = sorted(self.statement_types)
            out["child_types"] = sorted(self.child_types)
        elif self.kind == "error_type_matches":
            out["patterns"] = list(self.error_patterns)
        return out

    @classmethod
    def from_json(cls, obj: dict) -> "PredicateSpec":
        if not isinstance(obj, dict) or "kind" not in obj:
            raise MalformedPredicate(f"predicate must be an object with 'kind': {obj!r}")
        kind = obj["kind"]
        if kind not in PREDICATE_KINDS:
            raise MalformedPredicate(f"unknown predicate kind {kind!r}")
        try:
            if kind == "statement_type_in":
                return cls(kind, statement_types=frozenset(obj["types"]))
            if kind == "child_types_contain_any":
                return cls(kind, child_types=frozenset(obj["types"]))
            if kind == "statement_and_child":
                return cls(
                    kind,
                    statement_types=frozenset(obj.get("statement_types") or ()),
                    child_types=frozenset(obj["child_types"]),
                )
            patterns = obj["patterns"]
            if isinstance(patterns, str):
                patterns = [patterns]
            return cls(kind, error_patterns=tuple(patterns))
        except (KeyError, TypeError) as exc:
            raise MalformedPredicate(f"bad args for predicate {kind!r}: {exc}") from exc


@dataclass(frozen=True)
class RepairPattern:
    id: str
    name: str
    feature_kind: str  # BF1 | BF2 | BF3 | BF4
    predicate: PredicateSpec
    implementers: frozenset[str] = frozenset()

    def to_json(self) -> dict:
        return {
            "id": self.id,
            "name": self.name,
            "feature_kind": self.feature_kind,
            "predicate": self.predicate.to_json(),
            "implementers": sorted(self.implementers),
        }


def matches(pattern: RepairPattern, lf: LineFeatures) -> bool:
    """Pure per-line pattern check."""
    return pattern.predicate.evaluate(lf)


def builtin_patterns() -> list[RepairPattern]:
    """The shipped defaults; implementer sets limited to known portfolio tools."""
    return [
        RepairPattern(
            id="P1",
            name="Insert Cast Checker",
            feature_kind="BF3",
            predicate=PredicateSpec(
                "statement_and_child", child_types=frozenset({"Cast"})
            ),
            implementers=frozenset({"SimFix", "AVATAR", "kPAR", "TBar"}),
        ),
        RepairPattern(
            id="P3",
            name="Insert Range Checker",
            feature_kind="BF2",
            predicate=PredicateSpec(
                "child_types_contain_any",
                child_types=frozenset({"ArrayAccess", "CollectionAccess"}),
            ),
            implementers=frozenset({"AVATAR", "kPAR", "TBar"}),
        ),
        RepairPattern(
            id="P4",
            name="Throw Exception",
            feature_kind="BF4",
            predicate=PredicateSpec(
                "error_type_matches", error_patterns=(ERROR_WILDCARD,)
            ),
            implementers=frozenset({"ACS"}),
        ),
    ]


class PatternRegistry:
    """Immutable-after-load registry of patterns plus the tool roster."""

    def __init__(self, patterns: list[RepairPattern]):
        self._patterns: dict[str, RepairPattern] = {}
        for p in patterns:
            if p.id in self._patterns:
                raise DuplicatePatternId(p.id)
            self._patterns[p.id] = p
        self._tool_patterns: dict[str, frozenset[str]] = {}

    # --- patterns -------------------------------------------------------

    def pattern_ids(self) -> list[str]:
        return list(self._patterns)

    def get(self, pattern_id: str) -> RepairPattern:
        return self._patterns[pattern_id]

    def all_patterns(self) -> list[RepairPattern]:
        return list(self._patterns.values())

    # --- tools ----------------------------------------------------------

    def register_tool(self, name: str, pattern_ids: tuple[str, ...] = ()) -> None:
        unknown = [p for p in pattern_ids if p not in self._patterns]
        if unknown:
            raise MalformedPredicate(
                f"tool {name!r} references undefined pattern ids {unknown}"
            )
        self._tool_patterns[name] = frozenset(pattern_ids)

    def has_tool(self, name: str) -> bool:
        return name in self._tool_patterns

    def tools(self) -> list[str]:
        return list(self._tool_patterns)

    def patterns_for_tool(self, tool: str) -> list[RepairPattern]:
        if tool not in self._tool_patterns:
            raise UnknownTool(tool)
        assigned = self._tool_patterns[tool]
        return [
            p
            for p in self._patterns.values()
            if tool in p.implementers or p.id in assigned
        ]

    def tool_pattern_match(self, tool: str, line: LineFeatures) -> bool:
        """True iff any pattern implemented by the tool matches the line."""
        return any(matches(p, line) for p in self.patterns_for_tool(tool))

    def tool_matches_any_line(self, tool: str, bug: BugFeatures) -> bool:
        return any(self.tool_pattern_match(tool, lf) for lf in bug.lines)

    def to_json(self) -> dict:
        return {"patterns": [p.to_json() for p in self._patterns.values()]}


def _pattern_from_json(obj: dict) -> RepairPattern:
    pid = str(obj.get("id", "")).strip()
    if not pid:
        raise MalformedPredicate(f"pattern entry missing id: {obj!r}")
    if pid in EXCLUDED_PATTERN_IDS:
        raise MalformedPredicate(
            f"pattern {pid} is excluded: its pre-requirement matches nearly every statement"
        )
    feature_kind = obj.get("feature_kind")
    if feature_kind not in ("BF1", "BF2", "BF3", "BF4"):
        raise MalformedPredicate(f"pattern {pid}: bad feature_kind {feature_kind!r}")
    expected = FEATURE_KIND_BY_PATTERN.get(pid)
    if expected is not None and feature_kind != expected:
        raise MalformedPredicate(
            f"pattern {pid} must use feature kind {expected}, got {feature_kind}"
        )
    predicate = PredicateSpec.from_json(obj.get("predicate"))
    return RepairPattern(
        id=pid,
        name=str(obj.get("name", pid)),
        feature_kind=feature_kind,
        predicate=predicate,
        implementers=frozenset(obj.get("implementers") or ()),
    )


def load_patterns(config: dict | str | None = None) -> PatternRegistry:
    """Build a registry from built-ins plus an optional config document.

    Config entries override built-ins by id; ids duplicated inside one
    config raise. The config is a JSON object ``{"patterns": [...]}`` or
    a bare list of pattern objects.
    """
    if isinstance(config, str):
        config = json.loads(config)
    entries: list[dict] = []
    if config is None:
        entries = []
    elif isinstance(config, dict):
        entries = config.get("patterns") or []
    elif isinstance(config, list):
        entries = config
    else:
        raise MalformedPredicate(f"unsupported pattern config type {type(config)!r}")

    merged: dict[str, RepairPattern] = {p.id: p for p in builtin_patterns()}
    seen: set[str] = set()
    for obj in entries:
        p = _pattern_from_json(obj)
        if p.id in seen:
            raise DuplicatePatternId(p.id)
        seen.add(p.id)
        merged[p.id] = p
    return PatternRegistry(list(merged.values()))


def load_patterns_file(path) -> PatternRegistry:
    with open(path, "r", encoding="utf-8") as fh:
        return load_patterns(json.load(fh))
