"""Bug-feature extraction from Java sources and failing-test logs.

Produces, per suspicious line, the statement node type (bf1), the set of
node types appearing inside the statement (bf2), and the first
non-trivial test error type (bf4) shared by all lines of a bug.

Node types come from a fixed taxonomy mapped from the parser's raw node
kinds; source constructs outside the core taxonomy are wrapped as
``Other(<raw kind>)`` so the mapping stays total.
"""

from __future__ import annotations

import json
import logging
import re
from dataclasses import dataclass, field
from functools import lru_cache

from .errors import AllLinesUnusable, NoStatementAtLine
from .javaparse import Node, ParsedJava, parse_java

log = logging.getLogger(__name__)

#: Core node-type names; anything else appears as ``Other(<raw>)``.
CORE_NODE_TYPES = frozenset(
    {
        "Invocation", "Assignment", "If", "Return", "Cast", "ArrayAccess",
        "BinaryOperator", "Literal", "FieldAccess", "VariableRead",
        "ConstructorCall", "Conditional", "Loop", "Throw", "LocalVariable",
        "CollectionAccess",
    }
)

# Raw parser kind -> canonical node type. The same source construct always
# maps to the same name. `this`/`super` receivers count as member access
# on the current instance; for/foreach/while/do all collapse into Loop.
_RAW_TO_CANONICAL = {
    "Invocation": "Invocation",
    "Assign": "Assignment",
    "If": "If",
    "Return": "Return",
    "Cast": "Cast",
    "ArrayAccess": "ArrayAccess",
    "Binary": "BinaryOperator",
    "Literal": "Literal",
    "FieldAccess": "FieldAccess",
    "VarRead": "VariableRead",
    "ConstructorCall": "ConstructorCall",
    "Ternary": "Conditional",
    "For": "Loop",
    "ForEach": "Loop",
    "While": "Loop",
    "DoWhile": "Loop",
    "Throw": "Throw",
    "LocalVar": "LocalVariable",
    "This": "FieldAccess",
    "Super": "FieldAccess",
}

# Structural nodes carrying no feature signal of their own.
_TRANSPARENT_KINDS = frozenset({"Block", "Empty", "Unknown", "ArrayInit"})

# Method names treated as indexed-collection reads for range-checker
# pattern matching (syntactic approximation: no type resolution).
COLLECTION_ACCESSOR_NAMES = frozenset({"get", "charAt", "elementAt"})

#: Assertion failures carry no error-type information worth indexing.
TRIVIAL_TEST_ERROR = "junit.framework.AssertionFailedError"


def canonical_node_type(raw_kind: str) -> str:
    """Map a raw parser kind onto the closed node-type taxonomy."""
    mapped = _RAW_TO_CANONICAL.get(raw_kind)
    return mapped if mapped is not None else f"Other({raw_kind})"


@dataclass(frozen=True)
class LineFeatures:
    """Features of the statement enclosing one suspicious line."""

    line_id: int
    bf1: str
    bf2: frozenset[str]
    bf4: str | None = None

    def bf3(self) -> tuple[str, frozenset[str]]:
        """The (bf1, bf2) conjunction, never stored separately."""
        return (self.bf1, self.bf2)

    def to_json(self) -> dict:
        return {
            "line_id": self.line_id,
            "bf1": self.bf1,
            "bf2": sorted(self.bf2),
            "bf4": self.bf4,
        }

    @classmethod
    def from_json(cls, obj: dict) -> "LineFeatures":
        return cls(
            line_id=int(obj["line_id"]),
            bf1=str(obj["bf1"]),
            bf2=frozenset(obj.get("bf2") or ()),
            bf4=obj.get("bf4") or None,
        )


@dataclass
class BugFeatures:
    """Per-line features of one bug; bf4 is shared across lines."""

    bug_id: str
    lines: list[LineFeatures] = field(default_factory=list)

    def to_json(self) -> dict:
        return {"bug_id": self.bug_id, "lines": [lf.to_json() for lf in self.lines]}

    @classmethod
    def from_json(cls, obj: dict) -> "BugFeatures":
        return cls(
            bug_id=str(obj.get("bug_id", "")),
            lines=[LineFeatures.from_json(o) for o in obj.get("lines", [])],
        )


@dataclass(frozen=True)
class LocatedStatement:
    """Smallest statement-level node covering a requested line."""

    raw_kind: str
    start_line: int
    end_line: int
    node: Node


@lru_cache(maxsize=16)
def _parse_cached(source: str) -> ParsedJava:
    return parse_java(source)


# Kinds that never serve as the located statement even though they are
# marked statement-like (pure structure).
_NON_CANDIDATE_KINDS = frozenset({"Block", "Empty"})


def locate_statement(source: str, line_id: int) -> LocatedStatement:
    """Find the smallest statement whose span covers ``line_id``.

    Lines holding only whitespace, comments, or braces have no statement.
    When several statements share a line, the first by source position
    wins among the smallest spans.
    """
    parsed = _parse_cached(source)
    if line_id < 1 or line_id > parsed.line_count:
        raise NoStatementAtLine(f"line {line_id} outside file (1..{parsed.line_count})")
    texts = parsed.line_tokens.get(line_id)
    if not texts:
        raise NoStatementAtLine(f"line {line_id} holds no code")
    if all(t in ("{", "}") for t in texts):
        raise NoStatementAtLine(f"line {line_id} holds only braces")
    best: Node | None = None
    for node in parsed.root.walk():
        if not node.is_statement or node.kind in _NON_CANDIDATE_KINDS:
            continue
        if not node.covers_line(line_id):
            continue
        if best is None or (node.span_chars(), node.start) < (
            best.span_chars(),
            best.start,
        ):
            best = node
    if best is None:
        raise NoStatementAtLine(f"no statement covers line {line_id}")
    return LocatedStatement(best.kind, best.start_line, best.end_line, best)


def _statement_child_types(stmt: Node) -> frozenset[str]:
    kinds: set[str] = set()
    for node in stmt.walk():
        if node is not stmt and node.kind not in _TRANSPARENT_KINDS:
            kinds.add(canonical_node_type(node.kind))
        if (
            node.kind == "Invocation"
            and node.name in COLLECTION_ACCESSOR_NAMES
            and node.arg_count >= 1
        ):
            kinds.add("CollectionAccess")
    return frozenset(kinds)


def extract_line_features(source: str, line_id: int) -> LineFeatures:
    """Extract (bf1, bf2) for the statement covering ``line_id``."""
    located = locate_statement(source, line_id)
    return LineFeatures(
        line_id=line_id,
        bf1=canonical_node_type(located.raw_kind),
        bf2=_statement_child_types(located.node),
    )


# A throwable-like fully qualified class name at the head of a stack-trace
# line, optionally behind the JVM/JUnit framing prefixes.
_ERROR_LINE_RE = re.compile(
    r'^\s*(?:Caused by:\s*|Exception in thread "[^"]*"\s+)?'
    r"((?:[a-z_$][\w$]*\.)+(?:[A-Z][\w$]*\.)*[A-Z][\w$]*"
    r"(?:Exception|Error|Throwable|Failure))"
    r"(?::.*|\s*)$"
)


def parse_test_error(test_log: str) -> str | None:
    """First non-trivial exception/error class name in a failing-test log.

    ``junit.framework.AssertionFailedError`` is skipped; returns None when
    no other error type appears.
    """
    for raw_line in test_log.splitlines():
        m = _ERROR_LINE_RE.match(raw_line)
        if m and m.group(1) != TRIVIAL_TEST_ERROR:
            return m.group(1)
    return None


def extract_bug_features(
    source: str,
    faulty_lines: list[int],
    test_log: str | None = None,
    bug_id: str = "bug",
) -> BugFeatures:
    """Extract features for every suspicious line of one bug.

    Lines without a locatable statement are skipped with a warning; the
    extraction fails only when no line is usable.
    """
    if not faulty_lines:
        raise AllLinesUnusable("no faulty lines given")
    bf4 = parse_test_error(test_log) if test_log else None
    lines: list[LineFeatures] = []
    for line_id in faulty_lines:
        try:
            lf = extract_line_features(source, line_id)
        except NoStatementAtLine as exc:
            log.warning("bug %s: skipping line %d: %s", bug_id, line_id, exc)
            continue
        lines.append(
            LineFeatures(line_id=lf.line_id, bf1=lf.bf1, bf2=lf.bf2, bf4=bf4)
        )
    if not lines:
        raise AllLinesUnusable(f"bug {bug_id}: no usable statement on any faulty line")
    return BugFeatures(bug_id=bug_id, lines=lines)


def bug_features_to_json_str(bug: BugFeatures) -> str:
    return json.dumps(bug.to_json(), indent=2, sort_keys=False)
