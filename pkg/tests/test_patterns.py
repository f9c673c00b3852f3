"""Pattern registry: built-ins, config loading, match semantics."""

import random

import pytest

from pepr.errors import DuplicatePatternId, MalformedPredicate, UnknownTool
from pepr.patterns import (
    PatternRegistry,
    PredicateSpec,
    RepairPattern,
    builtin_patterns,
    load_patterns,
    matches,
)

from conftest import make_bug, make_line


def test_builtins_are_p1_p3_p4():
    registry = load_patterns()
    assert registry.pattern_ids() == ["P1", "P3", "P4"]


def test_config_adds_pattern():
    registry = load_patterns(
        {
            "patterns": [
                {
                    "id": "P7",
                    "name": "Mutate Conditional",
                    "feature_kind": "BF2",
                    "predicate": {
                        "kind": "child_types_contain_any",
                        "types": ["Conditional"],
                    },
                    "implementers": ["jMutRepair"],
                }
            ]
        }
    )
    assert len(registry.pattern_ids()) == 4
    line = make_line(bf2={"Conditional", "Literal"})
    assert matches(registry.get("P7"), line)


def test_duplicate_id_in_config_rejected():
    entry = {
        "id": "P1",
        "name": "x",
        "feature_kind": "BF3",
        "predicate": {"kind": "statement_and_child", "child_types": ["Cast"]},
    }
    with pytest.raises(DuplicatePatternId):
        load_patterns({"patterns": [entry, dict(entry)]})


def test_p2_never_registered():
    with pytest.raises(MalformedPredicate):
        load_patterns(
            {
                "patterns": [
                    {
                        "id": "P2",
                        "name": "Insert Null Pointer Checker",
                        "feature_kind": "BF2",
                        "predicate": {
                            "kind": "child_types_contain_any",
                            "types": ["FieldAccess"],
                        },
                    }
                ]
            }
        )


def test_builtin_id_feature_kind_enforced():
    with pytest.raises(MalformedPredicate):
        load_patterns(
            {
                "patterns": [
                    {
                        "id": "P6",
                        "name": "x",
                        "feature_kind": "BF2",  # catalogue says BF1
                        "predicate": {
                            "kind": "child_types_contain_any",
                            "types": ["If"],
                        },
                    }
                ]
            }
        )


def test_malformed_predicate_rejected():
    with pytest.raises(MalformedPredicate):
        load_patterns(
            {
                "patterns": [
                    {
                        "id": "P9",
                        "name": "x",
                        "feature_kind": "BF2",
                        "predicate": {"kind": "no_such_kind"},
                    }
                ]
            }
        )


# --- match semantics ----------------------------------------------------


def test_p4_matches_any_present_error():
    registry = load_patterns()
    p4 = registry.get("P4")
    assert matches(p4, make_line(bf4="java.lang.NullPointerException"))
    assert not matches(p4, make_line(bf4=None))


def test_p1_requires_cast_child():
    registry = load_patterns()
    p1 = registry.get("P1")
    assert not matches(p1, make_line(bf2={"Literal", "VariableRead"}))
    assert matches(p1, make_line(bf2={"Cast", "VariableRead"}))


def test_p3_matches_array_or_collection_access():
    registry = load_patterns()
    p3 = registry.get("P3")
    assert matches(p3, make_line(bf2={"ArrayAccess"}))
    assert matches(p3, make_line(bf2={"CollectionAccess", "Invocation"}))
    assert not matches(p3, make_line(bf2={"Invocation"}))


def test_error_pattern_globs():
    spec = PredicateSpec("error_type_matches", error_patterns=("java.lang.*",))
    assert spec.evaluate(make_line(bf4="java.lang.NullPointerException"))
    assert not spec.evaluate(make_line(bf4="java.sql.SQLException"))


def test_statement_type_predicate():
    spec = PredicateSpec("statement_type_in", statement_types=frozenset({"If", "Loop"}))
    assert spec.evaluate(make_line(bf1="If"))
    assert not spec.evaluate(make_line(bf1="Return"))


def test_statement_and_child_with_statement_constraint():
    spec = PredicateSpec(
        "statement_and_child",
        statement_types=frozenset({"Assignment"}),
        child_types=frozenset({"Cast"}),
    )
    assert spec.evaluate(make_line(bf1="Assignment", bf2={"Cast"}))
    assert not spec.evaluate(make_line(bf1="Return", bf2={"Cast"}))


# --- tool matching --------------------------------------------------------


def test_tool_pattern_match_via_builtin_implementers():
    registry = load_patterns()
    for name in ("ACS", "TBar", "Nopol"):
        registry.register_tool(name)
    assert registry.tool_pattern_match("ACS", make_line(bf4="java.lang.NullPointerException"))
    assert registry.tool_pattern_match("TBar", make_line(bf2={"Cast"}))
    assert not registry.tool_pattern_match("Nopol", make_line(bf2={"Cast"}, bf4="x.yError"))


def test_tool_with_no_patterns_never_matches():
    registry = load_patterns()
    registry.register_tool("NewTool")
    line = make_line(bf1="If", bf2={"Cast", "ArrayAccess"}, bf4="a.bException")
    assert not registry.tool_pattern_match("NewTool", line)


def test_unknown_tool_raises():
    registry = load_patterns()
    with pytest.raises(UnknownTool):
        registry.tool_pattern_match("Ghost", make_line())


def test_assigned_pattern_ids_activate():
    registry = load_patterns()
    registry.register_tool("NewTool", ("P4",))
    assert registry.tool_pattern_match("NewTool", make_line(bf4="a.bException"))
    assert not registry.tool_pattern_match("NewTool", make_line(bf2={"Cast"}))


def test_undefined_pattern_id_rejected_at_registration():
    registry = load_patterns()
    with pytest.raises(MalformedPredicate):
        registry.register_tool("NewTool", ("P99",))


def test_removing_patterns_is_monotone():
    # a match with fewer patterns implies a match with more
    rng = random.Random(7)
    types = ["Cast", "ArrayAccess", "CollectionAccess", "Literal", "VariableRead"]
    for _ in range(200):
        bf2 = {t for t in types if rng.random() < 0.4}
        bf4 = "a.bException" if rng.random() < 0.5 else None
        line = make_line(bf1="Assignment", bf2=bf2, bf4=bf4)
        small = load_patterns()
        small.register_tool("T", ("P4",))
        big = load_patterns()
        big.register_tool("T", ("P1", "P3", "P4"))
        if small.tool_pattern_match("T", line):
            assert big.tool_pattern_match("T", line)


def test_matches_is_pure():
    registry = load_patterns()
    line = make_line(bf2={"Cast"})
    p1 = registry.get("P1")
    assert matches(p1, line) == matches(p1, line)


def test_export_roundtrip():
    registry = load_patterns()
    registry2 = load_patterns(registry.to_json())
    assert registry2.pattern_ids() == registry.pattern_ids()
    for pid in registry.pattern_ids():
        assert registry2.get(pid) == registry.get(pid)


def test_duplicate_ids_rejected_in_registry_constructor():
    p = builtin_patterns()[0]
    with pytest.raises(DuplicatePatternId):
        PatternRegistry([p, p])


def test_tool_matches_any_line():
    registry = load_patterns()
    registry.register_tool("ACS")
    bug = make_bug(("Return", (), None), ("If", (), "x.yException"))
    assert registry.tool_matches_any_line("ACS", bug)


def test_builtin_implementers_from_roster():
    registry = load_patterns()
    assert registry.get("P1").implementers == {"SimFix", "AVATAR", "kPAR", "TBar"}
    assert registry.get("P3").implementers == {"AVATAR", "kPAR", "TBar"}
    assert registry.get("P4").implementers == {"ACS"}
