"""Feature extraction against the hand-labelled corpus and log fixtures."""

import logging

import pytest

from pepr.errors import AllLinesUnusable, NoStatementAtLine
from pepr.features import (
    BugFeatures,
    extract_bug_features,
    extract_line_features,
    locate_statement,
    parse_test_error,
)


def test_corpus_labels_match(fixture_source, fixture_labels):
    assert len(fixture_labels) >= 20
    for label in fixture_labels:
        lf = extract_line_features(fixture_source, label["line"])
        assert lf.bf1 == label["bf1"], f"line {label['line']}"
        assert sorted(lf.bf2) == label["bf2"], f"line {label['line']}"


def test_locate_local_declaration():
    src = "class T { void f() {\n int x = foo();\n } }"
    located = locate_statement(src, 2)
    assert located.raw_kind == "LocalVar"
    assert located.start_line == located.end_line == 2


def test_locate_return_statement():
    src = "class T { int f(int a, int b) {\n return a+b;\n } }"
    assert locate_statement(src, 2).raw_kind == "Return"


def test_blank_line_has_no_statement():
    src = "class T { void f() {\n\n g();\n } }"
    with pytest.raises(NoStatementAtLine):
        locate_statement(src, 2)


def test_statement_own_node_not_in_bf2():
    # the statement itself is excluded; only proper descendants count
    src = "class T { void f() {\n tick();\n } }"
    lf = extract_line_features(src, 2)
    assert lf.bf1 == "Invocation"
    assert lf.bf2 == frozenset()


def test_nested_call_keeps_invocation_in_bf2():
    src = "class T { void f() {\n this.process(list.get(i));\n } }"
    lf = extract_line_features(src, 2)
    assert lf.bf1 == "Invocation"
    assert {"Invocation", "FieldAccess", "VariableRead"} <= lf.bf2


def test_return_literal():
    src = "class T { int f() {\n return 0;\n } }"
    lf = extract_line_features(src, 2)
    assert lf.bf1 == "Return"
    assert lf.bf2 == frozenset({"Literal"})


def test_every_type_is_canonical_or_other(fixture_source, fixture_labels):
    from pepr.features import CORE_NODE_TYPES

    for label in fixture_labels:
        lf = extract_line_features(fixture_source, label["line"])
        for t in {lf.bf1} | lf.bf2:
            assert t in CORE_NODE_TYPES or (t.startswith("Other(") and t.endswith(")"))


def test_extraction_is_deterministic(fixture_source):
    a = extract_line_features(fixture_source, 13)
    b = extract_line_features(fixture_source, 13)
    assert a == b


# --- failing-test logs -------------------------------------------------


def test_log_fixtures(log_dir):
    expected = {
        "ioobe_first.log": "java.lang.IndexOutOfBoundsException",
        "trivial_only.log": None,
        "trivial_then_npe.log": "java.lang.NullPointerException",
        "empty.log": None,
        "thread_main.log": "java.lang.ArrayIndexOutOfBoundsException",
    }
    for name, want in expected.items():
        text = (log_dir / name).read_text(encoding="utf-8")
        assert parse_test_error(text) == want, name


def test_trivial_error_never_returned(log_dir):
    for path in log_dir.glob("*.log"):
        got = parse_test_error(path.read_text(encoding="utf-8"))
        assert got != "junit.framework.AssertionFailedError"


def test_stack_frames_are_not_error_lines():
    log = "\tat com.example.MyException.build(MyException.java:3)\n"
    assert parse_test_error(log) is None


# --- whole-bug extraction ------------------------------------------------


def test_bug_features_attach_error_type(fixture_source, log_dir):
    log = (log_dir / "ioobe_first.log").read_text(encoding="utf-8")
    bug = extract_bug_features(fixture_source, [9, 16], log, bug_id="Inventory-1")
    assert [lf.line_id for lf in bug.lines] == [9, 16]
    assert all(lf.bf4 == "java.lang.IndexOutOfBoundsException" for lf in bug.lines)


def test_bug_features_without_log(fixture_source):
    bug = extract_bug_features(fixture_source, [9, 16])
    assert all(lf.bf4 is None for lf in bug.lines)


def test_unusable_lines_skipped_with_warning(fixture_source, caplog):
    with caplog.at_level(logging.WARNING):
        bug = extract_bug_features(fixture_source, [7, 9])  # 7 is blank
    assert [lf.line_id for lf in bug.lines] == [9]
    assert any("skipping line 7" in r.getMessage() for r in caplog.records)


def test_all_lines_unusable(fixture_source):
    with pytest.raises(AllLinesUnusable):
        extract_bug_features(fixture_source, [7])  # blank line only


def test_empty_line_list_rejected(fixture_source):
    with pytest.raises(AllLinesUnusable):
        extract_bug_features(fixture_source, [])


def test_bug_features_json_roundtrip(fixture_source, log_dir):
    log = (log_dir / "thread_main.log").read_text(encoding="utf-8")
    bug = extract_bug_features(fixture_source, [21, 26], log, bug_id="Inventory-2")
    doc = bug.to_json()
    assert set(doc) == {"bug_id", "lines"}
    assert set(doc["lines"][0]) == {"line_id", "bf1", "bf2", "bf4"}
    back = BugFeatures.from_json(doc)
    assert back.bug_id == bug.bug_id
    assert back.lines == bug.lines
