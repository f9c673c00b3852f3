"""Scoring and ranking, checked against a straight-line recomputation."""

import random

import pytest

from pepr.errors import EmptyToolset
from pepr.features import BugFeatures, LineFeatures
from pepr.history import FixStatus, HistoryStore
from pepr.patterns import load_patterns
from pepr.ranking import RankerConfig, rank, score_tool, top_k

from conftest import make_bug, make_line, seed_counts

NODE_TYPES = ["Invocation", "Return", "If", "Assignment", "Loop", "LocalVariable"]
ERROR_TYPES = ["java.lang.NullPointerException", "java.io.IOException", None]


def _registry_for(tools, tool_patterns=None):
    registry = load_patterns()
    for t in tools:
        registry.register_tool(t, tuple((tool_patterns or {}).get(t, ())))
    return registry


def test_line_score_sums_bf1_and_bf4():
    store = HistoryStore()
    seed_counts(store, "T", "BF1", "Invocation", fail=3, correct=2)  # 0.4
    seed_counts(store, "T", "BF4", "x.yException", fail=4, correct=1)  # 0.2
    registry = _registry_for(["T"])
    bug = make_bug(("Invocation", (), "x.yException"))
    score, breakdown = score_tool("T", bug, registry, store, RankerConfig(0.5))
    assert score == pytest.approx(0.6, abs=1e-12)
    assert breakdown[0].pattern_matched is False


def test_pattern_bonus_multiplies():
    store = HistoryStore()
    seed_counts(store, "T", "BF1", "Invocation", fail=3, correct=2)
    seed_counts(store, "T", "BF4", "x.yException", fail=4, correct=1)
    registry = _registry_for(["T"], {"T": ("P4",)})  # matches: bf4 present
    bug = make_bug(("Invocation", (), "x.yException"))
    score, breakdown = score_tool("T", bug, registry, store, RankerConfig(0.5))
    assert breakdown[0].pattern_matched is True
    assert score == pytest.approx(0.9, abs=1e-12)  # 0.6 * 1.5


def test_scores_sum_over_lines():
    store = HistoryStore()
    seed_counts(store, "T", "BF1", "If", fail=1, correct=9)      # 0.9
    seed_counts(store, "T", "BF1", "Return", fail=7, correct=3)  # 0.3
    registry = _registry_for(["T"])
    bug = make_bug(("If", (), None), ("Return", (), None))
    score, _ = score_tool("T", bug, registry, store, RankerConfig(0.5))
    assert score == pytest.approx(1.2, abs=1e-12)


def test_bonus_factor_is_exact():
    rng = random.Random(5)
    for _ in range(300):
        alpha = rng.choice([0.0, 0.3, 0.5, 1.0])
        store = HistoryStore()
        seed_counts(store, "T", "BF1", "If", fail=rng.randint(0, 9), correct=rng.randint(0, 9))
        bf4 = "x.yException"
        seed_counts(store, "T", "BF4", bf4, fail=rng.randint(0, 9), correct=rng.randint(0, 9))
        registry = _registry_for(["T"], {"T": ("P4",)})
        bug = make_bug(("If", (), bf4))
        score, breakdown = score_tool("T", bug, registry, store, RankerConfig(alpha))
        h = breakdown[0].history_component
        assert abs(score - (1.0 + alpha) * h) <= 1e-12


def test_tie_break_priority():
    store = HistoryStore()
    for t in ("A", "B", "C"):
        store.register_tool(t)
    seed_counts(store, "A", "BF1", "If", fail=1, correct=9)
    seed_counts(store, "B", "BF1", "If", fail=1, correct=9)
    seed_counts(store, "C", "BF1", "If", fail=9, correct=1)
    registry = _registry_for(["A", "B", "C"])
    bug = make_bug(("If", (), None))
    ranking = rank(bug, ["A", "B", "C"], registry, store,
                   RankerConfig(tie_break_priority=("B", "A", "C")))
    assert ranking.tools() == ["B", "A", "C"]


def test_cold_start_orders_by_priority():
    store = HistoryStore()
    tools = ["X", "Y", "Z"]
    for t in tools:
        store.register_tool(t)
    registry = _registry_for(tools)
    bug = make_bug(("If", (), None))
    ranking = rank(bug, tools, registry, store, RankerConfig(tie_break_priority=("Z", "X", "Y")))
    assert ranking.tools() == ["Z", "X", "Y"]
    assert all(e.score == 0.0 for e in ranking.entries)


def test_rank_invariant_under_roster_permutation():
    store = HistoryStore()
    tools = ["A", "B", "C", "D"]
    for t in tools:
        store.register_tool(t)
    seed_counts(store, "A", "BF1", "If", fail=1, correct=1)
    seed_counts(store, "C", "BF1", "If", fail=1, correct=1)
    registry = _registry_for(tools)
    bug = make_bug(("If", (), None))
    config = RankerConfig(tie_break_priority=("A", "B", "C", "D"))
    expected = rank(bug, tools, registry, store, config).tools()
    rng = random.Random(2)
    for _ in range(10):
        shuffled = tools[:]
        rng.shuffle(shuffled)
        assert rank(bug, shuffled, registry, store, config).tools() == expected


def test_score_zero_iff_history_zero():
    store = HistoryStore()
    store.register_tool("T")
    registry = _registry_for(["T"], {"T": ("P1", "P3", "P4")})
    bug = make_bug(("If", ("Cast",), "x.yException"))
    score, _ = score_tool("T", bug, registry, store, RankerConfig(1.0))
    assert score == 0.0  # pattern matches but no history
    seed_counts(store, "T", "BF1", "If", fail=0, correct=1)
    score2, _ = score_tool("T", bug, registry, store, RankerConfig(1.0))
    assert score2 > 0.0


def test_alpha_monotonicity_when_only_a_matches():
    rng = random.Random(9)
    for _ in range(100):
        store = HistoryStore()
        hb = rng.randint(0, 5)
        ha = hb + rng.randint(0, 5)  # A's history at least B's
        seed_counts(store, "A", "BF1", "If", fail=10 - ha, correct=ha)
        seed_counts(store, "B", "BF1", "If", fail=10 - hb, correct=hb)
        registry = _registry_for(["A", "B"], {"A": ("P4",)})  # B matches nothing
        bug = make_bug(("If", (), "x.yException"))
        seed_counts(store, "A", "BF4", "x.yException", fail=0, correct=0)
        previous = None
        for alpha in (0.0, 0.3, 0.5, 1.0, 2.0):
            sa, _ = score_tool("A", bug, registry, store, RankerConfig(alpha))
            sb, _ = score_tool("B", bug, registry, store, RankerConfig(alpha))
            assert sa >= sb
            if previous is not None:
                assert sa >= previous  # A's score never drops as alpha grows
            previous = sa


def test_top_k_clamps_and_prefixes():
    store = HistoryStore()
    tools = [f"T{i}" for i in range(5)]
    for t in tools:
        store.register_tool(t)
    registry = _registry_for(tools)
    bug = make_bug(("If", (), None))
    ranking = rank(bug, tools, registry, store)
    assert len(top_k(ranking, 1)) == 1
    assert top_k(ranking, 9) == tools  # clamp to roster size
    for k in range(1, 5):
        assert top_k(ranking, k) == top_k(ranking, k + 1)[:k]
    with pytest.raises(ValueError):
        top_k(ranking, 0)


def test_empty_toolset():
    store = HistoryStore()
    registry = _registry_for([])
    with pytest.raises(EmptyToolset):
        rank(make_bug(("If", (), None)), [], registry, store)


def test_em_alpha_validation():
    with pytest.raises(ValueError):
        RankerConfig(em_alpha=-0.1)
    with pytest.raises(ValueError):
        RankerConfig(em_alpha=float("nan"))
    with pytest.raises(ValueError):
        RankerConfig(em_alpha=float("inf"))


# --- straight-line recomputation oracle -----------------------------------


def straight_line_scores(bug, tools, history_table, patterns_by_tool, em_alpha):
    """Direct transliteration of the scoring loop, kept independent of the
    package internals: raw dict lookups and set tests only."""
    prefer_scores = {t: 0.0 for t in tools}
    for lf in bug.lines:
        features = [("BF1", lf.bf1)]
        if lf.bf4 is not None:
            features.append(("BF4", lf.bf4))
        for tool in tools:
            history_score = 0.0
            for feature in features:
                correct, fail = history_table.get((tool,) + feature, (0, 0))
                total = correct + fail
                history_score += correct / total if total else 0.0
            if _oracle_match(patterns_by_tool.get(tool, ()), lf):
                final = history_score * (1 + em_alpha)
            else:
                final = history_score
            prefer_scores[tool] += final
    return prefer_scores


def _oracle_match(simple_patterns, lf):
    for kind, payload in simple_patterns:
        if kind == "child_any" and set(payload) & set(lf.bf2):
            return True
        if kind == "stmt_in" and lf.bf1 in payload:
            return True
        if kind == "error_any" and lf.bf4 is not None:
            return True
    return False


def random_instance(rng):
    n_tools = rng.randint(1, 10)
    tools = [f"T{i}" for i in range(n_tools)]
    n_lines = rng.randint(1, 5)
    lines = []
    for i in range(n_lines):
        bf1 = rng.choice(NODE_TYPES)
        bf2 = frozenset(t for t in NODE_TYPES + ["Cast", "ArrayAccess"] if rng.random() < 0.3)
        bf4 = rng.choice(ERROR_TYPES)
        lines.append(LineFeatures(line_id=i + 1, bf1=bf1, bf2=bf2, bf4=bf4))
    bug = BugFeatures(bug_id="r", lines=lines)

    history_table = {}
    for t in tools:
        for nt in NODE_TYPES:
            if rng.random() < 0.6:
                history_table[(t, "BF1", nt)] = (rng.randint(0, 5), rng.randint(0, 5))
        for et in ERROR_TYPES[:2]:
            if rng.random() < 0.4:
                history_table[(t, "BF4", et)] = (rng.randint(0, 5), rng.randint(0, 5))

    patterns_by_tool = {}
    for t in tools:
        pats = []
        if rng.random() < 0.3:
            pats.append(("child_any", tuple(rng.sample(NODE_TYPES + ["Cast"], 2))))
        if rng.random() < 0.3:
            pats.append(("stmt_in", tuple(rng.sample(NODE_TYPES, 2))))
        if rng.random() < 0.3:
            pats.append(("error_any", ()))
        patterns_by_tool[t] = tuple(pats)
    return bug, tools, history_table, patterns_by_tool


def build_package_state(tools, history_table, patterns_by_tool):
    store = HistoryStore()
    for t in tools:
        store.ensure_tool(t)
    for (tool, kind, value), (correct, fail) in history_table.items():
        seed_counts(store, tool, kind, value, fail=fail, correct=correct)
    registry = load_patterns(
        {
            "patterns": [
                _predicate_config(f"U{i}", kind, payload)
                for i, (kind, payload) in enumerate(
                    sorted({p for pats in patterns_by_tool.values() for p in pats})
                )
            ]
        }
    )
    pattern_id = {
        (kind, payload): f"U{i}"
        for i, (kind, payload) in enumerate(
            sorted({p for pats in patterns_by_tool.values() for p in pats})
        )
    }
    for t in tools:
        registry.register_tool(t, tuple(pattern_id[p] for p in patterns_by_tool[t]))
    return store, registry


def _predicate_config(pid, kind, payload):
    if kind == "child_any":
        predicate = {"kind": "child_types_contain_any", "types": list(payload)}
        feature_kind = "BF2"
    elif kind == "stmt_in":
        predicate = {"kind": "statement_type_in", "types": list(payload)}
        feature_kind = "BF1"
    else:
        predicate = {"kind": "error_type_matches", "patterns": "any"}
        feature_kind = "BF4"
    return {"id": pid, "name": pid, "feature_kind": feature_kind, "predicate": predicate}


@pytest.mark.parametrize("seed", range(4))
def test_rank_matches_straight_line_recomputation(seed):
    rng = random.Random(seed)
    for _ in range(100):
        bug, tools, history_table, patterns_by_tool = random_instance(rng)
        em_alpha = rng.choice([0.0, 0.3, 0.5, 1.0])
        expected = straight_line_scores(bug, tools, history_table, patterns_by_tool, em_alpha)
        store, registry = build_package_state(tools, history_table, patterns_by_tool)
        ranking = rank(bug, tools, registry, store, RankerConfig(em_alpha))
        got = {e.tool: e.score for e in ranking.entries}
        for t in tools:
            assert abs(got[t] - expected[t]) <= 1e-12, (t, got[t], expected[t])
        scores = [e.score for e in ranking.entries]
        assert scores == sorted(scores, reverse=True)
