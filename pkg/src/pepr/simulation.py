"""Replay recorded repair results under tool-selection strategies.

Counts, per strategy and K: correctly/plausibly fixed bugs, plausible
patches, tool invocations (one per selected tool per bug), and human
validation checks (manual inspections of plausible patches, in
selection order, until a correct one is found). Savings are measured
against invoking the full roster on every bug.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from pathlib import Path

from .errors import DatasetError, UnknownStrategy
from .features import BugFeatures, extract_bug_features
from .history import FixStatus, HistoryStore
from .patterns import PatternRegistry, load_patterns
from .ranking import RankerConfig, rank, top_k

OUTCOME_CORRECT = "correct"
OUTCOME_OVERFIT = "overfit"
OUTCOME_NONE = "none"
OUTCOMES = (OUTCOME_CORRECT, OUTCOME_OVERFIT, OUTCOME_NONE)

STRATEGIES = ("pepr", "random", "optimal", "all")

_STATUS_FOR_OUTCOME = {
    OUTCOME_CORRECT: FixStatus.CORRECT,
    OUTCOME_OVERFIT: FixStatus.OVERFIT,
    OUTCOME_NONE: FixStatus.FAIL,
}


@dataclass(frozen=True)
class RepairOutcome:
    bug_id: str
    tool: str
    outcome: str  # correct | overfit | none

    def __post_init__(self) -> None:
        if self.outcome not in OUTCOMES:
            raise DatasetError(
                f"bad outcome {self.outcome!r} for ({self.bug_id}, {self.tool})"
            )


@dataclass
class RepairDataset:
    """Recorded repair results plus per-bug features and the tool roster."""

    bugs: dict[str, BugFeatures]
    outcomes: dict[tuple[str, str], str]
    tools: list[str]
    tool_patterns: dict[str, tuple[str, ...]] = field(default_factory=dict)

    def validate(self) -> None:
        roster = set(self.tools)
        if len(roster) != len(self.tools):
            raise DatasetError("duplicate tool names in roster")
        for (bug_id, tool) in self.outcomes:
            if bug_id not in self.bugs:
                raise DatasetError(f"outcome references bug {bug_id!r} without features")
            if tool not in roster:
                raise DatasetError(f"outcome references tool {tool!r} not in roster")

    def outcome(self, bug_id: str, tool: str) -> str:
        return self.outcomes.get((bug_id, tool), OUTCOME_NONE)

    @classmethod
    def from_files(cls, outcomes_path, features_path) -> "RepairDataset":
        bugs, tools, tool_patterns = _read_features_file(features_path)
        outcomes: dict[tuple[str, str], str] = {}
        order_seen: list[str] = []
        with open(outcomes_path, "r", encoding="utf-8") as fh:
            for lineno, raw in enumerate(fh, start=1):
                raw = raw.strip()
                if not raw:
                    continue
                try:
                    obj = json.loads(raw)
                    rec = RepairOutcome(
                        bug_id=str(obj["bug_id"]),
                        tool=str(obj["tool"]),
                        outcome=str(obj["outcome"]).lower(),
                    )
                except DatasetError:
                    raise
                except Exception as exc:
                    raise DatasetError(f"{outcomes_path}:{lineno}: {exc}") from exc
                key = (rec.bug_id, rec.tool)
                if key in outcomes:
                    raise DatasetError(
                        f"{outcomes_path}:{lineno}: duplicate outcome for {key}"
                    )
                outcomes[key] = rec.outcome
                if rec.tool not in order_seen:
                    order_seen.append(rec.tool)
        if not tools:
            tools = order_seen
        dataset = cls(bugs=bugs, outcomes=outcomes, tools=tools, tool_patterns=tool_patterns)
        dataset.validate()
        return dataset


def _read_features_file(path):
    with open(path, "r", encoding="utf-8") as fh:
        doc = json.load(fh)
    if not isinstance(doc, dict):
        raise DatasetError("features file must hold a JSON object")
    tools: list[str] = []
    tool_patterns: dict[str, tuple[str, ...]] = {}
    raw_bugs = doc
    if "bugs" in doc:
        raw_bugs = doc["bugs"]
        for name, spec in (doc.get("tools") or {}).items():
            tools.append(str(name))
            tool_patterns[str(name)] = tuple((spec or {}).get("patterns") or ())
    base = Path(path).parent
    bugs: dict[str, BugFeatures] = {}
    for bug_id, spec in raw_bugs.items():
        if not isinstance(spec, dict):
            raise DatasetError(f"bug {bug_id!r}: features entry must be an object")
        if "source_path" in spec:
            src = Path(str(spec["source_path"]))
            if not src.is_absolute():
                src = base / src
            source = src.read_text(encoding="utf-8")
            test_log = None
            if spec.get("test_log"):
                log_path = Path(str(spec["test_log"]))
                if not log_path.is_absolute():
                    log_path = base / log_path
                test_log = log_path.read_text(encoding="utf-8")
            bugs[str(bug_id)] = extract_bug_features(
                source, [int(x) for x in spec["lines"]], test_log, bug_id=str(bug_id)
            )
        else:
            bugs[str(bug_id)] = BugFeatures.from_json({"bug_id": bug_id, **spec})
    return bugs, tools, tool_patterns


@dataclass
class SimulationReport:
    strategy: str
    k: int
    correct_fixed: int
    plausible_fixed: int
    plausible_patches: int
    tit: int
    hvt: int
    tisp: float | None
    hvsp: float | None
    trace: list[tuple[str, tuple[str, ...]]] | None = None

    def to_json(self) -> dict:
        return {
            "strategy": self.strategy,
            "k": self.k,
            "correct": self.correct_fixed,
            "plausible": self.plausible_fixed,
            "patches": self.plausible_patches,
            "tit": self.tit,
            "hvt": self.hvt,
            "tisp": self.tisp,
            "hvsp": self.hvsp,
        }


def tisp(r_strategy: float, r_all: float, tit_strategy: float, tit_all: float) -> float:
    """Tool-invocation saving relative to invoking every tool."""
    if r_all == 0:
        raise ZeroDivisionError("r_all must be positive")
    if tit_all == 0:
        raise ZeroDivisionError("tit_all must be positive")
    return r_strategy / r_all - tit_strategy / tit_all


def hvsp(r_strategy: float, r_all: float, hvt_strategy: float, hvt_all: float) -> float:
    """Human-validation saving relative to invoking every tool."""
    if r_all == 0:
        raise ZeroDivisionError("r_all must be positive")
    if hvt_all == 0:
        raise ZeroDivisionError("hvt_all must be positive")
    return r_strategy / r_all - hvt_strategy / hvt_all


def _bug_order(dataset: RepairDataset, seed: int, bug_order) -> list[str]:
    if bug_order is not None:
        order = [str(b) for b in bug_order]
        missing = [b for b in order if b not in dataset.bugs]
        if missing:
            raise DatasetError(f"bug order references unknown bugs {missing}")
        return order
    order = list(dataset.bugs)
    random.Random(seed).shuffle(order)
    return order


def _score_bug(dataset: RepairDataset, bug_id: str, selection: list[str]):
    """Per-bug counts: (fixed, plausible, n_patches, hvt_checks)."""
    plausible_seq = [
        dataset.outcome(bug_id, tool)
        for tool in selection
        if dataset.outcome(bug_id, tool) in (OUTCOME_CORRECT, OUTCOME_OVERFIT)
    ]
    fixed = OUTCOME_CORRECT in plausible_seq
    if fixed:
        checks = plausible_seq.index(OUTCOME_CORRECT) + 1
    else:
        checks = len(plausible_seq)
    return fixed, bool(plausible_seq), len(plausible_seq), checks


def _run_counts(
    dataset: RepairDataset,
    strategy: str,
    k: int,
    seed: int,
    em_alpha: float,
    order: list[str],
    initial_history: HistoryStore | None,
    collect_trace: bool,
):
    tools = dataset.tools
    rng = random.Random(seed)

    history: HistoryStore | None = None
    registry: PatternRegistry | None = None
    config: RankerConfig | None = None
    if strategy == "pepr":
        history = initial_history.copy() if initial_history else HistoryStore()
        for tool in tools:
            history.ensure_tool(tool)
        registry = load_patterns()
        for tool in tools:
            registry.register_tool(tool, dataset.tool_patterns.get(tool, ()))
        config = RankerConfig(em_alpha=em_alpha)

    correct_fixed = plausible_fixed = patches = tit = hvt = 0
    trace: list[tuple[str, tuple[str, ...]]] = []
    for bug_id in order:
        bug = dataset.bugs[bug_id]
        if strategy == "all":
            selection = list(tools)
        elif strategy == "random":
            shuffled = list(tools)
            rng.shuffle(shuffled)
            selection = shuffled[:k]
        elif strategy == "optimal":
            by_class = {OUTCOME_CORRECT: [], OUTCOME_OVERFIT: [], OUTCOME_NONE: []}
            for tool in tools:
                by_class[dataset.outcome(bug_id, tool)].append(tool)
            selection = (
                by_class[OUTCOME_CORRECT]
                + by_class[OUTCOME_OVERFIT]
                + by_class[OUTCOME_NONE]
            )[:k]
        elif strategy == "pepr":
            ranking = rank(bug, tools, registry, history, config)
            selection = top_k(ranking, k)
        else:
            raise UnknownStrategy(strategy)

        tit += len(selection)
        fixed, plausible, n_patches, checks = _score_bug(dataset, bug_id, selection)
        correct_fixed += int(fixed)
        plausible_fixed += int(plausible)
        patches += n_patches
        hvt += checks

        if strategy == "pepr":
            for tool in selection:
                status = _STATUS_FOR_OUTCOME[dataset.outcome(bug_id, tool)]
                history.update(tool, bug, status)
        if collect_trace:
            trace.append((bug_id, tuple(selection)))
    return correct_fixed, plausible_fixed, patches, tit, hvt, trace


def run_strategy(
    dataset: RepairDataset,
    strategy: str,
    k: int = 1,
    seed: int = 1,
    em_alpha: float = 0.5,
    bug_order=None,
    initial_history: HistoryStore | None = None,
    collect_trace: bool = False,
) -> SimulationReport:
    """Replay the dataset under one strategy and report costs and savings.

    Bugs are visited in ``bug_order`` when given, else in a seeded
    shuffle. The pepr strategy updates each selected tool's history after
    every bug, so its ranking evolves during the run.
    """
    if strategy not in STRATEGIES:
        raise UnknownStrategy(strategy)
    if strategy != "all" and k < 1:
        raise ValueError(f"k must be >= 1 for top-K strategies, got {k}")
    dataset.validate()
    order = _bug_order(dataset, seed, bug_order)

    correct, plausible, patches, tit_count, hvt_count, trace = _run_counts(
        dataset, strategy, k, seed, em_alpha, order, initial_history, collect_trace
    )

    if strategy == "all":
        r_all, tit_all, hvt_all = correct, tit_count, hvt_count
    else:
        r_all, _, _, tit_all, hvt_all, _ = _run_counts(
            dataset, "all", k, seed, em_alpha, order, None, False
        )
    tisp_value = hvsp_value = None
    if r_all > 0 and tit_all > 0:
        tisp_value = tisp(correct, r_all, tit_count, tit_all)
    if r_all > 0 and hvt_all > 0:
        hvsp_value = hvsp(correct, r_all, hvt_count, hvt_all)

    return SimulationReport(
        strategy=strategy,
        k=k,
        correct_fixed=correct,
        plausible_fixed=plausible,
        plausible_patches=patches,
        tit=tit_count,
        hvt=hvt_count,
        tisp=tisp_value,
        hvsp=hvsp_value,
        trace=trace if collect_trace else None,
    )


def read_bug_order_file(path) -> list[str]:
    """Bug ids, one per line; a JSON array also works."""
    text = Path(path).read_text(encoding="utf-8").strip()
    if text.startswith("["):
        return [str(x) for x in json.loads(text)]
    return [line.strip() for line in text.splitlines() if line.strip()]


def read_features_file_bugs(path) -> dict[str, BugFeatures]:
    bugs, _, _ = _read_features_file(path)
    return bugs


__all__ = [
    "OUTCOMES",
    "STRATEGIES",
    "RepairOutcome",
    "RepairDataset",
    "SimulationReport",
    "tisp",
    "hvsp",
    "run_strategy",
    "read_bug_order_file",
]
