"""Preference scoring and deterministic ranking of repair tools.

A tool's score for a bug is the sum over faulty lines of its history
score on that line's indexed features, multiplied by (1 + bonus) on
lines where one of the tool's repair patterns matches. Ties are broken
by a configurable priority order, defaulting to registration order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

from .errors import EmptyToolset
from .features import BugFeatures
from .history import HistoryStore, line_feature_keys
from .patterns import PatternRegistry

DEFAULT_EM_ALPHA = 0.5


@dataclass(frozen=True)
class RankerConfig:
    em_alpha: float = DEFAULT_EM_ALPHA
    tie_break_priority: tuple[str, ...] = ()

    def __post_init__(self) -> None:
        if not (math.isfinite(self.em_alpha) and self.em_alpha >= 0.0):
            raise ValueError(f"em_alpha must be finite and >= 0, got {self.em_alpha}")


@dataclass(frozen=True)
class LineScore:
    line_id: int
    history_component: float
    pattern_matched: bool


@dataclass(frozen=True)
class RankEntry:
    tool: str
    score: float
    per_line: tuple[LineScore, ...]


@dataclass
class Ranking:
    entries: list[RankEntry] = field(default_factory=list)

    def tools(self) -> list[str]:
        return [e.tool for e in self.entries]

    def to_json(self) -> dict:
        return {
            "ranking": [
                {
                    "tool": e.tool,
                    "score": e.score,
                    "lines": [
                        {
                            "line_id": ls.line_id,
                            "history_score": ls.history_component,
                            "pattern_matched": ls.pattern_matched,
                        }
                        for ls in e.per_line
                    ],
                }
                for e in self.entries
            ]
        }


def score_tool(
    tool: str,
    bug: BugFeatures,
    registry: PatternRegistry,
    history: HistoryStore,
    config: RankerConfig,
) -> tuple[float, tuple[LineScore, ...]]:
    """Score one tool for one bug, with the per-line breakdown."""
    total = 0.0
    breakdown: list[LineScore] = []
    for lf in bug.lines:
        h = 0.0
        for key in line_feature_keys(lf):
            h += history.history_score(tool, key)
        matched = registry.tool_pattern_match(tool, lf)
        total += h * (1.0 + config.em_alpha) if matched else h
        breakdown.append(LineScore(lf.line_id, h, matched))
    return total, tuple(breakdown)


def rank(
    bug: BugFeatures,
    tools: Sequence[str],
    registry: PatternRegistry,
    history: HistoryStore,
    config: RankerConfig | None = None,
) -> Ranking:
    """Rank tools by descending score with deterministic tie-breaks."""
    if not tools:
        raise EmptyToolset("cannot rank an empty tool set")
    config = config or RankerConfig()
    priority = config.tie_break_priority or tuple(tools)
    prio_index = {name: i for i, name in enumerate(priority)}
    fallback = len(priority)
    # tools missing from the priority list come after it, in roster order
    roster_index = {name: i for i, name in enumerate(tools)}

    entries = []
    for tool in tools:
        score, per_line = score_tool(tool, bug, registry, history, config)
        entries.append(RankEntry(tool, score, per_line))
    entries.sort(
        key=lambda e: (
            -e.score,
            prio_index.get(e.tool, fallback),
            roster_index[e.tool],
        )
    )
    return Ranking(entries)


def top_k(ranking: Ranking, k: int) -> list[str]:
    """The k best tools (fewer when the ranking is shorter)."""
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    return ranking.tools()[:k]
