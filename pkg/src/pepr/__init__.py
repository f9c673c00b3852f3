"""Preference-based ensemble ranking of automated program repair tools.

Scores a configured set of repair tools for a given bug from two
knowledge sources: repair patterns (pre-requirement predicates over the
bug's statement features) and categorized repair history (per-feature
correct/fail counters updated from verdicts). Also simulates selection
strategies on recorded repair results and reports invocation/validation
cost savings.
"""

from .errors import (
    AllLinesUnusable,
    DatasetError,
    DuplicatePatternId,
    DuplicateToolError,
    EmptyToolset,
    MalformedPredicate,
    NoStatementAtLine,
    ParseError,
    PeprError,
    SchemaError,
    UnknownStrategy,
    UnknownTool,
    WorkspaceError,
)
from .features import (
    BugFeatures,
    LineFeatures,
    canonical_node_type,
    extract_bug_features,
    extract_line_features,
    locate_statement,
    parse_test_error,
)
from .history import (
    FeatureKey,
    FixStatus,
    HistoryEvent,
    HistoryRecord,
    HistoryStore,
    bug_feature_keys,
    line_feature_keys,
)
from .patterns import (
    PatternRegistry,
    PredicateSpec,
    RepairPattern,
    builtin_patterns,
    load_patterns,
    matches,
)
from .ranking import RankerConfig, Ranking, rank, score_tool, top_k
from .simulation import (
    RepairDataset,
    RepairOutcome,
    SimulationReport,
    hvsp,
    run_strategy,
    tisp,
)
from .workspace import Workspace

__version__ = "0.1.0"

__all__ = [
    "AllLinesUnusable",
    "BugFeatures",
    "DatasetError",
    "DuplicatePatternId",
    "DuplicateToolError",
    "EmptyToolset",
    "FeatureKey",
    "FixStatus",
    "HistoryEvent",
    "HistoryRecord",
    "HistoryStore",
    "LineFeatures",
    "MalformedPredicate",
    "NoStatementAtLine",
    "ParseError",
    "PatternRegistry",
    "PeprError",
    "PredicateSpec",
    "RankerConfig",
    "Ranking",
    "RepairDataset",
    "RepairOutcome",
    "RepairPattern",
    "SchemaError",
    "SimulationReport",
    "UnknownStrategy",
    "UnknownTool",
    "Workspace",
    "WorkspaceError",
    "builtin_patterns",
    "bug_feature_keys",
    "canonical_node_type",
    "extract_bug_features",
    "extract_line_features",
    "hvsp",
    "line_feature_keys",
    "load_patterns",
    "locate_statement",
    "matches",
    "parse_test_error",
    "rank",
    "run_strategy",
    "score_tool",
    "tisp",
    "top_k",
]
