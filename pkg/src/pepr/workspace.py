"""Workspace resolution: where the history file and pattern config live.

A workspace file (JSON or TOML) names the history file, an optional
pattern config, and ranking defaults. Resolution order: explicit flag,
the PEPR_WORKSPACE environment variable, then ./pepr.json or ./pepr.toml;
without any of those, defaults are used (history in ./pepr_history.json,
built-in patterns only).
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass
from pathlib import Path

from .errors import WorkspaceError
from .history import HistoryStore
from .patterns import PatternRegistry, load_patterns, load_patterns_file

try:
    import tomllib as _toml
except ModuleNotFoundError:  # Python 3.10
    import tomli as _toml

ENV_VAR = "PEPR_WORKSPACE"
DEFAULT_FILENAMES = ("pepr.json", "pepr.toml")
DEFAULT_HISTORY_FILENAME = "pepr_history.json"


@dataclass
class Workspace:
    root: Path
    history_path: Path
    pattern_config_path: Path | None = None
    em_alpha: float = 0.5
    tie_break_priority: tuple[str, ...] = ()
    config_path: Path | None = None

    @classmethod
    def resolve(cls, explicit: str | None = None, cwd: Path | None = None) -> "Workspace":
        cwd = Path(cwd) if cwd else Path.cwd()
        path: Path | None = None
        if explicit:
            path = Path(explicit)
            if not path.is_file():
                raise WorkspaceError(f"workspace file not found: {path}")
        elif os.environ.get(ENV_VAR):
            path = Path(os.environ[ENV_VAR])
            if not path.is_file():
                raise WorkspaceError(f"{ENV_VAR} points to a missing file: {path}")
        else:
            for name in DEFAULT_FILENAMES:
                candidate = cwd / name
                if candidate.is_file():
                    path = candidate
                    break
        if path is None:
            return cls(root=cwd, history_path=cwd / DEFAULT_HISTORY_FILENAME)
        return cls.from_file(path)

    @classmethod
    def from_file(cls, path: Path) -> "Workspace":
        path = Path(path)
        try:
            if path.suffix == ".toml":
                doc = _toml.loads(path.read_text(encoding="utf-8"))
            else:
                doc = json.loads(path.read_text(encoding="utf-8"))
        except Exception as exc:
            raise WorkspaceError(f"cannot read workspace file {path}: {exc}") from exc
        if not isinstance(doc, dict):
            raise WorkspaceError(f"workspace file {path} must hold an object/table")
        root = path.parent
        history = Path(doc.get("history") or DEFAULT_HISTORY_FILENAME)
        if not history.is_absolute():
            history = root / history
        pattern_config = doc.get("patterns")
        pattern_path: Path | None = None
        if pattern_config:
            pattern_path = Path(pattern_config)
            if not pattern_path.is_absolute():
                pattern_path = root / pattern_path
            if not pattern_path.is_file():
                raise WorkspaceError(f"pattern config not found: {pattern_path}")
        try:
            em_alpha = float(doc.get("em_alpha", 0.5))
        except (TypeError, ValueError) as exc:
            raise WorkspaceError(f"bad em_alpha in {path}") from exc
        tie_break = tuple(str(t) for t in doc.get("tie_break") or ())
        return cls(
            root=root,
            history_path=history,
            pattern_config_path=pattern_path,
            em_alpha=em_alpha,
            tie_break_priority=tie_break,
            config_path=path,
        )

    def load_history(self) -> HistoryStore:
        if self.history_path.is_file():
            return HistoryStore.load(self.history_path)
        return HistoryStore()

    def save_history(self, store: HistoryStore) -> None:
        store.save(self.history_path)

    def load_registry(self, history: HistoryStore) -> PatternRegistry:
        if self.pattern_config_path is not None:
            registry = load_patterns_file(self.pattern_config_path)
        else:
            registry = load_patterns()
        for tool in history.tools():
            registry.register_tool(tool, history.tool_patterns(tool))
        return registry
