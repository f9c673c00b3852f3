"""Command-line interface.

One executable, subcommand style: machine-readable JSON/CSV goes to
stdout, diagnostics to stderr. History writes are atomic; every command
is deterministic given its inputs and seed flags. Exit codes: 0 success,
2 for usage or input errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .errors import PeprError
from .features import extract_bug_features
from .history import FixStatus, HistoryStore, read_history_jsonl
from .ranking import RankerConfig, rank
from .report import render_csv, render_figures, write_csv, write_json
from .simulation import (
    STRATEGIES,
    RepairDataset,
    read_bug_order_file,
    run_strategy,
)
from .workspace import Workspace


def _diag(message: str) -> None:
    print(f"pepr: {message}", file=sys.stderr)


def _emit(doc) -> None:
    print(json.dumps(doc, indent=2))


def _parse_lines(text: str) -> list[int]:
    try:
        lines = [int(part) for part in text.split(",") if part.strip()]
    except ValueError:
        raise PeprError(f"bad --lines value {text!r} (expected e.g. 12,40)") from None
    if not lines:
        raise PeprError("--lines is empty")
    return lines


def _parse_k_values(text: str) -> list[int]:
    """Accept '3', '1,3,5' or '1-9'."""
    values: list[int] = []
    for part in text.split(","):
        part = part.strip()
        if not part:
            continue
        if "-" in part[1:]:
            lo, hi = part.split("-", 1)
            values.extend(range(int(lo), int(hi) + 1))
        else:
            values.append(int(part))
    if not values or any(k < 1 for k in values):
        raise PeprError(f"bad --top-k value {text!r}")
    return values


def _load_bug(args, workspace: Workspace):
    bug_path = Path(args.bug)
    if not bug_path.is_file():
        raise PeprError(f"buggy file not found: {bug_path}")
    source = bug_path.read_text(encoding="utf-8")
    test_log = None
    if getattr(args, "test_log", None):
        log_path = Path(args.test_log)
        if not log_path.is_file():
            raise PeprError(f"test log not found: {log_path}")
        test_log = log_path.read_text(encoding="utf-8")
    lines = _parse_lines(args.lines)
    return extract_bug_features(source, lines, test_log, bug_id=bug_path.stem)


def cmd_rank(args) -> int:
    ws = Workspace.resolve(args.workspace)
    history = ws.load_history()
    registry = ws.load_registry(history)
    tools = history.tools()
    bug = _load_bug(args, ws)
    em_alpha = args.em_alpha if args.em_alpha is not None else ws.em_alpha
    config = RankerConfig(em_alpha=em_alpha, tie_break_priority=ws.tie_break_priority)
    ranking = rank(bug, tools, registry, history, config)
    entries = ranking.to_json()["ranking"]
    if args.top_k is not None:
        entries = entries[: args.top_k]
    _emit({"bug_id": bug.bug_id, "em_alpha": em_alpha, "ranking": entries})
    return 0


def cmd_report(args) -> int:
    ws = Workspace.resolve(args.workspace)
    history = ws.load_history()
    status = FixStatus.parse(args.status)
    if args.features:
        feat_path = Path(args.features)
        if not feat_path.is_file():
            raise PeprError(f"features file not found: {feat_path}")
        from .features import BugFeatures

        bug = BugFeatures.from_json(json.loads(feat_path.read_text(encoding="utf-8")))
    else:
        if not args.bug or not args.lines:
            raise PeprError("report needs --features, or --bug with --lines")
        bug = _load_bug(args, ws)
    keys = history.update(args.tool, bug, status)
    ws.save_history(history)
    _emit(
        {
            "tool": args.tool,
            "status": status.value,
            "updated_keys": [{"kind": k.kind, "value": k.value} for k in keys],
        }
    )
    return 0


def cmd_tool_add(args) -> int:
    ws = Workspace.resolve(args.workspace)
    history = ws.load_history()
    patterns = tuple(p.strip() for p in (args.patterns or "").split(",") if p.strip())
    registry = ws.load_registry(history)  # validates pattern ids exist
    known = set(registry.pattern_ids())
    unknown = [p for p in patterns if p not in known]
    if unknown:
        raise PeprError(f"unknown pattern ids {unknown}; see 'pepr pattern list'")
    history.register_tool(args.name, patterns)
    problems: list[str] = []
    if args.history_import:
        events, problems = read_history_jsonl(args.history_import)
        own = [e for e in events if e.tool == args.name]
        skipped = len(events) - len(own)
        if skipped:
            problems.append(f"{skipped} record(s) for other tools ignored")
        problems.extend(history.import_history(own))
    ws.save_history(history)
    for p in problems:
        _diag(p)
    _emit({"added": args.name, "patterns": list(patterns)})
    return 0


def cmd_tool_list(args) -> int:
    ws = Workspace.resolve(args.workspace)
    history = ws.load_history()
    _emit(
        [
            {"name": name, "patterns": list(history.tool_patterns(name))}
            for name in history.tools()
        ]
    )
    return 0


def cmd_pattern_list(args) -> int:
    ws = Workspace.resolve(args.workspace)
    registry = ws.load_registry(ws.load_history())
    _emit([p.to_json() for p in registry.all_patterns()])
    return 0


def cmd_pattern_export(args) -> int:
    ws = Workspace.resolve(args.workspace)
    registry = ws.load_registry(ws.load_history())
    doc = registry.to_json()
    if args.out:
        Path(args.out).write_text(json.dumps(doc, indent=2) + "\n", encoding="utf-8")
        _diag(f"wrote {args.out}")
    else:
        _emit(doc)
    return 0


def cmd_history_import(args) -> int:
    ws = Workspace.resolve(args.workspace)
    history = ws.load_history()
    path = Path(args.file)
    if not path.is_file():
        raise PeprError(f"history file not found: {path}")
    events, problems = read_history_jsonl(path)
    problems.extend(history.import_history(events))
    ws.save_history(history)
    for p in problems:
        _diag(p)
    _emit({"imported": len(events) - len(problems), "problems": len(problems)})
    return 0


def cmd_history_export(args) -> int:
    ws = Workspace.resolve(args.workspace)
    history = ws.load_history()
    doc = history.to_json()
    if args.out:
        Path(args.out).write_text(json.dumps(doc, indent=2) + "\n", encoding="utf-8")
        _diag(f"wrote {args.out}")
    else:
        _emit(doc)
    return 0


def cmd_history_show(args) -> int:
    ws = Workspace.resolve(args.workspace)
    history = ws.load_history()
    rows = [
        {
            "tool": r.tool,
            "kind": r.feature.kind,
            "value": r.feature.value,
            "fail": r.fail_times,
            "correct": r.correct_times,
            "score": history.history_score(r.tool, r.feature),
        }
        for r in history.records()
        if args.tool is None or r.tool == args.tool
    ]
    _emit(rows)
    return 0


def cmd_simulate(args) -> int:
    dataset = RepairDataset.from_files(args.outcomes, args.features)
    bug_order = read_bug_order_file(args.order_file) if args.order_file else None
    strategies = [s.strip() for s in args.strategy.split(",") if s.strip()]
    bad = [s for s in strategies if s not in STRATEGIES]
    if bad:
        raise PeprError(f"unknown strategy {bad}; choose from {', '.join(STRATEGIES)}")
    k_values = _parse_k_values(args.top_k)
    reports = []
    for strategy in strategies:
        for k in k_values if strategy != "all" else [len(dataset.tools)]:
            reports.append(
                run_strategy(
                    dataset,
                    strategy,
                    k=k,
                    seed=args.seed,
                    em_alpha=args.em_alpha,
                    bug_order=bug_order,
                )
            )
    out_dir = Path(args.out_dir)
    csv_path = write_csv(reports, out_dir / "report.csv")
    json_path = write_json(reports, out_dir / "report.json")
    written = [csv_path, json_path]
    if not args.no_plots:
        written.extend(render_figures(reports, out_dir))
    print(render_csv(reports), end="")
    for path in written:
        _diag(f"wrote {path}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pepr",
        description="Rank automated program repair tools by repair preference "
        "and simulate tool-selection strategies on recorded repair results.",
    )
    parser.add_argument(
        "--workspace",
        help="workspace config file (default: $PEPR_WORKSPACE, ./pepr.json, ./pepr.toml)",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("rank", help="score and rank the configured tools for a bug")
    p.add_argument("--bug", required=True, help="buggy source file")
    p.add_argument("--lines", required=True, help="1-based faulty lines, e.g. 12,40")
    p.add_argument("--test-log", help="failing-test log for the error type")
    p.add_argument("--top-k", type=int, help="emit only the K best tools")
    p.add_argument("--em-alpha", type=float, help="pattern-match bonus coefficient")
    p.set_defaults(func=cmd_rank)

    p = sub.add_parser("report", help="record a repair verdict for a tool")
    p.add_argument("--tool", required=True)
    p.add_argument("--status", required=True, help="correct | overfit | fail")
    p.add_argument("--bug", help="buggy source file")
    p.add_argument("--lines", help="1-based faulty lines")
    p.add_argument("--test-log", help="failing-test log")
    p.add_argument("--features", help="precomputed bug-features JSON file")
    p.set_defaults(func=cmd_report)

    p = sub.add_parser("tool", help="manage the tool roster")
    tool_sub = p.add_subparsers(dest="tool_command", required=True)
    pa = tool_sub.add_parser("add", help="register a tool")
    pa.add_argument("name")
    pa.add_argument("--patterns", help="comma-separated pattern ids, e.g. P1,P4")
    pa.add_argument("--history-import", help="JSONL of this tool's past repair results")
    pa.set_defaults(func=cmd_tool_add)
    pl = tool_sub.add_parser("list", help="list registered tools")
    pl.set_defaults(func=cmd_tool_list)

    p = sub.add_parser("pattern", help="inspect repair patterns")
    pat_sub = p.add_subparsers(dest="pattern_command", required=True)
    pl = pat_sub.add_parser("list", help="list loaded patterns")
    pl.set_defaults(func=cmd_pattern_list)
    pe = pat_sub.add_parser("export", help="export the pattern config")
    pe.add_argument("--out", help="write to a file instead of stdout")
    pe.set_defaults(func=cmd_pattern_export)

    p = sub.add_parser("history", help="inspect or load repair history")
    h_sub = p.add_subparsers(dest="history_command", required=True)
    hi = h_sub.add_parser("import", help="import a JSONL of repair results")
    hi.add_argument("file")
    hi.set_defaults(func=cmd_history_import)
    he = h_sub.add_parser("export", help="dump the history store")
    he.add_argument("--out", help="write to a file instead of stdout")
    he.set_defaults(func=cmd_history_export)
    hs = h_sub.add_parser("show", help="show per-feature counters and scores")
    hs.add_argument("--tool", help="only this tool")
    hs.set_defaults(func=cmd_history_show)

    p = sub.add_parser("simulate", help="replay recorded repair results")
    p.add_argument("--outcomes", required=True, help="JSONL of {bug_id, tool, outcome}")
    p.add_argument("--features", required=True, help="JSON of per-bug features and roster")
    p.add_argument(
        "--strategy",
        required=True,
        help="pepr | random | optimal | all (comma-separated for several)",
    )
    p.add_argument("--top-k", default="1", help="K, list (1,3,5) or range (1-9)")
    p.add_argument("--seed", type=int, default=1)
    p.add_argument("--em-alpha", type=float, default=0.5)
    p.add_argument("--order-file", help="explicit bug order, one id per line")
    p.add_argument("--out-dir", default="pepr_report", help="report directory")
    p.add_argument("--no-plots", action="store_true", help="skip figure rendering")
    p.set_defaults(func=cmd_simulate)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (PeprError, ValueError, OSError) as exc:
        _diag(str(exc))
        return 2


if __name__ == "__main__":
    sys.exit(main())
