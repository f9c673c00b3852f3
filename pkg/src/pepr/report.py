"""Simulation report output: delimited text, JSON, and figures.

The CSV layout is fixed (strategy,k,correct,plausible,patches,tit,hvt,
tisp,hvsp) and byte-deterministic for identical inputs; figures plot the
saving and cost curves over K for each strategy in the report set.
"""

from __future__ import annotations

import io
import json
from pathlib import Path

from .simulation import SimulationReport

CSV_COLUMNS = (
    "strategy", "k", "correct", "plausible", "patches", "tit", "hvt", "tisp", "hvsp"
)


def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return f"{value:.6f}"
    return str(value)


def render_csv(reports: list[SimulationReport]) -> str:
    buf = io.StringIO()
    buf.write(",".join(CSV_COLUMNS) + "\n")
    for r in reports:
        row = r.to_json()
        buf.write(",".join(_fmt(row[c]) for c in CSV_COLUMNS) + "\n")
    return buf.getvalue()


def write_csv(reports: list[SimulationReport], path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(render_csv(reports), encoding="utf-8", newline="\n")
    return path


def write_json(reports: list[SimulationReport], path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    doc = {"reports": [r.to_json() for r in reports]}
    path.write_text(json.dumps(doc, indent=2) + "\n", encoding="utf-8")
    return path


def render_figures(reports: list[SimulationReport], out_dir) -> list[Path]:
    """Render savings and cost figures next to the delimited output."""
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)

    by_strategy: dict[str, list[SimulationReport]] = {}
    for r in reports:
        by_strategy.setdefault(r.strategy, []).append(r)
    for rows in by_strategy.values():
        rows.sort(key=lambda r: r.k)

    written: list[Path] = []

    fig, axes = plt.subplots(1, 2, figsize=(10, 4))
    for metric, ax in zip(("tisp", "hvsp"), axes):
        for strategy, rows in by_strategy.items():
            pts = [(r.k, getattr(r, metric)) for r in rows if getattr(r, metric) is not None]
            if not pts:
                continue
            ax.plot(
                [p[0] for p in pts],
                [100.0 * p[1] for p in pts],
                marker="o",
                label=strategy,
            )
        ax.axhline(0.0, color="grey", linewidth=0.8)
        ax.set_xlabel("K (tools selected per bug)")
        ax.set_ylabel(f"{metric.upper()} (%)")
        ax.legend()
    fig.tight_layout()
    savings_path = out_dir / "savings.png"
    fig.savefig(savings_path, dpi=120)
    plt.close(fig)
    written.append(savings_path)

    fig, axes = plt.subplots(1, 2, figsize=(10, 4))
    for metric, ax in zip(("tit", "hvt"), axes):
        for strategy, rows in by_strategy.items():
            ax.plot(
                [r.k for r in rows],
                [getattr(r, metric) for r in rows],
                marker="o",
                label=strategy,
            )
        ax.set_xlabel("K (tools selected per bug)")
        ax.set_ylabel(metric.upper())
        ax.legend()
    fig.tight_layout()
    costs_path = out_dir / "costs.png"
    fig.savefig(costs_path, dpi=120)
    plt.close(fig)
    written.append(costs_path)
    return written
