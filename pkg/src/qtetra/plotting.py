"""Figures for verification reports, rendered to files (no display needed)."""

from __future__ import annotations

import os
import re
from typing import Sequence

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

__all__ = ["plot_equation_steps", "plot_suite_counts", "safe_name"]


def safe_name(text: str) -> str:
    return re.sub(r"[^A-Za-z0-9_.-]+", "_", text).strip("_")


def plot_equation_steps(report, out_dir: str) -> str:
    """Vector size after each factor, one line per side; returns the PNG path."""
    os.makedirs(out_dir, exist_ok=True)
    fig, ax = plt.subplots(figsize=(max(6.0, 0.18 * _nsteps(report)), 3.6))
    for side in report.details:
        if "steps" not in side:
            continue
        steps = side["steps"]
        xs = range(1, len(steps) + 1)
        ax.plot(xs, [s["terms"] for s in steps], marker="o", ms=3, label=side["side"])
    ax.set_xlabel("factors applied")
    ax.set_ylabel("basis states in vector")
    verdict = "pass" if report.passed else "FAIL"
    ax.set_title(f"{report.inputs['equation']} on |{report.inputs['state']}> "
                 f"({report.mode}, {verdict})", fontsize=9)
    ax.legend()
    ax.grid(alpha=0.3)
    fig.tight_layout()
    path = os.path.join(out_dir, safe_name(f"{report.inputs['equation']}_{report.inputs['state']}_{report.mode}") + ".png")
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path


def _nsteps(report) -> int:
    return max((len(s.get("steps", ())) for s in report.details), default=1)


def plot_suite_counts(reports: Sequence, out_dir: str, name: str = "suites") -> str:
    """Horizontal bar chart of checked cases per suite, failing suites in red."""
    os.makedirs(out_dir, exist_ok=True)
    labels = [r.command.replace("suite ", "") for r in reports]
    counts = [r.counts.get("checked", 0) for r in reports]
    colors = ["tab:blue" if r.passed else "tab:red" for r in reports]
    fig, ax = plt.subplots(figsize=(7, 0.3 * len(reports) + 1.2))
    ax.barh(labels, counts, color=colors)
    ax.set_xscale("log")
    ax.set_xlabel("cases checked")
    ax.invert_yaxis()
    fig.tight_layout()
    path = os.path.join(out_dir, safe_name(name) + ".png")
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path
