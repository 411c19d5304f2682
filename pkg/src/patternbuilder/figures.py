"""Matplotlib renderings of bench reports and analysis tables.

Figures are written as PNG files next to the delimited reports; every
renderer returns the list of paths it wrote.
"""

from __future__ import annotations

import math

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

from .analysis import AnalysisRow
from .bench import BenchReport

_VARIANT_COLORS = {
    "Baseline": "#888888",
    "Short": "#1f77b4",
    "Library": "#ff7f0e",
    "ShortLibrary": "#2ca02c",
}


def _variant_color(variant: str) -> str:
    return _VARIANT_COLORS.get(variant, "#d62728")


def bench_figures(report: BenchReport, out_prefix: str) -> list[str]:
    paths = []
    variants = [c.variant for c in report.configs]
    ids = list(report.pattern_ids)
    xs = range(len(ids))

    fig, ax = plt.subplots(figsize=(8, 2.2 + 0.4 * len(variants)))
    for vi, variant in enumerate(variants):
        rows = report.rows_for(variant)
        by_id = {r.pattern_id: r for r in rows}
        ys = [vi] * len(ids)
        colors = ["#2ca02c" if by_id[pid].solved else "#d62728" for pid in ids]
        ax.scatter(xs, ys, c=colors, s=90, marker="o", edgecolors="black", linewidths=0.4)
    ax.set_xticks(list(xs), ids, rotation=45)
    ax.set_yticks(range(len(variants)), variants)
    ax.set_title("Solved (green) / unsolved (red) per pattern and variant")
    ax.set_ylim(-0.7, len(variants) - 0.3)
    fig.tight_layout()
    path = f"{out_prefix}_solved.png"
    fig.savefig(path, dpi=120)
    plt.close(fig)
    paths.append(path)

    fig, ax = plt.subplots(figsize=(8, 4))
    for variant in variants:
        rows = report.rows_for(variant)
        by_id = {r.pattern_id: r for r in rows}
        ax.plot(
            list(xs),
            [by_id[pid].nodes_expanded for pid in ids],
            marker="o",
            label=variant,
            color=_variant_color(variant),
        )
    ax.set_yscale("log")
    ax.set_xticks(list(xs), ids, rotation=45)
    ax.set_ylabel("nodes expanded")
    ax.set_title("Search effort per pattern")
    ax.legend()
    fig.tight_layout()
    path = f"{out_prefix}_nodes.png"
    fig.savefig(path, dpi=120)
    plt.close(fig)
    paths.append(path)
    return paths


def _scatter_with_fit(ax, nodes, ys, ylabel):
    lx = [math.log10(v) for v in nodes]
    ax.scatter(lx, ys, color="#1f77b4")
    if len(set(lx)) > 1:
        n = len(lx)
        mx = sum(lx) / n
        my = sum(ys) / n
        sxx = sum((v - mx) ** 2 for v in lx)
        sxy = sum((v - mx) * (w - my) for v, w in zip(lx, ys))
        slope = sxy / sxx
        intercept = my - slope * mx
        xs = [min(lx), max(lx)]
        ax.plot(xs, [slope * x + intercept for x in xs], "--", color="#d62728")
    ax.set_xlabel("log10(nodes expanded)")
    ax.set_ylabel(ylabel)


def analysis_figures(rows: list[AnalysisRow], out_prefix: str) -> list[str]:
    paths = []
    usable = [r for r in rows if r.nodes_expanded is not None]

    if usable:
        fig, axes = plt.subplots(1, 2, figsize=(10, 4))
        nodes = [float(r.nodes_expanded) for r in usable]
        _scatter_with_fit(axes[0], nodes, [r.mean_time_s for r in usable], "mean solution time (s)")
        _scatter_with_fit(axes[1], nodes, [r.mean_steps for r in usable], "mean steps")
        fig.tight_layout()
        path = f"{out_prefix}_effort.png"
        fig.savefig(path, dpi=120)
        plt.close(fig)
        paths.append(path)

    fig, ax = plt.subplots(figsize=(8, 4))
    xs = range(len(rows))
    ax.bar(list(xs), [r.mean_helper_use_rate for r in rows], color="#1f77b4", label="helper use rate")
    ax.set_ylim(0, 1.05)
    ax.set_xticks(list(xs), [r.pattern_id for r in rows], rotation=45)
    ax.set_ylabel("mean helper use rate")
    lengths = [r.program_length for r in rows]
    if any(v is not None for v in lengths):
        ax2 = ax.twinx()
        ax2.plot(
            [x for x, v in zip(xs, lengths) if v is not None],
            [v for v in lengths if v is not None],
            color="#d62728",
            marker="o",
            label="program length",
        )
        ax2.set_ylabel("model program length")
    ax.set_title("Helper use by pattern")
    fig.tight_layout()
    path = f"{out_prefix}_helper_use.png"
    fig.savefig(path, dpi=120)
    plt.close(fig)
    paths.append(path)
    return paths
