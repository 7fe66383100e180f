#!/usr/bin/env python3
"""Plot garchboot CSV outputs.

Usage: plot_results.py <out-dir>

Looks for contour.csv, convergence.csv, sae.csv and coverage.csv in the
given directory and writes a PNG next to each one. Needs pandas and
matplotlib; purely a convenience, the CSV files are the real interface.
"""

import sys
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import pandas as pd


def plot_contour(path: Path) -> None:
    df = pd.read_csv(path)
    fig, axes = plt.subplots(1, 3, figsize=(14, 4))
    for ax, col in zip(axes, ["var_omega", "cov", "var_alpha"]):
        pivot = df.pivot(index="alpha0", columns="omega0", values=col)
        cs = ax.contour(pivot.columns, pivot.index, pivot.values, levels=10)
        ax.clabel(cs, inline=True, fontsize=7)
        ax.set_xlabel("omega0")
        ax.set_ylabel("alpha0")
        ax.set_title(col)
    fig.tight_layout()
    fig.savefig(path.with_suffix(".png"), dpi=150)


def plot_convergence(path: Path) -> None:
    df = pd.read_csv(path)
    fig, ax = plt.subplots(figsize=(7, 5))
    for (method, elem), group in df.groupby(["method", "elem"]):
        group = group.sort_values("n")
        ax.plot(group["n"], group["ratio"], marker="o", label=f"{method}:{elem}")
    ax.axhline(1.0, color="grey", lw=0.8)
    ax.axhline(2.0, color="grey", lw=0.8, ls="--")
    ax.set_xlabel("n")
    ax.set_ylabel("n*cov / theory")
    ax.legend(fontsize=7)
    fig.tight_layout()
    fig.savefig(path.with_suffix(".png"), dpi=150)


def plot_sae(path: Path) -> None:
    df = pd.read_csv(path)
    ns = sorted(df["n"].unique())
    fig, axes = plt.subplots(1, len(ns), figsize=(4 * len(ns), 4), squeeze=False)
    for ax, n in zip(axes[0], ns):
        sub = df[df["n"] == n]
        dists = sorted(sub["dist"].unique())
        ax.boxplot([sub[sub["dist"] == d]["sae"] for d in dists], tick_labels=dists,
                   showfliers=False)
        ax.set_title(f"n = {n}")
        ax.set_ylabel("SAE")
    fig.tight_layout()
    fig.savefig(path.with_suffix(".png"), dpi=150)


def plot_coverage(path: Path) -> None:
    df = pd.read_csv(path)
    df = df[df["kind"] == "interval"]
    if df.empty:
        return
    fig, ax = plt.subplots(figsize=(7, 4))
    labels = df["method"] + ":" + df["param"] + "@" + df["level"].astype(str)
    ax.bar(labels, df["inside_pct"])
    for level in df["level"].unique():
        ax.axhline(100 * level, color="red", lw=0.8, ls="--")
    ax.set_ylabel("coverage %")
    ax.set_ylim(85, 100)
    plt.xticks(rotation=30, ha="right", fontsize=7)
    fig.tight_layout()
    fig.savefig(path.with_suffix(".png"), dpi=150)


def main() -> int:
    if len(sys.argv) != 2:
        print(__doc__)
        return 2
    out = Path(sys.argv[1])
    plotters = {
        "contour.csv": plot_contour,
        "convergence.csv": plot_convergence,
        "sae.csv": plot_sae,
        "coverage.csv": plot_coverage,
    }
    for name, plotter in plotters.items():
        path = out / name
        if path.exists():
            plotter(path)
            print(f"wrote {path.with_suffix('.png')}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
