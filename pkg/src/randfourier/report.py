"""Rendering of experiment summaries: text tables, plot data, figures.

The table and the two-column series files are plain text usable by any
plotting tool (a gnuplot script is emitted alongside); matplotlib figures
are rendered next to them unless turned off.
"""

from __future__ import annotations

import os
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt


def _fmt(x) -> str:
    if x is None:
        return "-"
    if isinstance(x, float):
        return f"{x:.6g}"
    return str(x)


def summary_table(summary: dict) -> str:
    """Aligned per-(metric, n) table of medians and tail statistics."""
    header = ["metric", "n", "median", "q90", "baseline_median", "median/baseline"]
    rows = [header]
    for name, entry in summary["metrics"].items():
        base = entry.get("baseline_medians")
        for i, n in enumerate(entry["ns"]):
            b = base[i] if base else None
            ratio = entry["medians"][i] / b if b else None
            rows.append(
                [name, str(n), _fmt(entry["medians"][i]), _fmt(entry["q90"][i]), _fmt(b), _fmt(ratio)]
            )
    widths = [max(len(r[c]) for r in rows) for c in range(len(header))]
    lines = ["  ".join(cell.rjust(w) for cell, w in zip(row, widths)) for row in rows]
    meta = (
        f"model={summary['model']}  m={summary['m']}  replicates={summary['replicates']}"
        f"  master_seed={summary['master_seed']}"
    )
    flags = [
        f"{name}: {entry['regime_flag']}"
        for name, entry in summary["metrics"].items()
        if entry.get("regime_flag")
    ]
    out = [meta, ""] + lines
    if flags:
        out += ["", "flags: " + "; ".join(flags)]
    return "\n".join(out) + "\n"


def comparison_table(summary_a: dict, summary_b: dict, labels=("run A", "run B")) -> str:
    """Side-by-side medians for metrics and n values the two runs share."""
    header = ["metric", "n", f"median {labels[0]}", f"median {labels[1]}", "ratio"]
    rows = [header]
    shared = [m for m in summary_a["metrics"] if m in summary_b["metrics"]]
    for name in shared:
        ea, eb = summary_a["metrics"][name], summary_b["metrics"][name]
        for n in [n for n in ea["ns"] if n in eb["ns"]]:
            ma = ea["medians"][ea["ns"].index(n)]
            mb = eb["medians"][eb["ns"].index(n)]
            rows.append([name, str(n), _fmt(ma), _fmt(mb), _fmt(ma / mb if mb else None)])
    widths = [max(len(r[c]) for r in rows) for c in range(len(header))]
    lines = ["  ".join(cell.rjust(w) for cell, w in zip(row, widths)) for row in rows]
    return "\n".join(lines) + "\n"


def write_series(summary: dict, out_dir: Path) -> list[Path]:
    """Two-column (n, median) series per metric, plus baseline columns."""
    paths = []
    for name, entry in summary["metrics"].items():
        path = out_dir / f"series_{name}.csv"
        base = entry.get("baseline_medians")
        with path.open("w", newline="") as fh:
            fh.write("n,median" + (",baseline_median" if base else "") + "\n")
            for i, n in enumerate(entry["ns"]):
                row = f"{n},{entry['medians'][i]:.17g}"
                if base:
                    row += f",{base[i]:.17g}"
                fh.write(row + "\n")
        paths.append(path)
    return paths


def write_gnuplot_script(summary: dict, out_dir: Path) -> Path:
    path = out_dir / "plot.gp"
    lines = [
        "set logscale xy",
        "set datafile separator ','",
        "set xlabel 'n'",
        "set ylabel 'distance'",
        "set key left bottom",
        "set term pngcairo size 800,600",
    ]
    for name in summary["metrics"]:
        lines.append(f"set output 'gnuplot_{name}.png'")
        entry = summary["metrics"][name]
        plot = f"plot 'series_{name}.csv' skip 1 using 1:2 with linespoints title '{name}'"
        if entry.get("baseline_medians"):
            plot += (
                f", 'series_{name}.csv' skip 1 using 1:3 with lines dashtype 2"
                f" title '{name} baseline'"
            )
        lines.append(plot)
    path.write_text("\n".join(lines) + "\n")
    return path


def render_metric_figures(summary: dict, out_dir: Path) -> list[Path]:
    """One log-log median-vs-n figure per metric."""
    paths = []
    for name, entry in summary["metrics"].items():
        fig, ax = plt.subplots(figsize=(6.0, 4.0))
        ax.loglog(entry["ns"], entry["medians"], "o-", label=f"{name} median")
        ax.loglog(entry["ns"], entry["q90"], "s--", alpha=0.6, label=f"{name} q90")
        if entry.get("baseline_medians"):
            ax.loglog(
                entry["ns"],
                entry["baseline_medians"],
                ":",
                color="gray",
                label="baseline median",
            )
        ax.set_xlabel("n")
        ax.set_ylabel("distance")
        ax.set_title(f"{summary['model']}: {name} vs n (m={summary['m']})")
        ax.legend()
        ax.grid(True, which="both", alpha=0.3)
        fig.tight_layout()
        path = out_dir / f"fig_{name}.png"
        fig.savefig(path, dpi=150)
        plt.close(fig)
        paths.append(path)
    return paths


def render_covariance_figure(records: list[dict], out_dir: Path) -> Path:
    """Log-log deviation-vs-n curve with the Dirichlet-kernel bound."""
    ns = [r["n"] for r in records]
    devs = [r["deviation"] for r in records]
    bounds = [r["bound"] for r in records]
    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    ax.loglog(ns, devs, "o-", label="||C(n) - I/2||")
    if all(b is not None for b in bounds):
        ax.loglog(ns, bounds, "--", label="entry bound 1/(n sin(pi g))")
    ax.set_xlabel("n")
    ax.set_ylabel("deviation")
    ax.legend()
    ax.grid(True, which="both", alpha=0.3)
    fig.tight_layout()
    path = out_dir / "covariance_deviation.png"
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path


def default_out_dir(explicit: str | None) -> Path:
    """--out flag, else the RANDFOURIER_OUT env var, else the cwd."""
    if explicit:
        return Path(explicit)
    return Path(os.environ.get("RANDFOURIER_OUT", "."))
