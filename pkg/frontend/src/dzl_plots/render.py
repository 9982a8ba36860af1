"""Render figures from a dzl report.json (schema "dzl-report-1").

    render.py <report> --fig {thresholds,fourier,winding} -o out.png

The report is the single source of numeric truth: every plotted point comes
from its rows.  The only computed overlays are the two closed-form threshold
reference curves, drawn from the c and k constants echoed in the report
config.  Output is deterministic: fixed figure geometry, Agg backend, no
timestamps or toolchain metadata in the PNG.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import dataclass

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402

EXPECTED_SCHEMA = "dzl-report-1"
FIGURES = ("thresholds", "fourier", "winding")

_FIGSIZE = (8.0, 5.0)
_DPI = 120


class SchemaError(ValueError):
    pass


@dataclass
class ReportFile:
    path: str
    schema: str
    experiment: str
    config: dict
    rows: list


def load_report(path: str) -> ReportFile:
    with open(path) as fh:
        payload = json.load(fh)
    schema = payload.get("schema", "<missing>")
    if schema != EXPECTED_SCHEMA:
        raise SchemaError(
            f"schema mismatch: expected {EXPECTED_SCHEMA!r}, found {schema!r}")
    return ReportFile(path=path, schema=schema,
                      experiment=payload.get("experiment", ""),
                      config=payload.get("config", {}),
                      rows=payload.get("rows", []))


def _new_axes(title: str):
    fig, ax = plt.subplots(figsize=_FIGSIZE, dpi=_DPI)
    ax.set_title(title)
    return fig, ax

def _no_data(ax):
    ax.annotate("no data", xy=(0.5, 0.5), xycoords="axes fraction",
                ha="center", va="center", fontsize=14, color="gray")


def _rows_with(report: ReportFile, *cols):
    out = []
    for r in report.rows:
        if r.get("error"):
            continue
        if all(c in r and r[c] != "" for c in cols):
            out.append(r)
    return out


def _fig_thresholds(report: ReportFile):
    fig, ax = _new_axes(f"rightmost zeros vs thresholds ({report.experiment})")
    ax.set_xlabel("N")
    ax.set_ylabel("sigma")
    ax.set_xscale("log")
    c = float(report.config.get("c", 0.1))
    k = float(report.config.get("k", 1))
    rows_n = _rows_with(report, "N")
    ns = sorted(float(r["N"]) for r in rows_n if float(r["N"]) > math.e)
    if ns:
        import numpy as np

        grid = np.geomspace(min(ns), max(ns) * 1.05, 200)
        ll = np.log(np.log(grid)) / np.log(grid)
        ax.plot(grid, 1 + c * ll, label=f"1 + c loglogN/logN (c={c:g})",
                color="tab:blue")
        ax.plot(grid, 1 + (4 * k / math.pi - 1) * ll,
                label=f"1 + (4k/pi-1) loglogN/logN (k={k:g})",
                color="tab:red")
    pts = [(float(r["N"]), float(r["sigma_max"]))
           for r in _rows_with(report, "N", "sigma_max")
           if float(r["sigma_max"]) > 0]
    if pts:
        ax.scatter([p[0] for p in pts], [p[1] for p in pts], zorder=3,
                   color="black", label="sigma_max (report)")
    if not ns and not pts:
        _no_data(ax)
    if ns or pts:
        ax.legend(loc="best", fontsize=8)
    return fig


def _fig_fourier(report: ReportFile):
    fig, ax = _new_axes(f"Fourier coefficient decay ({report.experiment})")
    ax.set_xlabel("j")
    ax.set_ylabel("|coeff|")
    ax.set_yscale("log")
    rows = _rows_with(report, "delta", "j", "coeff_formula")
    if not rows:
        _no_data(ax)
        return fig
    by_delta: dict = {}
    for r in rows:
        by_delta.setdefault(float(r["delta"]), []).append(
            (int(r["j"]), abs(float(r["coeff_formula"]))))
    for d in sorted(by_delta):
        pts = sorted(by_delta[d])
        ax.plot([j for j, _ in pts], [v for _, v in pts], marker="o",
                markersize=3, label=f"delta={d:g}")
    # envelope C/(1+j^2) with C taken from the report rows, not recomputed
    env_rows = _rows_with(report, "j", "envelope_product")
    if env_rows:
        C = max(float(r["envelope_product"]) for r in env_rows)
        js = sorted({int(r["j"]) for r in env_rows})
        ax.plot(js, [C / (1 + j * j) for j in js], linestyle="--",
                color="gray", label=f"{C:.3g}/(1+j^2)")
    ax.legend(loc="best", fontsize=8)
    return fig


def _fig_winding(report: ReportFile):
    fig, ax = _new_axes(f"windings and margins ({report.experiment})")
    ax.set_ylabel("winding")
    rows5 = _rows_with(report, "N_log10", "winding")
    rows2 = _rows_with(report, "N", "winding_poly", "winding_model")
    if rows5:
        xs = [float(r["N_log10"]) for r in rows5]
        ax.set_xlabel("log10 N")
        ax.step(xs, [int(r["winding"]) for r in rows5], where="mid",
                label="model winding", color="tab:blue")
        ax2 = ax.twinx()
        ax2.set_ylabel("dominance ratios")
        ax2.set_yscale("log")
        ax2.plot(xs, [float(r["left_ratio"]) for r in rows5], "--",
                 color="tab:orange", label="left |M2/M1|")
        ax2.plot(xs, [float(r["right_ratio"]) for r in rows5], "--",
                 color="tab:green", label="right |M1/M2|")
        ax2.axhline(0.5, color="gray", linewidth=0.7)
        lines, labels = ax.get_legend_handles_labels()
        l2, lab2 = ax2.get_legend_handles_labels()
        ax.legend(lines + l2, labels + lab2, loc="best", fontsize=8)
    elif rows2:
        xs = [float(r["N"]) for r in rows2]
        ax.set_xlabel("N")
        ax.set_xscale("log")
        ax.step(xs, [int(r["winding_poly"]) for r in rows2], where="mid",
                label="polynomial winding", color="tab:blue")
        ax.step(xs, [int(r["winding_model"]) for r in rows2], where="mid",
                label="model winding", color="tab:red", linestyle=":")
        ax2 = ax.twinx()
        ax2.set_ylabel("rouche ratio")
        ax2.set_yscale("log")
        ax2.plot(xs, [float(r["rouche_ratio"]) for r in rows2], "--",
                 color="tab:orange", label="max |F-M|/|M|")
        ax2.axhline(1.0, color="gray", linewidth=0.7)
        lines, labels = ax.get_legend_handles_labels()
        l2, lab2 = ax2.get_legend_handles_labels()
        ax.legend(lines + l2, labels + lab2, loc="best", fontsize=8)
    else:
        _no_data(ax)
    return fig


def render(report: ReportFile, figure: str, out_path: str) -> str:
    """Write the requested figure as PNG; returns out_path."""
    if figure not in FIGURES:
        raise ValueError(f"unknown figure {figure!r}; choose from {FIGURES}")
    fig = {"thresholds": _fig_thresholds, "fourier": _fig_fourier,
           "winding": _fig_winding}[figure](report)
    try:
        fig.savefig(out_path, format="png",
                    metadata={"Software": None})
    finally:
        plt.close(fig)
    return out_path


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(
        prog="dzl-render", description="render figures from a dzl report")
    ap.add_argument("report", help="path to report.json")
    ap.add_argument("--fig", required=True, choices=FIGURES)
    ap.add_argument("-o", "--out", required=True)
    args = ap.parse_args(argv)
    try:
        rep = load_report(args.report)
    except (OSError, json.JSONDecodeError, SchemaError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    render(rep, args.fig, args.out)
    print(args.out)
    return 0


if __name__ == "__main__":
    sys.exit(main())
