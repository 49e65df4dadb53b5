#!/usr/bin/env python3
"""Markdown digest of pntap CSV outputs found under summaries/."""
import argparse
import glob
import os
import re
import sys

import pandas as pd

from pntap.analysis.report import df_to_md

DENSITY_RE = re.compile(r"density_q(?P<q>\d+)_T(?P<T>[\d.]+)\.csv$")
PREDICT_RE = re.compile(r"predict_(?P<tag>[\w.-]+)\.csv$")


def _filter(files, regex, run_hint):
    out = []
    for p in sorted(files):
        base = os.path.basename(p)
        if run_hint and run_hint not in base:
            continue
        m = regex.search(base)
        if m:
            out.append((p, m))
    return out


def _read(path, cols):
    try:
        df = pd.read_csv(path)
    except pd.errors.EmptyDataError:
        df = pd.DataFrame(columns=cols)
    return df


def predict_section(path):
    df = _read(path, ["q", "relative_error", "implied_constant"])
    lines = [f"## Predictions ({os.path.basename(path)})\n"]
    if df.empty or "relative_error" not in df.columns:
        lines.append("_No prediction rows._")
        return lines
    agg = (df.groupby("q")
             .agg(rows=("relative_error", "size"),
                  median_rel=("relative_error", "median"),
                  worst_rel=("relative_error", "max"),
                  worst_implied=("implied_constant", "max"),
                  range_met=("range_condition_met", "mean"))
             .reset_index())
    lines.append(df_to_md(agg))
    return lines


def density_section(path, m):
    df = _read(path, ["sigma", "Nq", "Nq_star", "ratio"])
    lines = [f"## Zero density, q={m.group('q')}, T={m.group('T')}\n"]
    cols = [c for c in ["sigma", "Nq", "Nq_star", "bound_huxley", "nu", "ratio", "error"] if c in df.columns]
    lines.append(df_to_md(df[cols]) if cols else "_No expected columns found._")
    return lines


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--summaries_dir", default="summaries")
    ap.add_argument("--out", default="summaries/analysis_report.md")
    ap.add_argument("--run", default=None, help="substring a file name must contain")
    ap.add_argument("--sections", default="predict,density", help="Comma list: any of predict,density")
    args = ap.parse_args()

    sections = {s.strip().lower() for s in args.sections.split(",") if s.strip()}
    preds = _filter(glob.glob(os.path.join(args.summaries_dir, "predict_*.csv")), PREDICT_RE, args.run)
    dens = _filter(glob.glob(os.path.join(args.summaries_dir, "density_q*_T*.csv")), DENSITY_RE, args.run)
    if not preds and not dens:
        print("[analyze] No matching summary CSVs found.")
        sys.exit(1)

    report = ["# pntap - Analysis Report", ""]
    if "predict" in sections:
        for p, _ in preds:
            report += predict_section(p) + [""]
    if "density" in sections:
        # smallest modulus first, then height
        for p, m in sorted(dens, key=lambda pm: (int(pm[1].group("q")), float(pm[1].group("T")))):
            report += density_section(p, m) + [""]

    out_path = args.out
    os.makedirs(os.path.dirname(out_path) or ".", exist_ok=True)
    with open(out_path, "w", encoding="utf-8") as f:
        f.write("\n".join(report))
    print(f"[analyze] Wrote {out_path}")


if __name__ == "__main__":
    main()
