"""Render figures from an emitted result CSV.

This is a post-processing path: the experiment runners emit delimited data
only, and this module turns one of those files into a small set of matplotlib
figures saved next to it (ratio overview, band-decay curves when band terms
are present, residual spectrum).
"""

from __future__ import annotations

import csv
import os
from collections import defaultdict

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402


def _read_rows(path: str) -> list[dict]:
    rows = []
    with open(path, encoding="utf-8") as fh:
        reader = csv.DictReader(line for line in fh if not line.startswith("#"))
        for row in reader:
            rows.append(row)
    return rows


def _f(row, key):
    try:
        return float(row[key])
    except (KeyError, TypeError, ValueError):
        return None


def render_report(csv_path: str, out_dir: str = ".") -> list[str]:
    rows = _read_rows(csv_path)
    os.makedirs(out_dir, exist_ok=True)
    stem = os.path.splitext(os.path.basename(csv_path))[0]
    written = []

    ratio_rows = [r for r in rows if _f(r, "ratio") is not None]
    if ratio_rows:
        fig, ax = plt.subplots(figsize=(7, 4))
        by_check = defaultdict(list)
        for r in ratio_rows:
            by_check[r["check"]].append(_f(r, "ratio"))
        offset = 0
        for check, vals in sorted(by_check.items()):
            xs = range(offset, offset + len(vals))
            ax.plot(xs, vals, ".", ms=5, label=check)
            offset += len(vals)
        ax.axhline(1.0, color="0.4", lw=0.8, ls="--")
        ax.set_xlabel("row")
        ax.set_ylabel("ratio lhs/rhs")
        ax.set_title("check ratios")
        ax.legend(fontsize=7, loc="best")
        path = os.path.join(out_dir, f"{stem}_ratios.png")
        fig.savefig(path, dpi=150, bbox_inches="tight")
        plt.close(fig)
        written.append(path)

    band_rows = [r for r in rows if r["check"] == "band_term" and _f(r, "lhs")]
    if band_rows:
        fig, ax = plt.subplots(figsize=(7, 4))
        by_series = defaultdict(list)
        for r in band_rows:
            by_series[(r["notes"], r["p"])].append((int(float(r["n"])), _f(r, "lhs")))
        for (label, p), pts in sorted(by_series.items()):
            pts.sort()
            js = [j for j, _ in pts if j > 0]
            vals = [v for j, v in pts if j > 0]
            if js:
                ax.loglog(js, vals, "o-", ms=3, label=f"{label} (p={p})")
        ax.set_xlabel("band index j")
        ax.set_ylabel("weighted band term")
        ax.set_title("dyadic band decay")
        ax.legend(fontsize=7, loc="best")
        path = os.path.join(out_dir, f"{stem}_bands.png")
        fig.savefig(path, dpi=150, bbox_inches="tight")
        plt.close(fig)
        written.append(path)

    resid_rows = [r for r in rows if "residual" in r["check"] and _f(r, "lhs") is not None]
    if resid_rows:
        fig, ax = plt.subplots(figsize=(7, 4))
        vals = [max(_f(r, "lhs"), 1e-18) for r in resid_rows]
        labels = [r["check"] for r in resid_rows]
        ax.semilogy(range(len(vals)), vals, ".", ms=5)
        tols = [_f(r, "tol") for r in resid_rows]
        if any(t for t in tols):
            ax.semilogy(range(len(vals)), [t or float("nan") for t in tols], "r_",
                        ms=8, label="tolerance")
            ax.legend(fontsize=7)
        ax.set_xticks(range(len(vals)))
        ax.set_xticklabels(labels, rotation=90, fontsize=5)
        ax.set_ylabel("residual")
        ax.set_title("identity residuals vs tolerances")
        path = os.path.join(out_dir, f"{stem}_residuals.png")
        fig.savefig(path, dpi=150, bbox_inches="tight")
        plt.close(fig)
        written.append(path)
    return written
