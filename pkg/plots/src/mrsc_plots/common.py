"""Shared plumbing: strict CSV loading and deterministic figure rendering.

These scripts are pure consumers of the experiment CSV schemas; the only
coupling to the simulation package is the column contract.  Rendering is
deterministic: fixed style, no timestamps, scrubbed metadata, so identical
inputs produce byte-identical image files.
"""

from __future__ import annotations

import argparse
import csv

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402


class SchemaError(ValueError):
    """Input CSV is missing required columns."""


def load_csv(path, required: list) -> dict:
    """Column-wise CSV load; raises SchemaError listing any missing columns."""
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise SchemaError(f"{path}: empty file") from None
        missing = [c for c in required if c not in header]
        if missing:
            raise SchemaError(f"{path}: missing columns {missing}; header was {header}")
        idx = {c: header.index(c) for c in header}
        cols: dict = {c: [] for c in header}
        for row in reader:
            if not row:
                continue
            for c, i in idx.items():
                cols[c].append(row[i])
    return cols


def floats(col):
    return [float(v) for v in col]


def apply_style():
    plt.rcdefaults()
    plt.rcParams.update(
        {
            "figure.figsize": (6.4, 4.2),
            "figure.dpi": 110,
            "savefig.dpi": 150,
            "font.size": 10,
            "axes.grid": True,
            "grid.alpha": 0.3,
            "svg.hashsalt": "mrsc-plots",
        }
    )


def save(fig, out_path):
    """Write the figure without timestamps or tool-version metadata."""
    if out_path.endswith(".svg"):
        fig.savefig(out_path, metadata={"Date": None, "Creator": None})
    elif out_path.endswith(".pdf"):
        fig.savefig(
            out_path,
            metadata={"CreationDate": None, "Producer": None, "Creator": None},
        )
    else:
        fig.savefig(out_path, metadata={"Software": "mrsc-plots"})
    plt.close(fig)


def make_parser(description):
    p = argparse.ArgumentParser(description=description)
    p.add_argument("--in", dest="infile", required=True, help="input CSV")
    p.add_argument("--out", dest="outfile", required=True, help="output image path")
    p.add_argument("--title", default=None)
    p.add_argument("--xlabel", default=None)
    p.add_argument("--ylabel", default=None)
    return p


def finish_axes(ax, args, title, xlabel, ylabel):
    ax.set_title(args.title or title)
    ax.set_xlabel(args.xlabel or xlabel)
    ax.set_ylabel(args.ylabel or ylabel)


def group_mean_ci(keys, values, z=1.96):
    """Per-key mean and normal-approximation 95% CI half-widths."""
    import numpy as np

    out = {}
    keys = list(keys)
    values = np.asarray(list(values), dtype=float)
    arr = np.asarray(keys)
    for k in sorted(set(keys)):
        vs = values[arr == k]
        m = float(vs.mean())
        half = z * float(vs.std(ddof=1)) / len(vs) ** 0.5 if len(vs) > 1 else 0.0
        out[k] = (m, half)
    return out
