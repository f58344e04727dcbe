"""Subcritical scaling: boxplots of s_{d-1}(C_max)/log n per complex size.

Input: subcritical CSV (n, trial, s_dm1_cmax, ratio_log_n, in_bracket).
"""

from __future__ import annotations

import sys

import matplotlib.pyplot as plt

from .common import (
    SchemaError,
    apply_style,
    finish_axes,
    floats,
    load_csv,
    make_parser,
    save,
)


def render(sub_csv, out_path, args=None):
    data = load_csv(sub_csv, ["n", "trial", "s_dm1_cmax", "ratio_log_n", "in_bracket"])
    apply_style()
    fig, ax = plt.subplots()
    ns = [int(float(v)) for v in data["n"]]
    ratios = floats(data["ratio_log_n"])
    order = sorted(set(ns))
    groups = [[r for r, m in zip(ratios, ns) if m == n] for n in order]
    ax.boxplot(groups, tick_labels=[str(n) for n in order], showmeans=True)
    finish_axes(ax, args or _Defaults(), "largest component size over log n",
                "n", "s_{d-1}(C_max) / log n")
    save(fig, out_path)


class _Defaults:
    title = xlabel = ylabel = None


def main(argv=None) -> int:
    p = make_parser(__doc__)
    args = p.parse_args(argv)
    try:
        render(args.infile, args.outfile, args)
    except SchemaError as exc:
        print(f"schema error: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
