"""Vertex-fraction discontinuity: s0(C_max)/n against lambda, one series per n.

Input: vertex CSV (n, lam, trial, s0_frac).  The dashed vertical line marks
the critical point lambda = 1/d (d = 2 by default).
"""

from __future__ import annotations

import sys

import matplotlib.pyplot as plt

from .common import (
    SchemaError,
    apply_style,
    finish_axes,
    floats,
    group_mean_ci,
    load_csv,
    make_parser,
    save,
)


def render(vertex_csv, out_path, d=2, args=None):
    data = load_csv(vertex_csv, ["n", "lam", "trial", "s0_frac"])
    apply_style()
    fig, ax = plt.subplots()
    ns = [int(float(v)) for v in data["n"]]
    lams = floats(data["lam"])
    fr = floats(data["s0_frac"])
    for n in sorted(set(ns)):
        sub_l = [l for l, m in zip(lams, ns) if m == n]
        sub_f = [f for f, m in zip(fr, ns) if m == n]
        stats = group_mean_ci(sub_l, sub_f)
        xs = sorted(stats)
        ax.errorbar(
            xs,
            [stats[x][0] for x in xs],
            yerr=[stats[x][1] for x in xs],
            fmt="o-",
            ms=4,
            capsize=3,
            label=f"n = {n}",
        )
    ax.axvline(1.0 / d, color="k", ls="--", lw=1, label=f"lambda = 1/{d}")
    ax.set_ylim(-0.02, 1.02)
    ax.legend()
    finish_axes(ax, args or _Defaults(), "vertex fraction of the largest component",
                "lambda", "s0(C_max) / n")
    save(fig, out_path)


class _Defaults:
    title = xlabel = ylabel = None


def main(argv=None) -> int:
    p = make_parser(__doc__)
    p.add_argument("--d", type=int, default=2)
    args = p.parse_args(argv)
    try:
        render(args.infile, args.outfile, args.d, args)
    except SchemaError as exc:
        print(f"schema error: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
