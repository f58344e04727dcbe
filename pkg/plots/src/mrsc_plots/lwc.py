"""Census convergence: total-variation distance to the limit law against n.

Input: lwc CSV (n, trial, census_tv, comp_frac).
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


def render(lwc_csv, out_path, args=None):
    data = load_csv(lwc_csv, ["n", "trial", "census_tv", "comp_frac"])
    apply_style()
    fig, ax = plt.subplots()
    ns = [int(float(v)) for v in data["n"]]
    tvs = floats(data["census_tv"])
    stats = group_mean_ci(ns, tvs)
    xs = sorted(stats)
    ax.errorbar(
        xs,
        [stats[x][0] for x in xs],
        yerr=[stats[x][1] for x in xs],
        fmt="o-",
        ms=5,
        capsize=3,
        color="tab:purple",
    )
    ax.set_xscale("log", base=2)
    ax.set_ylim(bottom=0)
    finish_axes(ax, args or _Defaults(), "census distance to the local limit law",
                "n", "total variation")
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
