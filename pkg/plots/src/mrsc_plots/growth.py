"""Vertex growth along the giant exploration vs the exponential limit curve.

Input: growth CSV (n, lam, trial, t, v, theory).  Per-trial trajectories are
thin; the limit 1 - exp(-lambda t) is the dashed reference.
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


def render(growth_csv, out_path, args=None):
    data = load_csv(growth_csv, ["n", "lam", "trial", "t", "v", "theory"])
    apply_style()
    fig, ax = plt.subplots()
    trials = [int(float(v)) for v in data["trial"]]
    ts = floats(data["t"])
    vs = floats(data["v"])
    for tr in sorted(set(trials)):
        xs = [t for t, m in zip(ts, trials) if m == tr]
        ys = [v for v, m in zip(vs, trials) if m == tr]
        ax.plot(xs, ys, "-", color="tab:gray", alpha=0.5, lw=0.9,
                label="exploration" if tr == min(trials) else None)
    theory_pairs = sorted(
        {(t, th) for t, th in zip(ts, floats(data["theory"])) if th == th}
    )
    if theory_pairs:
        ax.plot(
            [p[0] for p in theory_pairs],
            [p[1] for p in theory_pairs],
            "k--",
            lw=1.6,
            label="1 - exp(-lambda t)",
        )
    ax.set_ylim(0, 1.02)
    ax.legend()
    finish_axes(ax, args or _Defaults(), "vertex growth along the giant exploration",
                "t = step / n", "V(tn) / n")
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
