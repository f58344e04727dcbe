"""Phase diagram: survival-probability curve vs Monte Carlo giant fractions.

Inputs: a theory CSV (lam, zeta, ...) and a sweep CSV (lam, s_dm1_cmax,
s_dm1_total, ...); the curve is exact (zero through the subcritical range),
the points are per-lambda means of s_dm1_cmax/s_dm1_total with 95% CIs.
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


def render(theory_csv, sweep_csv, out_path, args=None):
    theory = load_csv(theory_csv, ["lam", "zeta"])
    sweep = load_csv(sweep_csv, ["lam", "s_dm1_cmax", "s_dm1_total"])
    apply_style()
    fig, ax = plt.subplots()
    lams = floats(theory["lam"])
    zetas = floats(theory["zeta"])
    ax.plot(lams, zetas, "-", color="tab:blue", label="branching survival")

    fracs = [
        c / t if t else 0.0
        for c, t in zip(floats(sweep["s_dm1_cmax"]), floats(sweep["s_dm1_total"]))
    ]
    stats = group_mean_ci(floats(sweep["lam"]), fracs)
    xs = sorted(stats)
    ms = [stats[x][0] for x in xs]
    hs = [stats[x][1] for x in xs]
    ax.errorbar(xs, ms, yerr=hs, fmt="o", ms=4, capsize=3, color="tab:red",
                label="largest-component fraction")
    ax.set_ylim(-0.02, 1.02)
    ax.legend()
    finish_axes(ax, args or _Defaults(), "giant component phase diagram",
                "lambda", "fraction of (d-1)-simplices")
    save(fig, out_path)


class _Defaults:
    title = xlabel = ylabel = None


def main(argv=None) -> int:
    p = make_parser(__doc__)
    p.add_argument("--theory", required=True, help="theory CSV path")
    args = p.parse_args(argv)
    try:
        render(args.theory, args.infile, args.outfile, args)
    except SchemaError as exc:
        print(f"schema error: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
