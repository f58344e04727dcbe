"""Command-line harness: generate | components | explore | census | theory |
sweep | lwc | subcritical | vertex | connect.

Global conventions: --seed sets the master seed, --out the output path
(stdout when omitted where sensible), --format csv|jsonl, --config a
YAML/JSON tree whose keys mirror the flags.  Exit codes: 0 ok, 2 config
error, 3 resource budget exceeded.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys

import numpy as np


def _load_config(path):
    import yaml

    with open(path) as fh:
        if path.endswith(".json"):
            return json.load(fh)
        return yaml.safe_load(fh) or {}


def _parse_grid(text):
    """Comma list '1,2,3' or 'start:stop:step' range (inclusive stop)."""
    if isinstance(text, (list, tuple)):
        return [float(v) for v in text]
    if ":" in text:
        a, b, s = (float(v) for v in text.split(":"))
        out = []
        v = a
        while v <= b + 1e-12:
            out.append(round(v, 12))
            v += s
        return out
    return [float(v) for v in text.split(",")]


def _int_grid(text):
    return [int(v) for v in (text.split(",") if isinstance(text, str) else text)]


def _add_common(p):
    p.add_argument("--seed", type=int, default=0, help="master seed")
    p.add_argument("--out", type=str, default=None, help="output path")
    p.add_argument("--format", dest="fmt", choices=("csv", "jsonl"), default="csv")
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--config", type=str, default=None, help="YAML/JSON config file")
    p.add_argument("--timings", action="store_true", help="include elapsed_ms values")


def _gen_params(args):
    from .generate import GenParams

    if args.model == "lm":
        return GenParams.lm(args.n, args.d, args.lam)
    return GenParams.mrsc2(args.n, args.lam, args.alpha1)


def _apply_config(args, parser, argv):
    """Config-file values fill in flags the command line did not set."""
    if getattr(args, "config", None):
        cfg = _load_config(args.config)
        given = {a.split("=")[0].lstrip("-").replace("-", "_") for a in argv if a.startswith("--")}
        for key, val in cfg.items():
            key = key.replace("-", "_")
            if not hasattr(args, key):
                parser.error(f"unknown config key {key!r}")
            if key not in given:
                setattr(args, key, val)
    return args


def _write_table(path, header, rows):
    fh = open(path, "w", newline="") if path else sys.stdout
    try:
        w = csv.writer(fh)
        w.writerow(header)
        for r in rows:
            w.writerow(r)
    finally:
        if path:
            fh.close()


def cmd_generate(args):
    from .complexes import write_jsonl
    from .generate import sample
    from .seeds import Seed

    gp = _gen_params(args)
    x = sample(gp, Seed(args.seed, args.trial), coupled=args.coupled)
    out = args.out or "complex.jsonl"
    n_rec = write_jsonl(x, out)
    print(f"wrote {n_rec} maximal simplices to {out}", file=sys.stderr)
    return 0


def cmd_components(args):
    from .complexes import read_jsonl
    from .components import component_map

    x = read_jsonl(args.infile, d=args.d)
    rep = component_map(x)
    doc = rep.to_json(include_labels=args.labels)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(doc + "\n")
    else:
        print(doc)
    return 0


def cmd_explore(args):
    from .complexes import read_jsonl
    from .exploration import explore

    x = read_jsonl(args.infile, d=args.d)
    root = tuple(int(v) for v in args.root.split(","))
    trace = explore(x, root, step_cap=args.cap)
    rows = [
        (s.k, s.f, s.b, s.h, s.active_after, s.vertices, s.dist) for s in trace.steps
    ]
    _write_table(args.out, ["k", "F", "B", "H", "A", "V", "dist"], rows)
    print(
        f"terminated={trace.terminated} steps={len(trace.steps)}", file=sys.stderr
    )
    return 0


def cmd_census(args):
    from .complexes import read_jsonl
    from .exploration import census
    from .seeds import Seed

    x = read_jsonl(args.infile, d=args.d)
    c = census(x, args.radius, args.cap, Seed(args.seed, 0))
    rows = [
        (code.hex(), c.counts[code], c.freq[code])
        for code in sorted(c.counts, key=lambda k: (-c.counts[k], k))
    ]
    _write_table(args.out, ["code_hex", "count", "freq"], rows)
    return 0


def cmd_theory(args):
    from .experiments import theory_rows

    rows = theory_rows(args.d, _parse_grid(args.lam_grid), args.margin)
    _write_table(args.out, ["lam", "gamma", "zeta", "density", "rate_I", "c", "C"], rows)
    return 0


def cmd_sweep(args):
    from .experiments import SweepConfig, run_sweep, write_rows

    cfg = SweepConfig(
        model=args.model,
        d=args.d,
        n_grid=_int_grid(args.n_grid),
        lam_grid=_parse_grid(args.lam_grid),
        alpha1=args.alpha1,
        trials=args.trials,
        master_seed=args.seed,
        census_radius=args.census_radius,
        coupled=args.coupled,
        threads=args.threads,
        timings=args.timings,
        allow_out_of_theory=args.allow_out_of_theory,
        cell_budget_s=args.cell_budget,
    )
    rows = run_sweep(cfg)
    out = args.out or "sweep.csv"
    write_rows(rows, out, args.fmt)
    print(f"wrote {len(rows)} rows to {out}", file=sys.stderr)
    return 0


def cmd_lwc(args):
    from .experiments import lwc_experiment

    rep = lwc_experiment(
        args.d,
        args.lam,
        _int_grid(args.n_grid),
        args.trials,
        args.seed,
        radius=args.radius,
        census_cap=args.cap,
        ref_samples=args.ref_samples,
    )
    _write_table(args.out, ["n", "trial", "census_tv", "comp_frac"], rep.rows)
    from .experiments import mean_ci

    m, lo, hi = mean_ci([r[3] for r in rep.rows])
    print(
        f"density_theory={rep.density_theory:.6f} "
        f"mean_comp_frac={m:.6f} ci=({lo:.6f},{hi:.6f}) "
        + " ".join(f"tv[n={n}]={v:.4f}" for n, v in sorted(rep.mean_tv_by_n.items())),
        file=sys.stderr,
    )
    return 0


def cmd_subcritical(args):
    from .errors import ConfigError
    from .experiments import subcritical_experiment

    if args.lam >= 1.0 / args.d:
        raise ConfigError(f"subcritical experiment needs lambda < 1/d, got {args.lam}")
    rep = subcritical_experiment(
        args.d, args.lam, _int_grid(args.n_grid), args.trials, args.seed,
        margin=args.margin, threads=args.threads,
    )
    _write_table(
        args.out, ["n", "trial", "s_dm1_cmax", "ratio_log_n", "in_bracket"], rep.rows
    )
    print(
        f"c={rep.c:.4f} C={rep.big_c:.4f} bracket_rate={rep.bracket_rate:.4f} "
        f"slope={rep.slope:.4f} ci=({rep.slope_lo:.4f},{rep.slope_hi:.4f})",
        file=sys.stderr,
    )
    return 0


def cmd_vertex(args):
    from .experiments import vertex_experiment

    growth_grid = _parse_grid(args.growth_grid) if args.growth_grid else None
    rep = vertex_experiment(
        args.d, _parse_grid(args.lam_grid), _int_grid(args.n_grid),
        args.trials, args.seed, growth_grid=growth_grid,
    )
    _write_table(args.out, ["n", "lam", "trial", "s0_frac"], rep.rows)
    from .experiments import mean_ci

    cells = sorted({(r[0], r[1]) for r in rep.rows})
    summary = []
    for n, lam in cells:
        m, lo, hi = mean_ci([r[3] for r in rep.rows if (r[0], r[1]) == (n, lam)])
        summary.append(f"n={n},lam={lam}: {m:.4f} ci=({lo:.4f},{hi:.4f})")
    print("; ".join(summary), file=sys.stderr)
    if args.growth_out and rep.growth:
        _write_table(
            args.growth_out, ["n", "lam", "trial", "t", "v", "theory"], rep.growth
        )
    return 0


def cmd_connect(args):
    from .experiments import connect_experiment

    rep = connect_experiment(
        args.d, args.lam, _int_grid(args.n_grid), args.trials,
        args.k, args.pairs, args.seed,
    )
    _write_table(
        args.out, ["n", "lam", "trial", "k", "p_both_large", "ratio"], rep.rows
    )
    return 0


def build_parser():
    p = argparse.ArgumentParser(prog="mrsc", description=__doc__)
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, fn, setup):
        sp = sub.add_parser(name)
        setup(sp)
        _add_common(sp)
        sp.set_defaults(fn=fn)
        return sp

    def gen_args(sp):
        sp.add_argument("--model", choices=("lm", "mrsc"), default="lm")
        sp.add_argument("--n", type=int, required=True)
        sp.add_argument("--d", type=int, default=2)
        sp.add_argument("--lam", type=float, required=True)
        sp.add_argument("--alpha1", type=float, default=0.25)
        sp.add_argument("--trial", type=int, default=0)
        sp.add_argument("--coupled", action="store_true")

    add("generate", cmd_generate, gen_args)

    def comp_args(sp):
        sp.add_argument("infile")
        sp.add_argument("--d", type=int, default=None)
        sp.add_argument("--labels", action="store_true")

    add("components", cmd_components, comp_args)

    def explore_args(sp):
        sp.add_argument("infile")
        sp.add_argument("--root", required=True, help="comma list of vertex ids")
        sp.add_argument("--d", type=int, default=None)
        sp.add_argument("--cap", type=int, default=None)

    add("explore", cmd_explore, explore_args)

    def census_args(sp):
        sp.add_argument("infile")
        sp.add_argument("--d", type=int, default=None)
        sp.add_argument("--radius", type=int, default=1)
        sp.add_argument("--cap", type=int, default=20000)

    add("census", cmd_census, census_args)

    def theory_args(sp):
        sp.add_argument("--d", type=int, default=2)
        sp.add_argument("--lam-grid", default="0.1:3.0:0.1")
        sp.add_argument("--margin", type=float, default=0.1)

    add("theory", cmd_theory, theory_args)

    def sweep_args(sp):
        sp.add_argument("--model", choices=("lm", "mrsc"), default="lm")
        sp.add_argument("--d", type=int, default=2)
        sp.add_argument("--n-grid", default="200")
        sp.add_argument("--lam-grid", default="1.0")
        sp.add_argument("--alpha1", type=float, default=0.0)
        sp.add_argument("--trials", type=int, default=10)
        sp.add_argument("--census-radius", type=int, default=None)
        sp.add_argument("--coupled", action="store_true")
        sp.add_argument("--allow-out-of-theory", action="store_true")
        sp.add_argument("--cell-budget", type=float, default=120.0,
                        help="wall-clock seconds per cell; overruns flag rows")

    add("sweep", cmd_sweep, sweep_args)

    def lwc_args(sp):
        sp.add_argument("--d", type=int, default=2)
        sp.add_argument("--lam", type=float, default=1.5)
        sp.add_argument("--n-grid", default="250,500,1000")
        sp.add_argument("--trials", type=int, default=20)
        sp.add_argument("--radius", type=int, default=1)
        sp.add_argument("--cap", type=int, default=None)
        sp.add_argument("--ref-samples", type=int, default=100_000,
                        help="tree draws for the radius>=2 reference law")

    add("lwc", cmd_lwc, lwc_args)

    def subcritical_args(sp):
        sp.add_argument("--d", type=int, default=2)
        sp.add_argument("--lam", type=float, default=0.3)
        sp.add_argument("--n-grid", default="1024,4096,16384")
        sp.add_argument("--trials", type=int, default=50)
        sp.add_argument("--margin", type=float, default=0.1)

    add("subcritical", cmd_subcritical, subcritical_args)

    def vertex_args(sp):
        sp.add_argument("--d", type=int, default=2)
        sp.add_argument("--lam-grid", default="0.3,1.0")
        sp.add_argument("--n-grid", default="1000")
        sp.add_argument("--trials", type=int, default=20)
        sp.add_argument("--growth-grid", default=None)
        sp.add_argument("--growth-out", default=None)

    add("vertex", cmd_vertex, vertex_args)

    def connect_args(sp):
        sp.add_argument("--d", type=int, default=2)
        sp.add_argument("--lam", type=float, default=2.0)
        sp.add_argument("--n-grid", default="500,1000,1500")
        sp.add_argument("--trials", type=int, default=5)
        sp.add_argument("--k", type=int, default=50)
        sp.add_argument("--pairs", type=int, default=2000)

    add("connect", cmd_connect, connect_args)
    return p


def main(argv=None) -> int:
    from .errors import ConfigError, ResourceBudgetError

    parser = build_parser()
    given = list(sys.argv[1:] if argv is None else argv)
    args = parser.parse_args(given)
    args = _apply_config(args, parser, given)
    np.seterr(all="ignore")
    try:
        return args.fn(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except ResourceBudgetError as exc:
        print(f"resource budget exceeded: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
