"""Reproducible experiment cells: one TrialRow per (model cell, trial).

The CLI and the acceptance suite both drive these functions, so the numbers
reported by either come from identical code paths.  Rows are deterministic
given the master seed; wall-clock timing is opt-in so that output files stay
byte-identical across reruns.
"""

from __future__ import annotations

import csv
import io
import json
import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field

import numpy as np
from scipy.stats import t as student_t

from .branching import BranchingParams, component_density, subcritical_constants, survival_zeta
from .components import component_map
from .errors import ConfigError
from .exploration import census, star_code, two_source_connectivity, vertex_growth_curve
from .generate import GenParams, derive_params, sample, supercritical_bound
from .indexing import IndexedComplex
from .seeds import Seed

TRIAL_FIELDS = [
    "model",
    "d",
    "n",
    "lam",
    "alpha1",
    "trial",
    "seed",
    "s_dm1_total",
    "s_dm1_cmax",
    "s_dm1_c2",
    "s0_cmax",
    "s0_c2",
    "n_components",
    "census_tv",
    "elapsed_ms",
    "error",
]


@dataclass
class TrialRow:
    model: str
    d: int
    n: int
    lam: float
    alpha1: float | None
    trial: int
    seed: int
    s_dm1_total: int = 0
    s_dm1_cmax: int = 0
    s_dm1_c2: int = 0
    s0_cmax: int = 0
    s0_c2: int = 0
    n_components: int = 0
    census_tv: float | None = None
    elapsed_ms: int | None = None
    error: str = ""

    def values(self) -> list:
        d = asdict(self)
        return [_fmt(d[k]) for k in TRIAL_FIELDS]


def _fmt(v):
    if v is None:
        return ""
    if isinstance(v, float):
        return repr(v)
    return v


def write_rows(rows, path, fmt: str = "csv", fields=TRIAL_FIELDS) -> None:
    if fmt == "csv":
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(fields)
            for r in rows:
                w.writerow(r.values() if hasattr(r, "values") else r)
    elif fmt == "jsonl":
        with open(path, "w") as fh:
            for r in rows:
                vals = r.values() if hasattr(r, "values") else r
                fh.write(json.dumps(dict(zip(fields, vals))) + "\n")
    else:
        raise ConfigError(f"unknown format {fmt!r}")


def rows_to_csv_bytes(rows, fields=TRIAL_FIELDS) -> bytes:
    buf = io.StringIO()
    w = csv.writer(buf)
    w.writerow(fields)
    for r in rows:
        w.writerow(r.values() if hasattr(r, "values") else r)
    return buf.getvalue().encode()


# ---------------------------------------------------------------------------
# single trial


def poisson_star_law(d: int, lam: float, mass_cap: float = 1e-9) -> dict:
    """Radius-1 Poisson-tree law keyed by canonical star codes (residual dropped)."""
    law = {}
    j = 0
    total = 0.0
    while total < 1.0 - mass_cap and j < 400:
        p = math.exp(-lam) * lam**j / math.factorial(j)
        law[star_code(d, j)] = p
        total += p
        j += 1
    return law


def run_trial(
    gp: GenParams,
    seed: Seed,
    census_radius: int | None = None,
    census_cap: int | None = 20_000,
    coupled: bool = False,
    timings: bool = False,
) -> tuple[TrialRow, object]:
    """Sample one complex, analyze components (and optionally the census)."""
    _, _, lam = derive_params(gp)
    row = TrialRow(
        model=gp.model,
        d=gp.d,
        n=gp.n,
        lam=lam,
        alpha1=gp.alpha[0] if gp.alpha else None,
        trial=seed.trial,
        seed=seed.master,
    )
    t0 = time.perf_counter()
    x = sample(gp, seed, coupled=coupled)
    rep = component_map(x)
    row.s_dm1_total = rep.n_faces
    row.s_dm1_cmax = rep.cmax_size
    row.s_dm1_c2 = rep.c2_size
    row.s0_cmax = rep.top[0].s0 if rep.top else 0
    row.s0_c2 = rep.top[1].s0 if len(rep.top) > 1 else 0
    row.n_components = rep.n_components
    if census_radius is not None:
        c = census(x, census_radius, census_cap, seed)
        if census_radius == 1:
            row.census_tv = c.tv_distance(poisson_star_law(gp.d, lam))
    if timings:
        row.elapsed_ms = int(1000 * (time.perf_counter() - t0))
    return row, rep


def _cell_params(model, n, d, lam, alpha1) -> GenParams:
    if model == "lm":
        return GenParams.lm(n, d, lam)
    if d != 2:
        raise ConfigError("mrsc sweeps are parameterized for d = 2 only")
    return GenParams.mrsc2(n, lam, alpha1)


@dataclass
class SweepConfig:
    model: str = "lm"
    d: int = 2
    n_grid: list = field(default_factory=lambda: [200])
    lam_grid: list = field(default_factory=lambda: [1.0])
    alpha1: float = 0.0
    trials: int = 10
    master_seed: int = 0
    census_radius: int | None = None
    step_cap: int | None = None
    coupled: bool = False
    threads: int = 1
    timings: bool = False
    out: str | None = None
    fmt: str = "csv"
    allow_out_of_theory: bool = False
    cell_budget_s: float = 120.0  # wall-clock per cell; overruns flag remaining rows

    def cells(self):
        for n in self.n_grid:
            for lam in self.lam_grid:
                yield n, lam

    def validate(self):
        bound = supercritical_bound(self.alpha1)
        for n, lam in self.cells():
            _cell_params(self.model, n, self.d, lam, self.alpha1)
            if self.model == "mrsc" and lam >= bound and not self.allow_out_of_theory:
                raise ConfigError(
                    f"lambda={lam} >= bound {bound:.4g} for alpha1={self.alpha1}; "
                    "pass allow_out_of_theory to run anyway"
                )


def run_sweep(cfg: SweepConfig) -> list[TrialRow]:
    """One TrialRow per (cell, trial), ordered by (cell index, trial index)."""
    cfg.validate()
    tasks = []
    for ci, (n, lam) in enumerate(cfg.cells()):
        gp = _cell_params(cfg.model, n, cfg.d, lam, cfg.alpha1)
        for t in range(cfg.trials):
            tasks.append((ci, t, gp))

    spent: dict = {}

    def work(task):
        ci, t, gp = task
        _, _, lam = derive_params(gp)
        if spent.get(ci, 0.0) > cfg.cell_budget_s:
            return ci, t, TrialRow(
                gp.model, gp.d, gp.n, lam, gp.alpha[0] if gp.alpha else None,
                t, cfg.master_seed,
                error=f"cell budget {cfg.cell_budget_s}s exceeded",
            )
        t_start = time.perf_counter()
        try:
            row, _ = run_trial(
                gp,
                Seed(cfg.master_seed, t),
                census_radius=cfg.census_radius,
                coupled=cfg.coupled,
                timings=cfg.timings,
            )
        except Exception as exc:  # budget errors become flagged rows
            row = TrialRow(
                gp.model, gp.d, gp.n, lam, gp.alpha[0] if gp.alpha else None,
                t, cfg.master_seed, error=str(exc),
            )
        spent[ci] = spent.get(ci, 0.0) + (time.perf_counter() - t_start)
        return ci, t, row

    if cfg.threads > 1:
        with ThreadPoolExecutor(max_workers=cfg.threads) as ex:
            results = list(ex.map(work, tasks))
    else:
        results = [work(t) for t in tasks]
    results.sort(key=lambda r: (r[0], r[1]))
    return [r for _, _, r in results]


# ---------------------------------------------------------------------------
# statistics helpers


def mean_ci(xs, level: float = 0.95) -> tuple[float, float, float]:
    xs = np.asarray(xs, dtype=float)
    m = float(xs.mean())
    if xs.size < 2:
        return m, m, m
    se = float(xs.std(ddof=1) / math.sqrt(xs.size))
    q = float(student_t.ppf(0.5 + level / 2, xs.size - 1))
    return m, m - q * se, m + q * se


def fraction_ci(hits: int, total: int, level: float = 0.95) -> tuple[float, float, float]:
    p = hits / total if total else 0.0
    if total == 0:
        return 0.0, 0.0, 0.0
    z = float(student_t.ppf(0.5 + level / 2, max(total - 1, 1)))
    se = math.sqrt(max(p * (1 - p), 1e-12) / total)
    return p, max(0.0, p - z * se), min(1.0, p + z * se)


def ols_slope_ci(x, y, level: float = 0.95) -> tuple[float, float, float]:
    """Least-squares slope of y on x with a t confidence interval."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    n = x.size
    xm, ym = x.mean(), y.mean()
    sxx = float(((x - xm) ** 2).sum())
    slope = float(((x - xm) * (y - ym)).sum() / sxx)
    resid = y - ym - slope * (x - xm)
    dof = max(n - 2, 1)
    se = math.sqrt(float((resid**2).sum()) / dof / sxx)
    q = float(student_t.ppf(0.5 + level / 2, dof))
    return slope, slope - q * se, slope + q * se


# ---------------------------------------------------------------------------
# named experiments


@dataclass
class SubcriticalReport:
    lam: float
    d: int
    c: float
    big_c: float
    rows: list  # (n, trial, cmax, ratio, in_bracket)
    bracket_rate: float
    slope: float
    slope_lo: float
    slope_hi: float


def subcritical_experiment(
    d: int,
    lam: float,
    n_grid: list,
    trials: int,
    master_seed: int,
    margin: float = 0.1,
    threads: int = 1,
) -> SubcriticalReport:
    """Subcritical log-scaling report: bracket rate and ratio-vs-log-n slope."""
    bp = BranchingParams(lam, d)
    c, big_c = subcritical_constants(bp, margin)
    cfg = SweepConfig(
        model="lm", d=d, n_grid=list(n_grid), lam_grid=[lam],
        trials=trials, master_seed=master_seed, threads=threads,
        cell_budget_s=math.inf,
    )
    rows = []
    hits = 0
    xs, ys = [], []
    for r in run_sweep(cfg):
        if r.error:
            raise RuntimeError(f"trial failed: {r.error}")
        logn = math.log(r.n)
        ratio = r.s_dm1_cmax / logn
        ok = c * logn <= r.s_dm1_cmax <= big_c * logn
        hits += ok
        xs.append(logn)
        ys.append(ratio)
        rows.append((r.n, r.trial, r.s_dm1_cmax, ratio, ok))
    slope, lo, hi = ols_slope_ci(xs, ys)
    return SubcriticalReport(
        lam, d, c, big_c, rows, hits / len(rows), slope, lo, hi
    )


@dataclass
class LwcReport:
    rows: list  # (n, trial, tv, comp_frac)
    density_theory: float
    mean_tv_by_n: dict
    mean_comp_frac: float


def lwc_experiment(
    d: int,
    lam: float,
    n_grid: list,
    trials: int,
    master_seed: int,
    radius: int = 1,
    census_cap: int | None = None,
    threads: int = 1,
    ref_samples: int = 100_000,
) -> LwcReport:
    """Census vs Poisson-tree law (TV) and component count vs oracle density.

    Radius 1 compares against the exact star law; radii 2-3 against a
    ``ref_samples``-draw Monte Carlo tree census (the oracle route).
    """
    if radius > 3:
        raise ConfigError("census radius capped at 3")
    bp = BranchingParams(lam, d)
    density = component_density(bp)
    ref_law = None
    if radius > 1:
        ref_law = poisson_tree_law_sampled(d, lam, radius, ref_samples, master_seed + 1)
    rows = []
    tv_by_n: dict = {}
    comp_fracs = []
    for n in n_grid:
        gp = _cell_params("lm", n, d, lam, 0.0)
        for t in range(trials):
            seed = Seed(master_seed, t)
            row, rep = run_trial(gp, seed, census_radius=radius, census_cap=census_cap)
            if radius > 1:
                x = sample(gp, seed)
                c = census(x, radius, census_cap, seed)
                row.census_tv = c.tv_distance(ref_law)
            frac = row.n_components / row.s_dm1_total
            rows.append((n, t, row.census_tv, frac))
            tv_by_n.setdefault(n, []).append(row.census_tv)
            comp_fracs.append(frac)
    return LwcReport(
        rows,
        density,
        {n: float(np.mean(v)) for n, v in tv_by_n.items()},
        float(np.mean(comp_fracs)),
    )


@dataclass
class VertexReport:
    rows: list  # (n, lam, trial, s0_frac)
    growth: list  # (n, lam, trial, t, v, theory)
    growth_truncated: int


def vertex_experiment(
    d: int,
    lam_grid: list,
    n_grid: list,
    trials: int,
    master_seed: int,
    growth_grid: list | None = None,
    threads: int = 1,
) -> VertexReport:
    """Vertex-fraction report over (n, lambda) cells, with optional growth curves."""
    rows = []
    growth = []
    truncated = 0
    for n in n_grid:
        for lam in lam_grid:
            gp = GenParams.lm(n, d, lam)
            for t in range(trials):
                seed = Seed(master_seed, t)
                x = sample(gp, seed)
                rep = component_map(x)
                rows.append((n, lam, t, rep.top[0].s0 / n if rep.top else 0.0))
                if growth_grid:
                    idx = IndexedComplex(x)
                    root = idx.face_tuple(rep.top[0].min_member)
                    pts, trunc = vertex_growth_curve(
                        x, root, growth_grid, lam=lam, index=idx, check_giant=False
                    )
                    truncated += trunc
                    for p in pts:
                        growth.append((n, lam, t, p.t, p.v, p.theory))
    return VertexReport(rows, growth, truncated)


@dataclass
class ConnectReport:
    rows: list  # (n, lam, trial, k, p_both_large, ratio)


def connect_experiment(
    d: int,
    lam: float,
    n_grid: list,
    trials: int,
    k: int,
    pairs: int,
    master_seed: int,
) -> ConnectReport:
    rows = []
    for n in n_grid:
        gp = GenParams.lm(n, d, lam)
        for t in range(trials):
            seed = Seed(master_seed, t)
            x = sample(gp, seed)
            est = two_source_connectivity(x, k, pairs, seed)
            rows.append((n, lam, t, k, est.p_both_large, est.connection_given_large))
    return ConnectReport(rows)


def poisson_tree_law_sampled(
    d: int, lam: float, radius: int, samples: int, master_seed: int
) -> dict:
    """Monte Carlo reference law for radius >= 2 censuses (r = 1 is exact)."""
    from .branching import sample_poisson_tree
    from .neighborhoods import canonical_code

    counts: dict = {}
    seed = Seed(master_seed, 0)
    for _ in range(samples):
        t = sample_poisson_tree(BranchingParams(lam, d), radius, seed)
        code = canonical_code(t)
        counts[code] = counts.get(code, 0) + 1
        seed = Seed(master_seed, seed.trial + 1)
    return {k: v / samples for k, v in counts.items()}


def theory_rows(d: int, lam_grid: list, margin: float = 0.1) -> list:
    """(lam, gamma, zeta, density, I, c, C) rows over a lambda grid."""
    from .branching import rate_I

    out = []
    for lam in lam_grid:
        bp = BranchingParams(lam, d)
        zeta = survival_zeta(bp)
        dens = component_density(bp)
        i_val = rate_I(lam) if lam > 0 else float("nan")
        if 0 < lam < 1.0 / d:
            c, big_c = subcritical_constants(bp, margin)
        else:
            c = big_c = float("nan")
        out.append((lam, 1.0 - zeta, zeta, dens, i_val, c, big_c))
    return out
