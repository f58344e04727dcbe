import csv
import json
import math
import subprocess
import sys

import pytest

from mrsc.cli import main
from mrsc.experiments import (
    SweepConfig,
    TrialRow,
    mean_ci,
    ols_slope_ci,
    poisson_star_law,
    rows_to_csv_bytes,
    run_sweep,
    run_trial,
    theory_rows,
    write_rows,
)
from mrsc.generate import GenParams
from mrsc.seeds import Seed


def test_run_trial_fields():
    row, rep = run_trial(GenParams.lm(100, 2, 1.0), Seed(1, 3), census_radius=1)
    assert row.s_dm1_total == 4950
    assert 0 < row.s_dm1_cmax <= row.s_dm1_total
    assert row.census_tv is not None and 0 <= row.census_tv <= 1
    assert row.elapsed_ms is None  # timings are opt-in
    assert row.trial == 3


def test_sweep_deterministic_bytes():
    cfg = SweepConfig(n_grid=[60, 80], lam_grid=[0.5, 1.5], trials=3, master_seed=7)
    rows1 = run_sweep(cfg)
    rows2 = run_sweep(cfg)
    assert rows_to_csv_bytes(rows1) == rows_to_csv_bytes(rows2)
    # threads do not change the output
    cfg3 = SweepConfig(n_grid=[60, 80], lam_grid=[0.5, 1.5], trials=3, master_seed=7, threads=2)
    assert rows_to_csv_bytes(run_sweep(cfg3)) == rows_to_csv_bytes(rows1)


def test_sweep_row_ranges():
    cfg = SweepConfig(n_grid=[80], lam_grid=[1.0], trials=4, master_seed=1)
    for r in run_sweep(cfg):
        assert r.s_dm1_cmax >= r.s_dm1_c2 >= 0
        assert 0 <= r.s0_cmax <= r.n
        assert r.n_components <= r.s_dm1_total
        assert not r.error


def test_sweep_out_of_theory_guard():
    # alpha1 = 0.4 gives bound 2^3 = 8; lambda = 9 lies outside it
    cfg = SweepConfig(model="mrsc", alpha1=0.4, n_grid=[100_000], lam_grid=[9.0], trials=1)
    from mrsc.errors import ConfigError

    with pytest.raises(ConfigError):
        cfg.validate()
    cfg.allow_out_of_theory = True
    cfg.validate()


def test_cell_budget_degrades_gracefully():
    cfg = SweepConfig(n_grid=[60], lam_grid=[1.0], trials=4, master_seed=2, cell_budget_s=0.0)
    rows = run_sweep(cfg)
    assert len(rows) == 4
    assert all("budget" in r.error for r in rows[1:])  # first trial may land under the check


def test_connect_experiment():
    from mrsc.experiments import connect_experiment

    rep = connect_experiment(2, 2.0, [400], trials=2, k=30, pairs=1500, master_seed=3)
    for n, lam, t, k, p_both, ratio in rep.rows:
        assert 0 <= p_both <= 1
        assert ratio >= 0.9  # supercritical: large components are the giant


def test_theory_rows():
    rows = theory_rows(2, [0.1, 0.5, 2.0])
    lam, gamma, zeta, dens, i_val, c, big_c = rows[0]
    assert zeta == 0.0 and gamma == 1.0
    assert math.isnan(rows[1][5])  # c undefined at lam = 1/d
    assert rows[2][2] > 0.85


def test_stats_helpers():
    m, lo, hi = mean_ci([1.0, 2.0, 3.0, 4.0])
    assert lo < m == 2.5 < hi
    slope, lo, hi = ols_slope_ci([1, 2, 3, 4], [2.1, 3.9, 6.1, 7.9])
    assert lo < slope < hi and abs(slope - 2.0) < 0.2


def test_poisson_star_law_mass():
    law = poisson_star_law(2, 1.5)
    assert abs(sum(law.values()) - 1.0) < 1e-8


def test_write_rows_formats(tmp_path):
    rows = [TrialRow("lm", 2, 10, 1.0, None, 0, 1, s_dm1_total=45)]
    p1 = tmp_path / "a.csv"
    p2 = tmp_path / "a.jsonl"
    write_rows(rows, p1, "csv")
    write_rows(rows, p2, "jsonl")
    got = list(csv.reader(p1.open()))
    assert got[0][0] == "model" and got[1][7] == "45"
    rec = json.loads(p2.read_text().splitlines()[0])
    assert rec["s_dm1_total"] == 45 and rec["alpha1"] == ""


def run_cli(args):
    return main(args)


def test_cli_generate_components_explore(tmp_path):
    out = tmp_path / "c.jsonl"
    assert run_cli(["generate", "--n", "40", "--lam", "1.5", "--seed", "5", "--out", str(out)]) == 0
    rep_out = tmp_path / "rep.json"
    assert run_cli(["components", str(out), "--out", str(rep_out)]) == 0
    doc = json.loads(rep_out.read_text())
    assert doc["n_components"] >= 1
    trace_out = tmp_path / "trace.csv"
    assert run_cli(["explore", str(out), "--root", "0,1", "--out", str(trace_out)]) == 0
    assert trace_out.read_text().startswith("k,F,B,H,A,V,dist")


def test_cli_theory_and_census(tmp_path):
    out = tmp_path / "t.csv"
    assert run_cli(["theory", "--lam-grid", "0.2,1.0", "--out", str(out)]) == 0
    rows = list(csv.reader(out.open()))
    assert rows[0] == ["lam", "gamma", "zeta", "density", "rate_I", "c", "C"]
    cx = tmp_path / "c.jsonl"
    run_cli(["generate", "--n", "30", "--lam", "1.0", "--seed", "2", "--out", str(cx)])
    cen = tmp_path / "cen.csv"
    assert run_cli(["census", str(cx), "--radius", "1", "--out", str(cen)]) == 0
    header = cen.read_text().splitlines()[0]
    assert header == "code_hex,count,freq"


def test_cli_sweep_reproducible(tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    args = ["sweep", "--n-grid", "50", "--lam-grid", "1.0", "--trials", "2", "--seed", "3"]
    assert run_cli(args + ["--out", str(a)]) == 0
    assert run_cli(args + ["--out", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()


def test_cli_config_file(tmp_path):
    cfg = tmp_path / "cfg.yaml"
    cfg.write_text("n_grid: '40'\nlam_grid: '0.8'\ntrials: 2\n")
    out = tmp_path / "s.csv"
    assert run_cli(["sweep", "--config", str(cfg), "--seed", "1", "--out", str(out)]) == 0
    rows = list(csv.reader(out.open()))
    assert len(rows) == 3  # header + 2 trials


def test_cli_exit_codes(tmp_path):
    # config error -> 2
    assert run_cli(["sweep", "--model", "mrsc", "--alpha1", "0.45", "--lam-grid", "3.0",
                    "--n-grid", "50", "--trials", "1", "--out", str(tmp_path / "x.csv")]) == 2
    # resource error -> 3 (budget exceeded at generate)
    code = run_cli(["generate", "--n", "9000", "--lam", "400", "--out", str(tmp_path / "y.jsonl")])
    assert code == 3


def test_cli_entrypoint_subprocess(tmp_path):
    out = tmp_path / "t.csv"
    r = subprocess.run(
        [sys.executable, "-m", "mrsc.cli", "theory", "--lam-grid", "0.4,2.0", "--out", str(out)],
        capture_output=True,
    )
    assert r.returncode == 0 and out.exists()


def test_lwc_radius_two_sampled_reference():
    from mrsc.experiments import lwc_experiment

    rep = lwc_experiment(2, 1.0, [120], trials=2, master_seed=5, radius=2,
                         census_cap=400, ref_samples=3000)
    for n, t, tv, frac in rep.rows:
        assert 0 <= tv <= 1
    # small-n census against a sampled law still lands in a sane range
    assert rep.mean_tv_by_n[120] < 0.5


def test_subcritical_cmax_location_matches_progeny_oracle():
    # the identity {cmax >= k} <=> {Z_>=k >= k} puts cmax near the crossing
    # of s_1 * P(progeny >= k) with k; the progeny law supplies the curve
    import numpy as np

    from mrsc.branching import BranchingParams, progeny_pmf
    from mrsc.combin import comb
    from mrsc.generate import GenParams, sample
    from mrsc.components import component_map
    from mrsc.seeds import Seed

    lam = 0.3
    pmf = progeny_pmf(BranchingParams(lam, 2), 4000)
    sf = np.concatenate([[1.0], 1.0 - np.cumsum(pmf)])  # sf[i] = P(C > i)
    for n in (1024, 4096):
        s1 = comb(n, 2)
        pred = next(k for k in range(1, 4000) if s1 * sf[k - 1] <= k)
        obs = []
        for t in range(6):
            x = sample(GenParams.lm(n, 2, lam), Seed(2600 + n, t))
            obs.append(component_map(x).cmax_size)
        ratio = float(np.mean(obs)) / pred
        assert 0.6 < ratio < 1.5, (n, pred, obs)


def test_cli_sweep_jsonl_format(tmp_path):
    out = tmp_path / "rows.jsonl"
    assert run_cli(["sweep", "--n-grid", "40", "--lam-grid", "1.0", "--trials", "2",
                    "--seed", "5", "--format", "jsonl", "--out", str(out)]) == 0
    recs = [json.loads(line) for line in out.read_text().splitlines()]
    assert len(recs) == 2 and recs[0]["n"] == 40


def test_cli_lwc_radius_two(tmp_path):
    out = tmp_path / "lwc2.csv"
    code = run_cli(["lwc", "--n-grid", "100", "--trials", "1", "--lam", "1.0",
                    "--radius", "2", "--cap", "200", "--ref-samples", "2000",
                    "--out", str(out)])
    assert code == 0
    rows = list(csv.reader(out.open()))
    assert rows[0] == ["n", "trial", "census_tv", "comp_frac"] and len(rows) == 2
