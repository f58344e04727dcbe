import math

import numpy as np
import pytest

from mrsc.combin import comb
from mrsc.errors import ConfigError, ResourceBudgetError
from mrsc.generate import (
    GenParams,
    derive_params,
    expected_counts,
    sample,
    supercritical_bound,
)
from mrsc.seeds import Seed


def test_derive_params_examples():
    n = 400
    gp = GenParams.lm(n, 2, 2.0)
    q, r, lam = derive_params(gp)
    assert q == 1.0 and math.isclose(r, 2.0 / n) and math.isclose(lam, 2.0)

    gp = GenParams(10, 2, (0.5, 0.1))
    q, r, lam = derive_params(gp)
    assert q == 0.5 and math.isclose(r, 0.025)

    gp = GenParams(10, 3, (1.0, 1.0, 0.25))
    q, r, _ = derive_params(gp)
    assert q == 1.0 and math.isclose(r, 0.25)


def test_lambda_mode_pins_n_r_exactly():
    gp = GenParams.mrsc2(500, 1.7, 0.25)
    _, r, lam = derive_params(gp)
    assert math.isclose(lam, 1.7, rel_tol=1e-12)
    assert gp.alpha == (0.25, 0.5)


def test_supercritical_bound():
    assert supercritical_bound(0.0) == math.inf
    assert supercritical_bound(0.5) == 4.0
    assert supercritical_bound(0.25) == 64.0
    with pytest.raises(ConfigError):
        supercritical_bound(0.7)


def test_expected_counts():
    n = 4
    gp = GenParams(n, 2, (0.5, 0.1))
    e = expected_counts(gp)
    assert e[0] == 4
    assert math.isclose(e[1], 6 * 0.5)
    assert math.isclose(e[2], 4 * 0.5**3 * 0.1)
    lm = GenParams.lm(100, 2, 1.0)
    e = expected_counts(lm)
    assert e[1] == comb(100, 2)
    q, _, _ = derive_params(lm)
    assert math.isclose(e[1], comb(100, 2) * q)


def test_validation_errors():
    with pytest.raises(ConfigError):
        GenParams(10, 2, (0.5, 1.2))
    with pytest.raises(ConfigError):
        GenParams(10, 2, (0.5, 0.5), model="lm")
    with pytest.raises(ConfigError):
        GenParams.lm(10, 2, 20.0)  # p_d > 1
    with pytest.raises(ConfigError):
        GenParams(10, 2, (0.5, 0.5), alpha=(0.3, 0.3))


def test_budget_guard():
    with pytest.raises(ResourceBudgetError):
        sample(GenParams.lm(5000, 2, 100.0), Seed(0, 0), top_budget=10_000)


def test_lm_determinism_and_independence():
    gp = GenParams.lm(150, 2, 1.2)
    a = sample(gp, Seed(9, 4))
    b = sample(gp, Seed(9, 4))
    c = sample(gp, Seed(9, 5))
    assert np.array_equal(a.levels[2].codes, b.levels[2].codes)
    assert not np.array_equal(a.levels[2].codes, c.levels[2].codes)


def test_edge_cases_p_zero_and_one():
    x = sample(GenParams(30, 2, (0.0, 0.7)), Seed(1, 0))
    assert x.s(1) == 0 and x.s(2) == 0 and x.s(0) == 30
    full = sample(GenParams(7, 2, (1.0, 1.0)), Seed(1, 0))
    assert full.s(2) == comb(7, 3) and full.s(1) == comb(7, 2)


def test_lm_mean_top_count():
    # mean s_2 over trials within 3 sigma of the exact binomial mean
    n, lam, trials = 200, 1.0, 500
    gp = GenParams.lm(n, 2, lam)
    total = comb(n, 3)
    p = lam / n
    counts = [sample(gp, Seed(77, t)).s(2) for t in range(trials)]
    mean = np.mean(counts)
    sd_mean = math.sqrt(total * p * (1 - p) / trials)
    assert abs(mean - total * p) <= 3 * sd_mean


def test_mrsc2_matches_general_path():
    gp = GenParams(40, 2, (0.4, 0.5))
    from mrsc.generate import _sample_mrsc2, _sample_mrsc_general

    a = _sample_mrsc2(gp, Seed(3, 1), False)
    b = _sample_mrsc_general(gp, Seed(3, 1), False)
    assert set(a.levels[1]) == set(b.levels[1])
    # candidate enumeration order matches, so draws align triangle-for-triangle
    assert set(a.levels[2]) == set(b.levels[2])


def test_monotone_coupling_in_top_probability():
    n = 120
    lams = [0.5, 1.0, 1.8]
    tops = []
    for lam in lams:
        x = sample(GenParams.lm(n, 2, lam), Seed(11, 2), coupled=True)
        tops.append(set(x.levels[2].codes.tolist()))
    assert tops[0] <= tops[1] <= tops[2]


def test_monotone_coupling_mrsc_top():
    n = 80
    sets = []
    for p2 in (0.2, 0.5, 0.9):
        x = sample(GenParams(n, 2, (0.3, p2)), Seed(4, 0), coupled=True)
        sets.append(set(x.levels[2]))
    assert sets[0] <= sets[1] <= sets[2]


def test_skeleton_concentration():
    # s_{d-1}/(C(n,d) q_d) approaches 1 as n grows (MRSC with p1 < 1)
    devs = []
    for n in (100, 200, 400):
        gp = GenParams.mrsc2(n, 1.0, 0.25)
        q, _, _ = derive_params(gp)
        vals = [
            sample(gp, Seed(21, t)).s(1) / (comb(n, 2) * q) for t in range(10)
        ]
        devs.append(abs(np.mean(vals) - 1.0))
    assert devs[-1] < 0.02 and devs[-1] <= devs[0] + 0.02


def test_exchangeability_degree_histogram():
    # two seeds give statistically indistinguishable up-degree histograms
    from mrsc.indexing import IndexedComplex

    n, lam = 300, 1.5
    hists = []
    for s in (5, 6):
        x = sample(GenParams.lm(n, 2, lam), Seed(s, 0))
        idx = IndexedComplex(x)
        degs = idx.up_degrees(np.arange(idx.n_faces))
        hists.append(np.bincount(degs, minlength=12)[:12])
    a, b = hists
    # two-sample chi-square on pooled bins with expected count >= 10
    mask = (a + b) >= 20
    ka, kb = a[mask].astype(float), b[mask].astype(float)
    chi2 = float((((ka - kb) ** 2) / (ka + kb)).sum())
    assert chi2 < 3.0 * mask.sum()


def test_mrsc_with_unit_lower_probabilities_routes_like_lm():
    import numpy as np

    gp_m = GenParams(120, 2, (1.0, 0.01), model="mrsc")
    gp_l = GenParams.lm(120, 2, 1.2)
    a = sample(gp_m, Seed(8, 1))
    b = sample(gp_l, Seed(8, 1))
    assert np.array_equal(a.levels[2].codes, b.levels[2].codes)


def test_higher_dimension_does_not_perturb_lower_draws():
    # per-dimension streams: the edge set is identical whether or not a
    # third level is sampled on top of it
    a = sample(GenParams(30, 2, (0.4, 0.5)), Seed(13, 2))
    b = sample(GenParams(30, 3, (0.4, 0.5, 0.5)), Seed(13, 2))
    assert set(a.levels[1]) == set(b.levels[1])
    assert set(a.levels[2]) == set(b.levels[2])


def test_downward_closure_all_construction_paths():
    from mrsc.neighborhoods import neighborhood

    lm = sample(GenParams.lm(30, 2, 1.5), Seed(14, 0))
    lm.validate()
    mr = sample(GenParams(25, 2, (0.5, 0.5)), Seed(14, 1))
    mr.validate()
    d3 = sample(GenParams(12, 3, (0.8, 0.7, 0.5)), Seed(14, 2))
    d3.validate()
    edges = list(mr.levels[1])
    ball = neighborhood(mr, edges[0], 2)
    ball.complex.validate()


def test_d3_expected_top_count():
    # general-path enumeration at d=3: mean s_3 across trials tracks the
    # boundary-survival product
    gp = GenParams(24, 3, (0.7, 0.6, 0.5))
    expect = expected_counts(gp)[3]
    counts = [sample(gp, Seed(300, t)).s(3) for t in range(40)]
    mean = float(np.mean(counts))
    se = float(np.std(counts)) / math.sqrt(len(counts))
    assert abs(mean - expect) <= 4 * se + 1e-9
