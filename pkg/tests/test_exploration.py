import math

import numpy as np
import pytest

from mrsc.complexes import ComplexD
from mrsc.components import component_map
from mrsc.errors import MembershipError
from mrsc.exploration import (
    census,
    degree,
    explore,
    star_code,
    step_distribution_check,
    two_source_connectivity,
    vertex_growth_curve,
)
from mrsc.generate import GenParams, sample
from mrsc.indexing import IndexedComplex
from mrsc.seeds import Seed


def test_two_triangle_walkthrough():
    x = ComplexD.from_simplices(5, 2, [(1, 2, 3), (2, 3, 4)])
    t = explore(x, (1, 2))
    assert t.terminated and t.size == 5
    s1 = t.steps[0]
    assert (s1.f, s1.b, s1.h, s1.f_d) == (2, 0, 0, 1)
    assert [s.explored for s in t.steps] == [(1, 2), (1, 3), (2, 3), (2, 4), (3, 4)]
    t.check_identities(2)


def test_isolated_simplex_trace():
    x = ComplexD.from_simplices(4, 2, [(0, 1), (2, 3)])
    t = explore(x, (0, 1))
    assert t.terminated and len(t.steps) == 1 and t.steps[0].e == 0


def test_sibling_classification():
    # third triangle's apex is old and one of its faces is already present
    x = ComplexD.from_simplices(4, 2, [(0, 1, 2), (0, 2, 3), (1, 2, 3)])
    t = explore(x, (0, 1))
    by_step = {s.explored: s for s in t.steps}
    s = by_step[(1, 2)]
    assert s.h_d == 1 and s.h == 1  # sibling adds fewer than d new simplices
    t.check_identities(2)


def test_backward_classification():
    # apex 2 is old when (3,4) is explored, but neither (2,3) nor (2,4) exists yet
    x = ComplexD.from_simplices(5, 2, [(0, 1, 2), (0, 1, 3), (0, 3, 4), (2, 3, 4)])
    t = explore(x, (0, 1))
    by_step = {s.explored: s for s in t.steps}
    s = by_step[(3, 4)]
    assert s.b_d == 1 and s.b == 2
    t.check_identities(2)


def test_trace_matches_union_find(rng):
    for lam in (0.5, 1.0, 2.0):
        for trial in range(6):
            x = sample(GenParams.lm(60, 2, lam), Seed(500 + trial, trial))
            rep = component_map(x)
            idx = IndexedComplex(x)
            for rid in rng.choice(idx.n_faces, 8, replace=False):
                rid = int(rid)
                tr = explore(x, idx.face_tuple(rid), index=idx)
                tr.check_identities(2)
                assert tr.terminated
                lab = rep.label_of(rid)
                comp = {
                    int(f) for f in range(idx.n_faces) if rep.label_of(int(f)) == lab
                } if rep.size_of_label(lab) > 1 else {rid}
                assert set(tr.explored_ids) == comp


def test_step_cap():
    x = sample(GenParams.lm(200, 2, 2.0), Seed(1, 1))
    rep = component_map(x)
    root = IndexedComplex(x).face_tuple(rep.top[0].min_member)
    t = explore(x, root, step_cap=5)
    assert len(t.steps) == 5 and not t.terminated
    assert t.size is None


def test_degree():
    x = ComplexD.from_simplices(5, 2, [(0, 1, 2), (0, 1, 3), (0, 1, 4)])
    assert degree(x, (0, 1), 2) == 3
    assert degree(x, (0,), 1) == 4
    assert degree(x, (2,), 1) == 2
    with pytest.raises(Exception):
        degree(x, (0, 1), 0)


def test_census_star_shapes_and_normalization():
    x = ComplexD.from_simplices(6, 2, [(0, 1, 2), (0, 1, 3), (2, 3, 4)])
    c = census(x, 1, None, Seed(0, 0))
    assert abs(sum(c.freq.values()) - 1.0) < 1e-12
    assert c.counts[star_code(2, 2)] == 1  # the root (0,1) has two cofacets
    # census with no top simplices: single bare code with frequency 1
    y = ComplexD.from_simplices(4, 2, [(0, 1), (2, 3)])
    cy = census(y, 1, None, Seed(0, 0))
    assert cy.freq == {star_code(2, 0): 1.0}


def test_census_fast_path_matches_ball_extraction():
    x = sample(GenParams.lm(80, 2, 1.5), Seed(3, 0))
    fast = census(x, 1, 300, Seed(9, 0))
    # generic path: force radius-1 balls through neighborhood extraction
    from mrsc.neighborhoods import canonical_code, neighborhood

    idx = IndexedComplex(x)
    ids = Seed(9, 0).generator(101).choice(idx.n_faces, size=300, replace=False)
    ids.sort()
    counts = {}
    for i in ids:
        code = canonical_code(neighborhood(x, idx.face_tuple(int(i)), 1, index=idx))
        counts[code] = counts.get(code, 0) + 1
    assert counts == fast.counts


def test_census_relabeling_invariance(rng):
    tops = [(0, 1, 2), (1, 2, 3), (3, 4, 5), (2, 5, 6)]
    x = ComplexD.from_simplices(7, 2, tops)
    perm = dict(zip(range(7), rng.permutation(7).tolist()))
    y = ComplexD.from_simplices(7, 2, [tuple(sorted(perm[v] for v in t)) for t in tops])
    cx = census(x, 2, None, Seed(0, 0))
    cy = census(y, 2, None, Seed(0, 0))
    assert cx.counts == cy.counts


def test_step_distribution_check():
    gp = GenParams.lm(1000, 2, 1.0)
    traces = []
    x = sample(gp, Seed(8, 0))
    idx = IndexedComplex(x)
    rng = np.random.default_rng(0)
    for rid in rng.choice(idx.n_faces, 60, replace=False):
        traces.append(explore(x, idx.face_tuple(int(rid)), step_cap=40, index=idx))
    s = step_distribution_check(traces, gp)
    assert abs(s.mean_e - 2.0) < 0.5
    assert s.dominance_violation <= 0.05


def test_subcritical_mean_trace_length():
    # subcritical branching oracle: E[total progeny] = 1/(1 - d*lam) = 2.5
    lam = 0.3
    lens = []
    rng = np.random.default_rng(12)
    for t in range(8):
        x = sample(GenParams.lm(400, 2, lam), Seed(900 + t, t))
        idx = IndexedComplex(x)
        for rid in rng.choice(idx.n_faces, 60, replace=False):
            lens.append(len(explore(x, idx.face_tuple(int(rid)), index=idx).steps))
    mean = float(np.mean(lens))
    ci = 3 * float(np.std(lens)) / math.sqrt(len(lens))
    assert mean <= 1 / (1 - 2 * lam) + ci


def test_vertex_growth_curve_requires_giant_root():
    x = sample(GenParams.lm(300, 2, 1.5), Seed(2, 0))
    rep = component_map(x)
    idx = IndexedComplex(x)
    root = idx.face_tuple(rep.top[0].min_member)
    pts, trunc = vertex_growth_curve(x, root, [0.1, 0.3], lam=1.5, index=idx)
    assert not trunc and len(pts) == 2
    assert pts[0].v <= pts[1].v  # monotone growth
    assert pts[0].theory == pytest.approx(1 - math.exp(-0.15))
    # a root outside the giant is rejected
    outside = None
    for f in range(idx.n_faces):
        if rep.size_of_label(rep.label_of(f)) == 1:
            outside = idx.face_tuple(f)
            break
    with pytest.raises(MembershipError):
        vertex_growth_curve(x, outside, [0.1], lam=1.5, index=idx)


def test_two_source_connectivity_extremes():
    full = ComplexD.complete(10, 2)
    est = two_source_connectivity(full, 2, 300, Seed(5, 0))
    assert est.connection_given_large == 1.0
    two = ComplexD.from_simplices(8, 2, [(0, 1, 2), (0, 1, 3), (4, 5, 6), (4, 5, 7)])
    est2 = two_source_connectivity(two, 4, 2000, Seed(5, 0))
    assert est2.p_both_large > 0
    assert est2.connection_given_large < 0.8


def test_census_empty_face_level():
    from mrsc.complexes import SetLevel

    empty = ComplexD(3, 2, [SetLevel(0, {(0,), (1,), (2,)}), SetLevel(1, set()), SetLevel(2, set())])
    c = census(empty, 1, None, Seed(0, 0))
    assert c.empty and c.total == 0 and c.freq == {}


def test_explore_d3_matches_union_find():
    from mrsc.components import partition_signature, brute_force_components

    x = sample(GenParams(10, 3, (1.0, 1.0, 0.3), model="lm"), Seed(20, 0))
    rep = component_map(x)
    assert partition_signature(rep) == partition_signature(brute_force_components(x))
    idx = IndexedComplex(x)
    seen = set()
    for rid in range(idx.n_faces):
        lab = rep.label_of(rid)
        if lab in seen:
            continue
        seen.add(lab)
        tr = explore(x, idx.face_tuple(rid), index=idx)
        tr.check_identities(3)
        assert tr.terminated
        assert sorted(tr.explored_ids) == rep.members(lab).tolist()
