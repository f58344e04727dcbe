"""Breadth-first exploration of d-dimensional components with step records.

One step explores the active (d-1)-simplex closest to the root (lex-minimal
among ties).  Every not-yet-seen d-simplex containing it is classified by
its extra vertex w: forward when w is new to the explored complex, backward
when w is old but no (d-1)-face through w has been seen, sibling otherwise.
Forward and backward d-simplices activate d new (d-1)-simplices; siblings
activate fewer.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import combinations

import numpy as np

from .complexes import ComplexD, Simplex, dim
from .errors import DimensionError, MembershipError
from .indexing import IndexedComplex
from .neighborhoods import canonical_code, neighborhood
from .seeds import CENSUS_STREAM, PAIR_STREAM, Seed


@dataclass(frozen=True)
class StepRecord:
    k: int
    explored: Simplex
    f: int  # new forward (d-1)-simplices
    b: int  # new backward (d-1)-simplices
    h: int  # new sibling (d-1)-simplices
    f_d: int  # forward d-simplices found at this step
    b_d: int
    h_d: int
    active_after: int  # A_k
    vertices: int  # V_k = s_0 of the explored complex after the step
    dist: int  # layer of the explored simplex

    @property
    def e(self) -> int:
        return self.f + self.b + self.h


@dataclass
class ExplorationTrace:
    root: Simplex
    steps: list
    terminated: bool  # active set emptied (vs. hit the step cap)
    explored_ids: list = field(repr=False, default_factory=list)

    @property
    def size(self) -> int | None:
        """s_{d-1} of the root's component; None when the trace was capped."""
        return len(self.steps) if self.terminated else None

    def check_identities(self, d: int) -> None:
        """Assert the per-step counting identities along the whole trace."""
        a_prev, v_prev = 1, d
        for s in self.steps:
            assert s.e == s.f + s.b + s.h
            assert s.active_after == a_prev + s.e - 1
            assert s.vertices - v_prev == s.f_d, "one new vertex per forward d-simplex"
            assert s.f == d * s.f_d, "forward d-simplices add d new each"
            assert s.b == d * s.b_d, "backward d-simplices add d new each"
            assert 0 <= s.h <= (d - 1) * s.h_d, "siblings add between 0 and d-1 each"
            a_prev, v_prev = s.active_after, s.vertices


def explore(
    x: ComplexD,
    root: Simplex,
    step_cap: int | None = None,
    index: IndexedComplex | None = None,
) -> ExplorationTrace:
    """Run the exploration from ``root`` until the active set empties or the cap."""
    idx = index if index is not None else IndexedComplex(x)
    root = tuple(root)
    root_id = idx.face_id(root)
    d = x.d

    in_complex = np.zeros(idx.n_faces, dtype=bool)  # (d-1)-simplices of X_k
    vertex_in = np.zeros(x.n, dtype=bool)
    top_in = np.zeros(idx.m, dtype=bool)

    heap = [(0, root, root_id)]
    in_complex[root_id] = True
    for v in root:
        vertex_in[v] = True
    n_vertices = d
    n_active = 1
    steps: list[StepRecord] = []
    trace = ExplorationTrace(root, steps, False)

    while heap and (step_cap is None or len(steps) < step_cap):
        dist, sigma, sid = heapq.heappop(heap)
        n_active -= 1
        f = b = h = f_d = b_d = h_d = 0
        for ti in idx.cofacets(sid):
            if top_in[ti]:
                continue
            top_in[ti] = True
            tverts = idx.top_vertices[ti]
            tfaces = idx.top_face_ids[ti]
            sset = set(sigma)
            wpos = -1
            for j in range(d + 1):
                if int(tverts[j]) not in sset:
                    wpos = j
                    break
            w = int(tverts[wpos])
            new_faces = [
                int(tfaces[j]) for j in range(d + 1) if j != wpos and not in_complex[tfaces[j]]
            ]
            if not vertex_in[w]:
                cls = 0
                vertex_in[w] = True
                n_vertices += 1
                f_d += 1
                f += len(new_faces)
            else:
                # any (d-1)-face through w already in X_{k-1} makes it a sibling
                seen_face = any(
                    in_complex[tfaces[j]] for j in range(d + 1) if j != wpos
                )
                if seen_face:
                    cls = 2
                    h_d += 1
                    h += len(new_faces)
                else:
                    cls = 1
                    b_d += 1
                    b += len(new_faces)
            for j in range(d + 1):
                if j == wpos:
                    continue
                fid = int(tfaces[j])
                if not in_complex[fid]:
                    in_complex[fid] = True
                    heapq.heappush(heap, (dist + 1, idx.face_tuple(fid), fid))
                    n_active += 1
        steps.append(
            StepRecord(
                len(steps) + 1, sigma, f, b, h, f_d, b_d, h_d, n_active, n_vertices, dist
            )
        )
        trace.explored_ids.append(sid)

    trace.terminated = not heap
    return trace


def degree(x_partial: ComplexD, rho: Simplex, ell: int) -> int:
    """Number of ell-simplices of the complex containing rho (Def of l-degree)."""
    rho = tuple(rho)
    if not (dim(rho) <= ell <= x_partial.d):
        raise DimensionError(f"need dim(rho) <= ell <= d, got {dim(rho)} / {ell}")
    if rho not in x_partial:
        raise MembershipError(f"{rho} not in complex")
    rset = set(rho)
    return sum(1 for s in x_partial.levels[ell] if rset.issubset(s))


# ---------------------------------------------------------------------------
# local-neighborhood census


@dataclass
class CensusResult:
    freq: dict  # canonical code -> frequency (sums to 1 unless empty)
    counts: dict  # canonical code -> raw count
    total: int
    empty: bool

    def tv_distance(self, law: dict) -> float:
        """Total variation to a reference law (code -> probability); the
        reference's missing mass is counted as unmatched."""
        keys = set(self.freq) | set(law)
        return 0.5 * sum(abs(self.freq.get(k, 0.0) - law.get(k, 0.0)) for k in keys)


@lru_cache(maxsize=4096)
def star_code(d: int, j: int) -> bytes:
    """Canonical code of the radius-1 ball with j cofacets (all that occurs at r=1)."""
    from .neighborhoods import RootedNeighborhood

    root = tuple(range(d))
    tops = [root + (d + i,) for i in range(j)]
    ball = ComplexD.from_simplices(d + max(j, 1), d, [root] + tops, include_all_vertices=False)
    layers = {root: 0}
    for t in tops:
        for f in combinations(t, d):
            layers.setdefault(f, 1)
    return canonical_code(RootedNeighborhood(ball, root, 1, layers))


def census(
    x: ComplexD,
    r: int,
    sample_cap: int | None,
    seed: Seed,
    index: IndexedComplex | None = None,
) -> CensusResult:
    """Empirical distribution of B(sigma; r) isomorphism classes over roots.

    Roots are all (d-1)-simplices, or a uniform without-replacement sample
    of sample_cap of them.  Keys are canonical codes.
    """
    idx = index if index is not None else IndexedComplex(x)
    n_faces = idx.n_faces
    if n_faces == 0:
        return CensusResult({}, {}, 0, True)
    if sample_cap is not None and sample_cap < n_faces:
        rng = seed.generator(CENSUS_STREAM)
        ids = rng.choice(n_faces, size=sample_cap, replace=False)
        ids.sort()
    else:
        ids = np.arange(n_faces)
    counts: dict = {}
    if r == 1:
        # radius-1 balls are exactly the cofacet stars, keyed by up-degree
        degs = idx.up_degrees(ids)
        uniq, cnt = np.unique(degs, return_counts=True)
        for j, c in zip(uniq.tolist(), cnt.tolist()):
            counts[star_code(x.d, j)] = int(c)
    else:
        for i in ids:
            ball = neighborhood(x, idx.face_tuple(int(i)), r, index=idx)
            code = canonical_code(ball)
            counts[code] = counts.get(code, 0) + 1
    total = int(len(ids))
    freq = {k: v / total for k, v in counts.items()}
    return CensusResult(freq, counts, total, False)


# ---------------------------------------------------------------------------
# step-distribution and growth statistics


@dataclass(frozen=True)
class StepDistributionSummary:
    steps_used: int
    mean_e: float  # mean new (d-1)-simplices per early step, all classes
    mean_fb: float  # forward+backward only
    expected: float  # d * lambda
    dominance_violation: float  # max_x [P_emp(E >= x) - P_binom(E >= x)]
    mean_trace_len: float


def step_distribution_check(
    traces: list, gp, early_fraction: float = 0.05
) -> StepDistributionSummary:
    """Pool early-step E_k across traces and compare to the d*Bin(n, lam/n) bound."""
    from scipy.stats import binom

    _, _, lam = _gp_params(gp)
    n, d = gp.n, gp.d
    cutoff = max(1, int(early_fraction * n))
    es, fbs = [], []
    lens = []
    for t in traces:
        lens.append(len(t.steps))
        for s in t.steps[:cutoff]:
            es.append(s.e)
            fbs.append(s.f + s.b)
    es_arr = np.asarray(es, dtype=np.int64)
    fb_arr = np.asarray(fbs, dtype=np.int64)
    # stochastic upper bound: E_k <= d * Bin(n, lam/n); compare survival functions
    violation = 0.0
    if es_arr.size:
        for xval in range(0, int(es_arr.max()) + 1, d if d > 0 else 1):
            emp = float((es_arr >= xval).mean())
            theo = float(binom.sf(math.ceil(xval / d) - 1, n, lam / n))
            violation = max(violation, emp - theo)
    return StepDistributionSummary(
        int(es_arr.size),
        float(es_arr.mean()) if es_arr.size else 0.0,
        float(fb_arr.mean()) if fb_arr.size else 0.0,
        d * lam,
        violation,
        float(np.mean(lens)) if lens else 0.0,
    )


def _gp_params(gp):
    from .generate import derive_params

    return derive_params(gp)


@dataclass(frozen=True)
class GrowthPoint:
    t: float
    v: float  # V_{floor(t n)} / n
    theory: float | None  # 1 - exp(-lam t), when lam is known


def vertex_growth_curve(
    x: ComplexD,
    root: Simplex,
    grid: list,
    lam: float | None = None,
    index: IndexedComplex | None = None,
    check_giant: bool = True,
) -> tuple[list, bool]:
    """Sample v_n(t) = V_{floor(tn)}/n along the exploration of root's component.

    Returns (points, truncated); truncated is set when the exploration dies
    before max(grid)*n steps.
    """
    idx = index if index is not None else IndexedComplex(x)
    if check_giant:
        from .components import component_map

        rep = component_map(x)
        rid = idx.face_id(tuple(root))
        if rep.top and rep.label_of(rid) != rep.label_of(rep.top[0].min_member):
            raise MembershipError(f"root {tuple(root)} is not in the largest component")
    grid = sorted(grid)
    cap = int(math.ceil(grid[-1] * x.n)) + 1
    trace = explore(x, root, step_cap=cap, index=idx)
    vs = [x.d] + [s.vertices for s in trace.steps]
    points = []
    truncated = False
    for t in grid:
        k = int(t * x.n)
        if k >= len(vs):
            truncated = True
            break
        theory = (1.0 - math.exp(-lam * t)) if lam is not None else None
        points.append(GrowthPoint(t, vs[k] / x.n, theory))
    return points, truncated


@dataclass(frozen=True)
class TwoSourceEstimate:
    trials: int
    both_large: int  # both components of size >= k
    connected_and_large: int
    p_both_large: float
    connection_given_large: float  # ratio estimate, nan when undefined


def two_source_connectivity(
    x: ComplexD, k: int, trials: int, seed: Seed, report=None
) -> TwoSourceEstimate:
    """Empirical two-source check over uniform independent (d-1)-simplex pairs."""
    from .components import component_map

    rep = report if report is not None else component_map(x)
    n_faces = rep.n_faces
    if n_faces < 2:
        raise MembershipError("need at least two (d-1)-simplices")
    rng = seed.generator(PAIR_STREAM)
    ids = rng.integers(0, n_faces, size=(trials, 2))
    both = conn = 0
    for a, b in ids:
        la, lb = rep.label_of(int(a)), rep.label_of(int(b))
        if rep.size_of_label(la) >= k and rep.size_of_label(lb) >= k:
            both += 1
            if la == lb:
                conn += 1
    ratio = conn / both if both else float("nan")
    return TwoSourceEstimate(trials, both, conn, both / trials, ratio)
