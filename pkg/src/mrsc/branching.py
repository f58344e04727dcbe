"""Branching-process oracles the Monte Carlo results are validated against.

The local limit of the models here is the (d-1)-rooted Poisson tree: each
frontier (d-1)-simplex gains Poisson(lam) cofacet d-simplices, each carrying
one fresh vertex and d fresh frontier simplices, so the offspring law of the
frontier is d * Poisson(lam).  Everything below is exact or
tolerance-controlled: extinction/survival fixed points, the total-progeny
law (via the Dwass identity, an independent derivation path from the pgf),
the component-count density, the Poisson large-deviation rate function, and
exact finite-tree probabilities for the local-weak-limit census.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations, product

import numpy as np
from scipy.special import gammaln

from .complexes import ComplexD
from .errors import ConfigError, ResourceBudgetError, TreeShapeError
from .neighborhoods import RootedNeighborhood, canonical_code
from .seeds import TREE_STREAM, Seed

MAX_FIXED_POINT_ITERS = 1_000_000
TREE_PROB_MAX_FACES = 81
TREE_PROB_MAX_ARRANGEMENTS = 2_000_000


@dataclass(frozen=True)
class BranchingParams:
    """Offspring law d * Poisson(lam): supercritical iff lam > 1/d."""

    lam: float
    d: int = 2

    def __post_init__(self):
        if self.lam < 0 or self.d < 1:
            raise ConfigError("need lam >= 0 and d >= 1")

    @property
    def mean_offspring(self) -> float:
        return self.d * self.lam


def extinction_gamma(bp: BranchingParams, tol: float = 1e-12) -> float:
    """Smallest solution of gamma = exp(-lam (1 - gamma^d)).

    Monotone iteration from 0 converges to the smallest fixed point; at or
    below criticality (d*lam <= 1) that point is exactly 1.
    """
    if tol <= 0:
        raise ConfigError("tol must be positive")
    lam, d = bp.lam, bp.d
    if lam * d <= 1.0:
        return 1.0
    g = 0.0
    for _ in range(MAX_FIXED_POINT_ITERS):
        g_next = math.exp(-lam * (1.0 - g**d))
        if g_next - g < tol:
            g = g_next
            break
        g = g_next
    assert abs(g - math.exp(-lam * (1.0 - g**d))) <= 10 * tol
    return g


def survival_zeta(bp: BranchingParams, tol: float = 1e-12) -> float:
    """Survival probability zeta = 1 - gamma; zero up to the critical point."""
    return 1.0 - extinction_gamma(bp, tol)


def component_density(bp: BranchingParams, tol: float = 1e-12) -> float:
    """E[1/progeny] = gamma - lam * d/(d+1) * gamma^(d+1).

    This is the limit of (number of components) / s_{d-1}(X_n).
    """
    g = extinction_gamma(bp, tol)
    return g - bp.lam * bp.d / (bp.d + 1) * g ** (bp.d + 1)


def progeny_pmf(bp: BranchingParams, k_max: int) -> np.ndarray:
    """P(total progeny = k) for k = 1..k_max via the Dwass identity.

    P(C = k) = (1/k) P(S_k = k-1) with S_k a sum of k offspring draws; here
    S_k = d * M with M ~ Poisson(k lam), so the mass sits on k = 1 mod d.
    Evaluated in log space; safe out to k ~ 10^5.
    """
    if k_max < 1:
        raise ConfigError("k_max must be >= 1")
    k = np.arange(1, k_max + 1, dtype=np.float64)
    out = np.zeros(k_max)
    if bp.lam == 0.0:
        out[0] = 1.0
        return out
    ok = (np.arange(1, k_max + 1) - 1) % bp.d == 0
    m = (k - 1.0) / bp.d
    mu = k * bp.lam
    with np.errstate(divide="ignore", invalid="ignore"):
        logp = -mu + m * np.log(mu) - gammaln(m + 1.0) - np.log(k)
    logp[0] = -mu[0] - np.log(k[0])  # m = 0 term: 0*log(mu) := 0
    out[ok] = np.exp(logp[ok])
    return out


def progeny_pgf(bp: BranchingParams, z: float, tol: float = 1e-12) -> float:
    """Smallest fixed point of G = z * exp(lam (G^d - 1)); G(1) = gamma."""
    if not (0.0 <= z <= 1.0):
        raise ConfigError("z must lie in [0, 1]")
    if z == 1.0:
        return extinction_gamma(bp, tol)
    g = 0.0
    for _ in range(MAX_FIXED_POINT_ITERS):
        g_next = z * math.exp(bp.lam * (g**bp.d - 1.0))
        if g_next - g < tol:
            g = g_next
            break
        g = g_next
    assert abs(g - z * math.exp(bp.lam * (g**bp.d - 1.0))) <= 10 * tol
    return g


def rate_I(lam: float) -> float:
    """Poisson large-deviation rate I_lam = lam - 1 - log lam (>= 0, zero at 1)."""
    if lam <= 0:
        raise ValueError("rate function needs lam > 0")
    return lam - 1.0 - math.log(lam)


def subcritical_constants(bp: BranchingParams, margin: float = 0.1) -> tuple[float, float]:
    """(c, C) bracketing s_{d-1}(C_max)/log n in the subcritical regime.

    The exploration's per-step offspring is bounded by d*Bin(n, lam/n); the
    resulting tail P(progeny > k) <= exp(-k I_{d lam} / d) gives the upper
    constant C = d^2 / I_{d lam}, and the embedded single-child forward
    process gives the lower constant c = 1 / I_{lam/2}.  ``margin`` widens
    the bracket on both sides.
    """
    if bp.lam >= 1.0 / bp.d:
        raise ConfigError(f"subcritical constants need lam < 1/d, got {bp.lam}")
    if bp.lam == 0.0:
        raise ConfigError("lam must be positive")
    c = (1.0 - margin) / rate_I(bp.lam / 2.0)
    big_c = (1.0 + margin) * bp.d**2 / rate_I(bp.d * bp.lam)
    return c, big_c


def extinction_generic(pmf, tol: float = 1e-12, max_iter: int = MAX_FIXED_POINT_ITERS) -> float:
    """Smallest root of pgf(s) = s in [0, 1] for an arbitrary offspring pmf.

    ``pmf`` is either an array with pmf[j] = P(offspring = j) or a callable
    probability generating function on [0, 1].
    """
    if callable(pmf):
        g = pmf
    else:
        arr = np.asarray(pmf, dtype=np.float64)
        if arr.min() < 0 or abs(arr.sum() - 1.0) > 1e-9:
            raise ConfigError("offspring pmf must be non-negative and sum to 1")
        powers = np.arange(arr.size)

        def g(s):
            return float(np.sum(arr * s**powers))

    s = 0.0
    for _ in range(max_iter):
        s_next = g(s)
        if s_next - s < tol:
            return s_next
        s = s_next
    return s


# ---------------------------------------------------------------------------
# Poisson tree sampling and exact finite-tree probabilities


def _tree_from_events(d: int, r: int, counts_by_node) -> RootedNeighborhood:
    """Build the rooted tree complex from per-node event counts in BFS order.

    ``counts_by_node`` is consumed node by node in generation order; nodes at
    depth r draw nothing.  Every event attaches one fresh vertex to its node.
    """
    root = tuple(range(d))
    layer_of = {root: 0}
    tops = []
    queue = [(root, 0)]
    next_vertex = d
    qi = 0
    while qi < len(queue):
        node, depth = queue[qi]
        qi += 1
        if depth >= r:
            continue
        x_k = counts_by_node(node, depth)
        for _ in range(x_k):
            w = next_vertex
            next_vertex += 1
            top = tuple(sorted(node + (w,)))
            tops.append(top)
            for f in combinations(top, d):
                if f not in layer_of:
                    layer_of[f] = depth + 1
                    queue.append((f, depth + 1))
    cx = ComplexD.from_simplices(
        max(next_vertex, d + 1), d, [root] + tops, include_all_vertices=False
    )
    return RootedNeighborhood(cx, root, r, layer_of)


def sample_poisson_tree(bp: BranchingParams, r: int, seed: Seed) -> RootedNeighborhood:
    """The (d-1)-rooted Poisson tree truncated at radius r, as a genuine complex."""
    if r < 0:
        raise ConfigError("radius must be >= 0")
    rng = seed.generator(TREE_STREAM)

    def draw(node, depth):
        return int(rng.poisson(bp.lam))

    return _tree_from_events(bp.d, r, draw)


def _tree_layers(t: RootedNeighborhood) -> list[list]:
    """Per-depth lists of (node, cofacet count); validates tree shape."""
    d = t.complex.d
    m = t.complex.s(d)
    faces_total = t.complex.s(d - 1)
    if faces_total != 1 + d * m:
        raise TreeShapeError(f"s_(d-1) = {faces_total} != 1 + d*{m}; not a tree")
    if faces_total > TREE_PROB_MAX_FACES:
        raise ResourceBudgetError(f"tree_prob capped at {TREE_PROB_MAX_FACES} simplices")
    # recover parent/child structure from layers
    children: dict = {f: 0 for f in t.complex.levels[d - 1]}
    for top in t.complex.levels[d]:
        fs = list(combinations(top, d))
        lays = [t.layer_of.get(f) for f in fs]
        if any(l is None for l in lays):
            raise TreeShapeError("missing layer for a face")
        lo = min(lays)
        if sorted(lays) != [lo] + [lo + 1] * d:
            raise TreeShapeError("a d-simplex must join one node to d children")
        parent = fs[lays.index(lo)]
        children[parent] += 1
    by_depth: dict = {}
    for f, ell in t.layer_of.items():
        by_depth.setdefault(ell, []).append((f, children[f]))
    depth = max(by_depth)
    return [by_depth[ell] for ell in range(depth + 1)]


def _multiset_perms(values) -> list:
    """Distinct permutations of a multiset, in lexicographic order."""
    values = sorted(values)
    if not values:
        return [()]
    out = []

    def rec(remaining, acc):
        if not remaining:
            out.append(tuple(acc))
            return
        prev = None
        for i, v in enumerate(remaining):
            if v == prev:
                continue
            prev = v
            rec(remaining[:i] + remaining[i + 1 :], acc + [v])

    rec(values, [])
    return out


def tree_prob(t: RootedNeighborhood, r: int, bp: BranchingParams) -> float:
    """Exact probability that the radius-r Poisson-tree ball is isomorphic to t.

    The law factorizes over nodes at depth < r as prod e^-lam lam^x / x!;
    the multiplicity #(t) counts the distinct per-depth arrangements of
    cofacet counts whose generated tree is isomorphic to t.  Computed by
    enumeration, which is exact at this scale.
    """
    layers = _tree_layers(t)
    if len(layers) - 1 > r:
        raise TreeShapeError(f"tree depth {len(layers) - 1} exceeds radius {r}")
    lam, d = bp.lam, bp.d
    log_p = 0.0
    per_depth_counts = []
    for ell, layer in enumerate(layers):
        if ell >= r:
            if any(x > 0 for _, x in layer):
                raise TreeShapeError("nodes at the truncation radius cannot have cofacets")
            continue
        xs = [x for _, x in layer]
        per_depth_counts.append(xs)
        for x in xs:
            if lam > 0.0:
                log_p += -lam + x * math.log(lam) - math.lgamma(x + 1)
            elif x > 0:
                return 0.0
    target = canonical_code(t)
    arrangements = [_multiset_perms(xs) for xs in per_depth_counts]
    total = 1
    for a in arrangements:
        total *= max(len(a), 1)
        if total > TREE_PROB_MAX_ARRANGEMENTS:
            raise ResourceBudgetError("too many breadth-first arrangements to enumerate")

    matches = 0
    for combo in product(*arrangements) if arrangements else [()]:
        iters = [iter(xs) for xs in combo]

        def draw(node, depth):
            return next(iters[depth])

        cand = _tree_from_events(d, min(r, len(combo)), draw)
        if canonical_code(cand) == target:
            matches += 1
    return matches * math.exp(log_p)
