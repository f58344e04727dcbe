"""Seeded samplers for MRSC_d(n; p) and LM_d(n, lambda/n) plus derived parameters.

The recursive construction: all n vertices, each edge with p_1, and for
k = 2..d each k-simplex whose full boundary landed in the (k-1)-skeleton is
kept with p_k.  When p_1 = ... = p_{d-1} = 1 the lower skeleton is complete
and only the top level is sampled, from the lexicographic candidate stream
of all C(n, d+1) d-simplices with geometric gap skipping.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .combin import comb, unrank_combs
from .complexes import ArrayLevel, ComplexD, SetLevel
from .errors import ConfigError, ResourceBudgetError
from .seeds import Seed

DEFAULT_TOP_BUDGET = 50_000_000
_UNIFORM_CHUNK = 1 << 16


@dataclass(frozen=True)
class GenParams:
    """Model parameters: vertex count, top dimension, per-level probabilities.

    ``alpha`` optionally records the d=2 exponent pair (alpha_1, alpha_2)
    with 2*alpha_1 + alpha_2 = 1 used by the parameterized sweeps.
    """

    n: int
    d: int
    p: tuple
    model: str = "mrsc"
    alpha: tuple | None = None

    def __post_init__(self):
        if self.n < 2 or self.d < 1:
            raise ConfigError("need n >= 2 and d >= 1")
        if len(self.p) != self.d:
            raise ConfigError(f"need {self.d} probabilities, got {len(self.p)}")
        for q in self.p:
            if not (0.0 <= q <= 1.0):
                raise ConfigError(f"probability {q} outside [0, 1]")
        if self.model not in ("lm", "mrsc"):
            raise ConfigError(f"unknown model {self.model!r}")
        if self.model == "lm" and any(q != 1.0 for q in self.p[: self.d - 1]):
            raise ConfigError("lm requires p_1 = ... = p_{d-1} = 1")
        if self.alpha is not None:
            a1, a2 = self.alpha
            if abs(2 * a1 + a2 - 1.0) > 1e-9:
                raise ConfigError("alpha exponents must satisfy 2*a1 + a2 = 1")

    @classmethod
    def lm(cls, n: int, d: int, lam: float) -> "GenParams":
        """LM_d(n, lambda/n): complete (d-1)-skeleton, p_d = lambda/n."""
        pd = lam / n
        if pd > 1.0:
            raise ConfigError(f"lambda={lam} gives p_d={pd} > 1")
        return cls(n, d, (1.0,) * (d - 1) + (pd,), model="lm", alpha=(0.0, 1.0) if d == 2 else None)

    @classmethod
    def mrsc2(cls, n: int, lam: float, alpha1: float) -> "GenParams":
        """d=2 sweep cell: p_1 = n^(-alpha1) and p_2 chosen so n*r_2 = lambda exactly."""
        if not (0.0 <= alpha1 <= 0.5):
            raise ConfigError("alpha1 must lie in [0, 1/2]")
        p1 = n ** (-alpha1)
        p2 = lam / (n * p1 * p1)
        if p2 > 1.0:
            raise ConfigError(f"lambda={lam}, alpha1={alpha1} give p_2={p2} > 1")
        model = "lm" if alpha1 == 0.0 else "mrsc"
        return cls(n, 2, (p1, p2), model=model, alpha=(alpha1, 1.0 - 2 * alpha1))


def derive_params(gp: GenParams) -> tuple[float, float, float]:
    """(q_d, r_d, lambda): existence and cofacet probabilities, lambda = n*r_d."""
    q = 1.0
    for k in range(1, gp.d):
        q *= gp.p[k - 1] ** comb(gp.d, k + 1)
    r = 1.0
    for k in range(1, gp.d + 1):
        r *= gp.p[k - 1] ** comb(gp.d, k)
    return q, r, gp.n * r


def supercritical_bound(alpha1: float) -> float:
    """Largest lambda with guaranteed d=2 giant concentration; infinite at alpha1=0."""
    if not (0.0 <= alpha1 <= 0.5):
        raise ConfigError("alpha1 must lie in [0, 1/2]")
    if alpha1 == 0.0:
        return math.inf
    return 2.0 ** (2.0 * (1.0 - alpha1) / alpha1)


def expected_counts(gp: GenParams) -> list[float]:
    """E[s_k] for k = 0..d: C(n, k+1) times the boundary-survival product."""
    out = [float(gp.n)]
    for k in range(1, gp.d + 1):
        e = float(comb(gp.n, k + 1))
        for j in range(1, k + 1):
            e *= gp.p[j - 1] ** comb(k + 1, j + 1)
        out.append(e)
    return out


# ---------------------------------------------------------------------------
# Bernoulli subset of a lexicographic candidate stream


def _skip_sample(total: int, p: float, rng: np.random.Generator) -> np.ndarray:
    """Sorted ranks of a Bernoulli(p) subset of range(total), geometric gaps."""
    if p <= 0.0 or total == 0:
        return np.zeros(0, dtype=np.int64)
    if p >= 1.0:
        return np.arange(total, dtype=np.int64)
    out = []
    pos = -1
    expect = total * p
    size = max(1024, int(expect + 6.0 * math.sqrt(expect) + 16))
    while pos < total:
        gaps = rng.geometric(p, size=size)
        ranks = pos + np.cumsum(gaps)
        out.append(ranks)
        pos = int(ranks[-1])
        size = max(1024, size // 4)
    ranks = np.concatenate(out)
    return ranks[ranks < total]


def _coupled_sample(total: int, p: float, rng: np.random.Generator) -> np.ndarray:
    """Same subset law, but one uniform per candidate: monotone coupling in p.

    The uniforms depend only on the stream, so for fixed seed the subset at
    p is contained in the subset at p' > p.
    """
    if total == 0:
        return np.zeros(0, dtype=np.int64)
    out = []
    chunk = 1 << 20
    for start in range(0, total, chunk):
        stop = min(start + chunk, total)
        u = rng.random(stop - start)
        hits = np.flatnonzero(u < p)
        if hits.size:
            out.append(hits.astype(np.int64) + start)
    if not out:
        return np.zeros(0, dtype=np.int64)
    return np.concatenate(out)


class _UniformTape:
    """Sequential uniform stream consumed one value at a time, in bulk chunks."""

    def __init__(self, rng: np.random.Generator):
        self.rng = rng
        self.buf = rng.random(_UNIFORM_CHUNK)
        self.i = 0

    def next(self) -> float:
        if self.i >= self.buf.size:
            self.buf = self.rng.random(_UNIFORM_CHUNK)
            self.i = 0
        v = self.buf[self.i]
        self.i += 1
        return v


# ---------------------------------------------------------------------------
# samplers


def sample(
    gp: GenParams,
    seed: Seed,
    coupled: bool = False,
    top_budget: int = DEFAULT_TOP_BUDGET,
) -> ComplexD:
    """Draw one complex; identical (gp, seed) gives an identical complex.

    ``coupled`` switches every level to shared-uniform draws so that raising
    any single p_k (others fixed) only ever adds simplices.
    """
    expect_top = expected_counts(gp)[gp.d]
    if expect_top > top_budget:
        raise ResourceBudgetError(
            f"expected {expect_top:.3g} top simplices exceeds budget {top_budget}",
            expected=expect_top,
        )
    if all(q == 1.0 for q in gp.p[: gp.d - 1]):
        return _sample_complete_skeleton(gp, seed, coupled)
    if gp.d == 2:
        return _sample_mrsc2(gp, seed, coupled)
    return _sample_mrsc_general(gp, seed, coupled)


def _sample_complete_skeleton(gp: GenParams, seed: Seed, coupled: bool) -> ComplexD:
    total = comb(gp.n, gp.d + 1)
    rng = seed.generator(gp.d)
    draw = _coupled_sample if coupled else _skip_sample
    ranks = draw(total, gp.p[gp.d - 1], rng)
    top = ArrayLevel(gp.d, gp.n, ranks)
    return ComplexD.with_complete_skeleton(gp.n, gp.d, top)


def _sample_edges(gp: GenParams, seed: Seed, coupled: bool) -> np.ndarray:
    total = comb(gp.n, 2)
    rng = seed.generator(1)
    draw = _coupled_sample if coupled else _skip_sample
    return draw(total, gp.p[0], rng)


def _sample_mrsc2(gp: GenParams, seed: Seed, coupled: bool) -> ComplexD:
    n = gp.n
    if n > 40_000:
        raise ResourceBudgetError(f"bitmask triangle enumeration capped at n=40000, got {n}")
    edge_ranks = _sample_edges(gp, seed, coupled)
    ucol, vcol = unrank_combs(edge_ranks, n, 2)
    pairs = list(zip(ucol.tolist(), vcol.tolist()))

    adj = [0] * n  # bitmask adjacency, bit w of adj[u] set iff edge {u, w}
    for u, v in pairs:
        adj[u] |= 1 << v
        adj[v] |= 1 << u

    tape = _UniformTape(seed.generator(2))
    p2 = gp.p[1]
    triangles = []
    # each triangle counted once, from its lexicographically smallest edge:
    # candidates are common neighbors above the edge's larger endpoint
    for u, v in pairs:
        cand = (adj[u] & adj[v]) >> (v + 1)
        w = v + 1
        while cand:
            step = (cand & -cand).bit_length() - 1
            w += step
            if tape.next() < p2:
                triangles.append((u, v, w))
            cand >>= step + 1
            w += 1
    edges = SetLevel(1, set(pairs))
    verts = SetLevel(0, {(v,) for v in range(n)})
    tris = SetLevel(2, set(triangles))
    return ComplexD(n, 2, [verts, edges, tris])


def _sample_mrsc_general(gp: GenParams, seed: Seed, coupled: bool) -> ComplexD:
    n, d = gp.n, gp.d
    edge_ranks = _sample_edges(gp, seed, coupled)
    ucol, vcol = unrank_combs(edge_ranks, n, 2)
    levels: list = [SetLevel(0, {(v,) for v in range(n)})]
    current = set(zip(ucol.tolist(), vcol.tolist()))
    levels.append(SetLevel(1, current))
    for k in range(2, d + 1):
        tape = _UniformTape(seed.generator(k))
        pk = gp.p[k - 1]
        # extensions[g] = vertices w with g + {w} in the current level
        extensions: dict = {}
        for s in sorted(current):
            for j in range(len(s)):
                g = s[:j] + s[j + 1 :]
                extensions.setdefault(g, set()).add(s[j])
        nxt = set()
        for t in sorted(current):
            cand = None
            for j in range(len(t)):
                ext = extensions.get(t[:j] + t[j + 1 :], set())
                cand = ext if cand is None else cand & ext
                if not cand:
                    break
            if not cand:
                continue
            for w in sorted(cand):
                if w <= t[-1]:
                    continue
                if tape.next() < pk:
                    nxt.add(t + (w,))
        levels.append(SetLevel(k, nxt))
        current = nxt
    return ComplexD(n, d, levels)
