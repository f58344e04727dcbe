"""Rooted neighborhoods, rooted isomorphism, canonical codes, local metric.

A neighborhood B(sigma; r) grows layer by layer: at each stage every
d-simplex outside the current ball that contains a (d-1)-simplex inside it
is absorbed together with its downward closure.  Balls are small objects;
everything here trades asymptotic cleverness for exactness.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations

from .complexes import ComplexD, Simplex, dim
from .errors import MembershipError, ResourceBudgetError

CANON_MAX_VERTICES = 512
CANON_MAX_LEAVES = 500_000


@dataclass(frozen=True)
class RootedNeighborhood:
    """A finite complex with a distinguished (d-1)-simplex root.

    ``layer_of`` maps every (d-1)-simplex of the complex to its graph
    distance from the root under d-dimensional adjacency.
    """

    complex: ComplexD
    root: Simplex
    radius: int
    layer_of: dict = field(hash=False)

    def __post_init__(self):
        if dim(self.root) != self.complex.d - 1:
            raise MembershipError(f"root {self.root} is not a (d-1)-simplex")
        if self.root not in self.complex:
            raise MembershipError(f"root {self.root} absent from complex")
        if self.layer_of.get(self.root) != 0:
            raise MembershipError("layer 0 must contain exactly the root")

    @property
    def d(self) -> int:
        return self.complex.d

    def face_count(self) -> int:
        return self.complex.s(self.complex.d - 1)


def _cofacets_scan(x: ComplexD, s: Simplex):
    """All d-simplices of x containing the (d-1)-simplex s, by vertex scan."""
    top = x.levels[x.d]
    sset = set(s)
    out = []
    for w in range(x.n):
        if w in sset:
            continue
        t = tuple(sorted(sset | {w}))
        if t in top:
            out.append(t)
    return out


def neighborhood(x: ComplexD, sigma: Simplex, r: int, index=None) -> RootedNeighborhood:
    """Extract B_x(sigma; r) as a rooted complex with BFS layers.

    ``index`` may be an :class:`mrsc.indexing.IndexedComplex` over x; without
    it cofacets are found by scanning candidate apex vertices.
    """
    sigma = tuple(sigma)
    if dim(sigma) != x.d - 1 or sigma not in x:
        raise MembershipError(f"{sigma} is not a (d-1)-simplex of the complex")
    if r < 0:
        raise ValueError("radius must be >= 0")

    layer_of = {sigma: 0}
    tops: list[Simplex] = []
    tops_seen = set()
    frontier = [sigma]
    for ell in range(1, r + 1):
        new_frontier = []
        for s in frontier:
            if index is not None:
                cofs = index.cofacet_tuples(s)
            else:
                cofs = _cofacets_scan(x, s)
            for t in cofs:
                if t in tops_seen:
                    continue
                tops_seen.add(t)
                tops.append(t)
                for f in combinations(t, x.d):
                    if f not in layer_of:
                        layer_of[f] = ell
                        new_frontier.append(f)
        if not new_frontier:
            break
        frontier = new_frontier
    ball = ComplexD.from_simplices(x.n, x.d, [sigma] + tops, include_all_vertices=False)
    return RootedNeighborhood(ball, sigma, r, layer_of)


def truncate(a: RootedNeighborhood, r: int) -> RootedNeighborhood:
    """Radius-r truncation, re-extracted inside a's own complex."""
    if r >= a.radius:
        return a
    return neighborhood(a.complex, a.root, r)


# ---------------------------------------------------------------------------
# rooted isomorphism (explicit backtracking over vertex bijections)


def _structure(a: RootedNeighborhood):
    verts = sorted(v for (v,) in a.complex.levels[0])
    inc = {v: [] for v in verts}
    simplices = []
    for k in range(1, a.complex.d + 1):
        for s in a.complex.levels[k]:
            simplices.append(s)
            for v in s:
                inc[v].append(s)
    return verts, inc, simplices


def _refine_colors(verts, inc, colors):
    """Iterated color refinement; color ids follow sorted structural keys."""
    ncls = len(set(colors.values()))
    while True:
        keys = {}
        for v in verts:
            sig = sorted(
                (len(s), tuple(sorted(colors[u] for u in s if u != v))) for s in inc[v]
            )
            keys[v] = (colors[v], tuple(sig))
        order = {k: i for i, k in enumerate(sorted(set(keys.values())))}
        colors = {v: order[keys[v]] for v in verts}
        ncls2 = len(order)
        if ncls2 == ncls:
            return colors
        ncls = ncls2


def _initial_colors(a: RootedNeighborhood, verts, inc):
    rootset = set(a.root)
    keys = {}
    for v in verts:
        prof = sorted(len(s) for s in inc[v])
        keys[v] = (0 if v in rootset else 1, tuple(prof))
    order = {k: i for i, k in enumerate(sorted(set(keys.values())))}
    return {v: order[keys[v]] for v in verts}


def rooted_isomorphic(a: RootedNeighborhood, b: RootedNeighborhood) -> bool:
    """True iff a vertex bijection preserves all simplices and maps root to root."""
    if a.complex.d != b.complex.d:
        return False
    for k in range(a.complex.d + 1):
        if a.complex.s(k) != b.complex.s(k):
            return False
    va, inca, _ = _structure(a)
    vb, incb, _ = _structure(b)
    ca = _refine_colors(va, inca, _initial_colors(a, va, inca))
    cb = _refine_colors(vb, incb, _initial_colors(b, vb, incb))
    if sorted(ca.values()) != sorted(cb.values()):
        return False

    # order a's vertices root-first, then by (color, id) for a stable search
    order = sorted(va, key=lambda v: (0 if v in set(a.root) else 1, ca[v], v))
    by_color = {}
    for v in vb:
        by_color.setdefault(cb[v], []).append(v)

    bset = b.complex
    mapping: dict = {}
    used = set()

    def extend(i: int) -> bool:
        if i == len(order):
            return True
        v = order[i]
        for w in by_color.get(ca[v], ()):
            if w in used:
                continue
            if (v in set(a.root)) != (w in set(b.root)):
                continue
            mapping[v] = w
            used.add(w)
            ok = True
            for s in inca[v]:
                if all(u in mapping for u in s):
                    img = tuple(sorted(mapping[u] for u in s))
                    if img not in bset:
                        ok = False
                        break
            if ok and extend(i + 1):
                return True
            del mapping[v]
            used.discard(w)
        return False

    return extend(0)


# ---------------------------------------------------------------------------
# canonical code: individualization-refinement with twin pruning


def _is_twin(u, w, inc, levels):
    """True when swapping u and w (fixing all else) is an automorphism."""
    for s in inc[u] + inc[w]:
        img = tuple(sorted((w if x == u else u if x == w else x) for x in s))
        if img not in levels[len(s) - 1]:
            return False
    return True


def canonical_code(a: RootedNeighborhood) -> bytes:
    """Bytes equal iff rooted_isomorphic; minimal certificate over labelings.

    Vertices are labeled one at a time; the candidate cell (an equivalence
    class of the refined coloring) is branched on, twin vertices collapsing
    to one branch.  The certificate is the sorted relabeled simplex list.
    """
    verts, inc, simplices = _structure(a)
    if len(verts) > CANON_MAX_VERTICES:
        raise ResourceBudgetError(f"canonical_code capped at {CANON_MAX_VERTICES} vertices")
    colors = _refine_colors(verts, inc, _initial_colors(a, verts, inc))
    d = a.complex.d
    levels = a.complex.levels
    best: list | None = None
    leaves = 0

    def certificate(label):
        cert = [len(verts), d, tuple(sorted(label[v] for v in a.root))]
        for k in range(1, d + 1):
            cert.append(tuple(sorted(tuple(sorted(label[v] for v in s)) for s in levels[k])))
        return cert

    def encode(cert):
        # flat int16 stream; -1 separates simplices, -2 separates levels
        flat = [cert[0], d, -2, *cert[2], -2]
        for level in cert[3:]:
            for s in level:
                flat.extend(s)
                flat.append(-1)
            flat.append(-2)
        import numpy as _np

        return _np.asarray(flat, dtype=_np.int16).tobytes()

    def rec(assigned: list, colors):
        nonlocal best, leaves
        if len(assigned) == len(verts):
            leaves += 1
            if leaves > CANON_MAX_LEAVES:
                raise ResourceBudgetError("canonical labeling search exploded")
            label = {v: i for i, v in enumerate(assigned)}
            cert = certificate(label)
            if best is None or cert < best:
                best = cert
            return
        taken = set(assigned)
        free = [v for v in verts if v not in taken]
        target = min(colors[v] for v in free)
        cell = [v for v in free if colors[v] == target]
        reps = []
        for u in cell:
            if any(_is_twin(u, w, inc, levels) for w in reps):
                continue
            reps.append(u)
        for u in reps:
            c2 = dict(colors)
            c2[u] = -len(assigned) - 1  # unique invariant tag per depth
            c2 = _refine_colors(verts, inc, c2)
            rec(assigned + [u], c2)

    rec([], colors)
    assert best is not None
    return encode(best)


# ---------------------------------------------------------------------------
# the local metric


def rooted_distance(a: RootedNeighborhood, b: RootedNeighborhood, r_cap: int) -> Fraction:
    """1/(1+R*) with R* the largest R <= r_cap whose truncations are isomorphic.

    Radius-0 balls of the same dimension are always isomorphic (both are the
    closure of a (d-1)-simplex), so same-d inputs give values in
    [1/(1+r_cap), 1]; agreement through r_cap returns the floor 1/(1+r_cap).
    """
    if a.complex.d != b.complex.d:
        return Fraction(1, 1)
    r_star = -1
    for r in range(r_cap + 1):
        if canonical_code(truncate(a, r)) == canonical_code(truncate(b, r)):
            r_star = r
        else:
            break
    if r_star < 0:
        return Fraction(1, 1)
    return Fraction(1, 1 + r_star)


def truncation_codes(a: RootedNeighborhood, r_cap: int) -> tuple[bytes, ...]:
    """Canonical codes of the radius-0..r_cap truncations (for metric pooling)."""
    return tuple(canonical_code(truncate(a, r)) for r in range(r_cap + 1))


def distance_from_codes(codes_a, codes_b) -> Fraction:
    r_star = -1
    for r, (x, y) in enumerate(zip(codes_a, codes_b)):
        if x == y:
            r_star = r
        else:
            break
    if r_star < 0:
        return Fraction(1, 1)
    return Fraction(1, 1 + r_star)
