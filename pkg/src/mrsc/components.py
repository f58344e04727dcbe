"""Exact d-dimensional connected components over S_{d-1}(X).

Two (d-1)-simplices are connected when a chain of shared d-simplices joins
them; the union-find pass in ``_ufkernel`` computes the partition with
d-simplices as nodes, and the brute-force BFS here is the independent
oracle.  Component labels are d-simplex root indices for covered faces and
``m + face_id`` for uncovered singleton faces.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from itertools import combinations

import numpy as np

from ._ufkernel import face_components, lm2_components
from .combin import unrank_combs
from .complexes import ArrayLevel, CompleteLevel, ComplexD, SetLevel
from .errors import ResourceBudgetError
from .indexing import _face_id_table, _top_vertex_table

MAX_MATERIALIZED = 5_000_000


@dataclass(frozen=True)
class ComponentInfo:
    label: int
    size: int  # number of (d-1)-simplices
    min_member: int  # smallest dense face id (the tie-break key)
    s0: int  # vertices touched by the component's simplices


class ComponentReport:
    """Component labeling plus sorted size statistics.

    Size data is held as a histogram (size -> multiplicity) so reports stay
    small even when the complex has ~10^8 (d-1)-simplices; ``sizes()``
    materializes the sorted vector under a budget guard.
    """

    def __init__(
        self, d, n, n_faces, head, root, counts, minmem, covered, top, members_s0,
        vertex_cols=None,
    ):
        self.d = d
        self.n = n
        self.n_faces = n_faces
        self.m = int(root.size)
        self._head = head  # face id -> an incident d-simplex (-1 uncovered); None when huge
        self._root = root  # d-simplex -> component root d-simplex
        self._counts = counts  # root d-simplex -> distinct (d-1)-faces
        self._minmem = minmem
        self._cols = vertex_cols  # d=2 vertex columns, for head-less label lookups
        self.covered = covered
        self.top = top  # list[ComponentInfo] by (-size, min_member)
        self._members_s0 = members_s0
        covered_sizes = counts[counts > 0]
        self.n_components = int(covered_sizes.size) + (n_faces - covered)
        self.size_counts: dict = {}
        if covered_sizes.size:
            if int(covered_sizes.max()) > 1_000_000:  # giant sizes: bincount too wide
                vals, cnts = np.unique(covered_sizes, return_counts=True)
                self.size_counts = {int(s): int(c) for s, c in zip(vals, cnts)}
            else:
                hist = np.bincount(covered_sizes)
                self.size_counts = {
                    int(s): int(c) for s, c in enumerate(hist) if s > 0 and c > 0
                }
        singletons = n_faces - covered
        if singletons:
            self.size_counts[1] = self.size_counts.get(1, 0) + singletons

    # -- labels ---------------------------------------------------------------

    def label_of(self, face_id: int) -> int:
        if self._head is not None:
            h = int(self._head[face_id])
            if h < 0:
                return self.m + int(face_id)
            return int(self._root[h])
        # head-less (very large) reports locate one incident d-simplex by scan
        from .combin import unrank_comb

        u, v = unrank_comb(int(face_id), self.n, 2)
        av, bv, cv = self._cols
        hits = np.flatnonzero(
            ((av == u) & (bv == v)) | ((av == u) & (cv == v)) | ((bv == u) & (cv == v))
        )
        if hits.size == 0:
            return self.m + int(face_id)
        return int(self._root[hits[0]])

    def size_of_label(self, label: int) -> int:
        return int(self._counts[label]) if label < self.m else 1

    def members(self, label: int) -> np.ndarray:
        """Face ids of one component (guarded; meant for desk-scale use)."""
        if self.n_faces > MAX_MATERIALIZED or self._head is None:
            raise ResourceBudgetError("member scan too large; use label_of per face")
        if label >= self.m:
            return np.asarray([label - self.m], dtype=np.int64)
        cov = np.flatnonzero(self._head >= 0)
        return cov[self._root[self._head[cov]] == label]

    # -- size statistics -------------------------------------------------------

    @property
    def cmax_size(self) -> int:
        return self.top[0].size if self.top else 0

    @property
    def c2_size(self) -> int:
        return self.top[1].size if len(self.top) > 1 else 0

    def sizes(self) -> np.ndarray:
        """Component sizes sorted non-increasing (guarded materialization)."""
        if self.n_components > MAX_MATERIALIZED:
            raise ResourceBudgetError(
                f"{self.n_components} components; use size_counts instead"
            )
        out = np.repeat(
            np.fromiter(self.size_counts.keys(), dtype=np.int64),
            np.fromiter(self.size_counts.values(), dtype=np.int64),
        )
        out[::-1].sort()
        return out

    def total_faces(self) -> int:
        return sum(s * c for s, c in self.size_counts.items())

    def to_json(self, include_labels: bool = False) -> str:
        doc = {
            "n_components": self.n_components,
            "sizes": [int(s) for s in self.sizes()],
            "s0_cmax": self.top[0].s0 if self.top else 0,
        }
        if include_labels:
            if self.n_faces > MAX_MATERIALIZED:
                raise ResourceBudgetError("label list too large to serialize")
            doc["labels"] = [self.label_of(f) for f in range(self.n_faces)]
        return json.dumps(doc)


def z_geq(report: ComponentReport, k: int) -> int:
    """Number of (d-1)-simplices lying in components of size >= k."""
    if k < 1:
        raise ValueError("k must be >= 1")
    return sum(s * c for s, c in report.size_counts.items() if s >= k)


@dataclass(frozen=True)
class NormalizedStats:
    frac_cmax: float  # s_{d-1}(C_max) / s_{d-1}(X)
    frac_c2: float
    frac_s0_cmax: float  # s_0(C_max) / n
    frac_components: float  # C_n / s_{d-1}(X)
    degenerate: bool


def normalized_stats(report: ComponentReport, x: ComplexD, gp=None) -> NormalizedStats:
    """Fractions normalized by the observed s_{d-1}(X) (and n for vertices)."""
    total = report.n_faces
    if total == 0:
        return NormalizedStats(0.0, 0.0, 0.0, 0.0, True)
    return NormalizedStats(
        report.cmax_size / total,
        report.c2_size / total,
        (report.top[0].s0 / x.n) if report.top else 0.0,
        report.n_components / total,
        False,
    )


# ---------------------------------------------------------------------------
# main computation


def _members_s0_fn(x: ComplexD):
    """Vertices touched by a set of member d-simplices (= by their faces)."""
    top = x.levels[x.d]
    if isinstance(top, ArrayLevel):
        def s0_of(tri_idx: np.ndarray) -> int:
            cols = unrank_combs(top.codes[tri_idx], x.n, x.d + 1)
            return int(np.unique(np.concatenate(cols)).size)
    else:
        rows = top.sorted_list() if isinstance(top, SetLevel) else list(top)

        def s0_of(tri_idx: np.ndarray) -> int:
            verts = set()
            for i in tri_idx:
                verts.update(rows[int(i)])
            return len(verts)
    return s0_of


def _top_infos(root, counts, minmem, head, members_s0, d, top_k=2) -> list[ComponentInfo]:
    roots = np.flatnonzero(counts)
    infos = []
    if roots.size:
        sizes = counts[roots]
        cand = []
        remaining = sizes
        remaining_roots = roots
        while len(cand) < top_k and remaining.size:
            s = int(remaining.max())
            mask = remaining == s
            group = remaining_roots[mask]
            cand.extend((s, int(minmem[r]), int(r)) for r in group)
            keep = ~mask
            remaining = remaining[keep]
            remaining_roots = remaining_roots[keep]
        cand.sort(key=lambda t: (-t[0], t[1]))
        for size, min_member, r in cand[:top_k]:
            member_tris = np.flatnonzero(root == r)
            infos.append(ComponentInfo(int(r), size, min_member, members_s0(member_tris)))
    # uncovered faces are singleton components (s0 = d); smallest ids win ties
    singles_needed = top_k - len(infos)
    if singles_needed > 0 and head is not None and head.size:
        m = int(root.size)
        chunk = 1 << 20
        for start in range(0, head.size, chunk):
            sub = np.flatnonzero(head[start : start + chunk] < 0)
            for off in sub[:singles_needed]:
                fid = start + int(off)
                infos.append(ComponentInfo(m + fid, 1, fid, d))
                singles_needed -= 1
            if singles_needed <= 0:
                break
    infos.sort(key=lambda c: (-c.size, c.min_member))
    return infos


def component_map(x: ComplexD, top_k: int = 2) -> ComponentReport:
    """Union-find components: union the d+1 faces of every d-simplex."""
    n_faces = x.s(x.d - 1)
    face_level = x.levels[x.d - 1]
    top_level = x.levels[x.d]
    vertex_cols = None
    if (
        x.d == 2
        and isinstance(face_level, CompleteLevel)
        and isinstance(top_level, ArrayLevel)
    ):
        head, root, counts, minmem, covered, vertex_cols = lm2_components(
            top_level.codes, x.n
        )
        if vertex_cols is not None and top_level._cols is None:
            top_level._cols = vertex_cols
    else:
        tv = _top_vertex_table(x)
        cols = _face_id_table(x, tv)
        head, root, counts, minmem, covered = face_components(cols, n_faces)
    if vertex_cols is not None:
        av, bv, cv = vertex_cols

        def members_s0(tri_idx: np.ndarray) -> int:
            return int(np.unique(np.concatenate([av[tri_idx], bv[tri_idx], cv[tri_idx]])).size)
    else:
        members_s0 = _members_s0_fn(x)
    top = _top_infos(root, counts, minmem, head, members_s0, x.d, top_k)
    if len(top) < top_k and head is None and covered < n_faces and vertex_cols is not None:
        # head-less degenerate case: probe small face ids for uncovered singletons
        from .combin import unrank_comb

        av, bv, cv = vertex_cols
        m = int(root.size)
        needed = top_k - len(top)
        for f in range(min(n_faces, 4096)):
            if needed == 0:
                break
            u, v = unrank_comb(f, x.n, 2)
            hit = bool(
                np.any(((av == u) & (bv == v)) | ((av == u) & (cv == v)) | ((bv == u) & (cv == v)))
            )
            if not hit:
                top.append(ComponentInfo(m + f, 1, f, x.d))
                needed -= 1
        top.sort(key=lambda c: (-c.size, c.min_member))
    return ComponentReport(
        x.d, x.n, n_faces, head, root, counts, minmem, covered, top, members_s0,
        vertex_cols,
    )


def brute_force_components(x: ComplexD, cap: int = 10_000) -> ComponentReport:
    """Independent oracle: BFS on the explicit (d-1)-adjacency graph.

    Produces the same report shape as component_map but from scratch: dense
    face ids, pairwise adjacency via shared d-simplices, plain BFS.
    """
    n_faces = x.s(x.d - 1)
    if n_faces > cap:
        raise ResourceBudgetError(f"brute force capped at {cap} simplices, got {n_faces}")
    level = x.levels[x.d - 1]
    tops = list(x.levels[x.d])
    m = len(tops)
    adj: dict[int, set] = {}
    head = np.full(n_faces, -1, dtype=np.int64)
    for i, t in enumerate(tops):
        ids = [level.index_of(f) for f in combinations(t, x.d)]
        for fid in ids:
            if head[fid] < 0:
                head[fid] = i
        for a, b in combinations(ids, 2):
            adj.setdefault(a, set()).add(b)
            adj.setdefault(b, set()).add(a)
    covered_ids = sorted(int(f) for f in np.flatnonzero(head >= 0))
    root = np.arange(m, dtype=np.int64)
    counts = np.zeros(m, dtype=np.int64)
    minmem = np.full(m, np.iinfo(np.int64).max, dtype=np.int64)
    visited = set()
    for start in covered_ids:
        if start in visited:
            continue
        stack, comp = [start], []
        visited.add(start)
        while stack:
            u = stack.pop()
            comp.append(u)
            for w in adj.get(u, ()):
                if w not in visited:
                    visited.add(w)
                    stack.append(w)
        r = int(head[min(comp)])
        for u in comp:
            root[int(head[u])] = r
        counts[r] = len(comp)
        minmem[r] = min(comp)
    # BFS roots label whole d-simplex groups; align root[] for every simplex
    for i, t in enumerate(tops):
        fid = level.index_of(tuple(t[: x.d]))
        root[i] = root[int(head[fid])]
    members_s0 = _members_s0_fn(x)
    top = _top_infos(root, counts, minmem, head, members_s0, x.d, top_k=2)
    return ComponentReport(
        x.d, x.n, n_faces, head, root, counts, minmem, len(covered_ids), top, members_s0
    )


def partition_signature(report: ComponentReport) -> frozenset:
    """Hashable partition of face ids (small complexes only), for oracle equality."""
    if report.n_faces > 200_000:
        raise ResourceBudgetError("partition signature is a desk-scale helper")
    groups: dict[int, list] = {}
    for f in range(report.n_faces):
        groups.setdefault(report.label_of(f), []).append(f)
    return frozenset(frozenset(g) for g in groups.values())
