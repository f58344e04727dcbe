"""Union-find components keyed by d-simplices, one pass over face incidences.

Each d-simplex is a union-find node; a ``head`` array over (d-1)-simplex ids
links every face to the first d-simplex that touched it, so a single sweep
both unions cofacet-sharing d-simplices and counts the distinct faces per
component (counts merge with the unions).  This keeps the heavy arrays at
int32 over faces and int64 only over d-simplices, which is what lets the
n ~ 16000 Linial-Meshulam runs fit comfortably in memory.

A pure-Python twin with identical union order serves as fallback and
cross-check.
"""

from __future__ import annotations

import numpy as np

try:
    from numba import njit

    NUMBA_OK = True
except Exception:  # pragma: no cover - exercised only without numba
    NUMBA_OK = False

    def njit(*a, **k):
        def deco(f):
            return f

        return deco


@njit(cache=True)
def _pass_cols(cols, head, parent, size, counts, minmem):
    """Single sweep: link faces to d-simplices, union, merge counts/minima."""
    m, w = cols.shape
    covered = 0
    for i in range(m):
        x = i
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        for j in range(w):
            f = cols[i, j]
            h = head[f]
            if h < 0:
                head[f] = i
                covered += 1
                counts[x] += 1
                if f < minmem[x]:
                    minmem[x] = f
            else:
                y = h
                while parent[y] != y:
                    parent[y] = parent[parent[y]]
                    y = parent[y]
                if x != y:
                    if size[x] < size[y]:
                        x, y = y, x
                    parent[y] = x
                    size[x] += size[y]
                    counts[x] += counts[y]
                    if minmem[y] < minmem[x]:
                        minmem[x] = minmem[y]
    return covered


@njit(cache=True)
def _compress(parent):
    for i in range(parent.size):
        r = i
        while parent[r] != r:
            r = parent[r]
        x = i
        while parent[x] != r:
            nxt = parent[x]
            parent[x] = r
            x = nxt


@njit(cache=True)
def _zero_non_roots(parent, counts):
    for i in range(parent.size):
        if parent[i] != i:
            counts[i] = 0


def _py_pass_cols(cols, head, parent, size, counts, minmem):
    m, w = cols.shape
    covered = 0
    for i in range(m):
        x = i
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = int(parent[x])
        for j in range(w):
            f = int(cols[i, j])
            h = int(head[f])
            if h < 0:
                head[f] = i
                covered += 1
                counts[x] += 1
                if f < minmem[x]:
                    minmem[x] = f
            else:
                y = h
                while parent[y] != y:
                    parent[y] = parent[parent[y]]
                    y = int(parent[y])
                if x != y:
                    if size[x] < size[y]:
                        x, y = y, x
                    parent[y] = x
                    size[x] += size[y]
                    counts[x] += counts[y]
                    if minmem[y] < minmem[x]:
                        minmem[x] = minmem[y]
    return covered


def _py_compress(parent):
    for i in range(parent.size):
        r = int(i)
        while parent[r] != r:
            r = int(parent[r])
        x = int(i)
        while parent[x] != r:
            nxt = int(parent[x])
            parent[x] = r
            x = nxt


def face_components(cols: np.ndarray, n_faces: int, use_numba: bool | None = None):
    """Components of the face-sharing relation among the rows of ``cols``.

    Returns (head, root, counts, minmem, covered): head[f] is the first row
    touching face f (-1 when uncovered); root[i] the component root row of
    row i (fully compressed); counts[r]/minmem[r] the distinct-face count and
    smallest face id of the component rooted at r.
    """
    m = int(cols.shape[0]) if cols.size else 0
    head = np.full(n_faces, -1, dtype=np.int32)
    parent = np.arange(m, dtype=np.int32)
    size = np.ones(m, dtype=np.int32)
    counts = np.zeros(m, dtype=np.int64)
    minmem = np.full(m, np.iinfo(np.int64).max, dtype=np.int64)
    if m == 0:
        return head, parent, counts, minmem, 0
    cols = np.ascontiguousarray(cols, dtype=np.int64)
    fast = NUMBA_OK if use_numba is None else (use_numba and NUMBA_OK)
    if fast:
        covered = int(_pass_cols(cols, head, parent, size, counts, minmem))
        _compress(parent)
        _zero_non_roots(parent, counts)
    else:
        covered = int(_py_pass_cols(cols, head, parent, size, counts, minmem))
        _py_compress(parent)
        counts[parent != np.arange(m, dtype=np.int32)] = 0
    return head, parent, counts, minmem, covered


@njit(cache=True)
def _lm2_kernel(ranks, a0, a1, n, parent, size, counts, minmem, head):
    """Fused d=2 complete-skeleton components.

    Unranks the ascending triangle stream to vertex columns, then groups all
    3m edge incidences by the edge's smaller endpoint u: the incidences with
    u = a are row-contiguous, those with u = b follow a counting sort by b.
    Within one u-bucket a scratch array over the larger endpoint both unions
    triangles sharing an edge and spots first occurrences, so the whole sweep
    works in cache instead of hammering a C(n,2)-sized table.  ``head`` is
    filled with first-occurrence rows when non-empty (small complexes only).
    """
    m = ranks.size
    av = np.empty(m, np.int32)
    bv = np.empty(m, np.int32)
    cv = np.empty(m, np.int32)
    a = 0
    b = 1
    for i in range(m):
        r = ranks[i]
        if a0[a + 1] <= r:
            while a0[a + 1] <= r:
                a += 1
            b = a + 1
        t = (r - a0[a]) + a1[a + 1]
        if a1[b] > t:
            b = a + 1
        step = 1
        while b + step <= n - 1 and a1[b + step] <= t:
            b += step
            step <<= 1
        lo = b
        hi = min(b + step, n - 1)
        while lo < hi:
            mid = (lo + hi + 1) >> 1
            if a1[mid] <= t:
                lo = mid
            else:
                hi = mid - 1
        b = lo
        cval = (t - a1[b]) + b + 1
        av[i] = a
        bv[i] = b
        cv[i] = cval

    # counting sort of rows by b (incidences with u = b come from this order)
    hist = np.zeros(n + 1, np.int64)
    for i in range(m):
        hist[bv[i] + 1] += 1
    for v in range(1, n + 1):
        hist[v] += hist[v - 1]
    perm = np.empty(m, np.int32)
    pos = hist.copy()
    for i in range(m):
        p = pos[bv[i]]
        perm[p] = i
        pos[bv[i]] = p + 1

    fill_head = head.size > 0
    headv = np.full(n, -1, np.int32)
    covered = 0
    sa = 0  # start of the a-block for current u
    for u in range(n):
        ea = sa
        while ea < m and av[ea] == u:
            ea += 1
        sb = hist[u]
        eb = hist[u + 1]
        if ea == sa and eb == sb:
            sa = ea
            continue
        base_u = u * (2 * n - u - 1) // 2 - u - 1
        for i in range(sa, ea):
            for v in (bv[i], cv[i]):
                h = headv[v]
                if h < 0:
                    headv[v] = i
                    covered += 1
                    x = i
                    while parent[x] != x:
                        parent[x] = parent[parent[x]]
                        x = parent[x]
                    counts[x] += 1
                    f = base_u + v
                    if f < minmem[x]:
                        minmem[x] = f
                    if fill_head:
                        head[f] = i
                else:
                    x = i
                    while parent[x] != x:
                        parent[x] = parent[parent[x]]
                        x = parent[x]
                    y = h
                    while parent[y] != y:
                        parent[y] = parent[parent[y]]
                        y = parent[y]
                    if x != y:
                        if size[x] < size[y]:
                            x, y = y, x
                        parent[y] = x
                        size[x] += size[y]
                        counts[x] += counts[y]
                        if minmem[y] < minmem[x]:
                            minmem[x] = minmem[y]
        for j in range(sb, eb):
            i = perm[j]
            v = cv[i]
            h = headv[v]
            if h < 0:
                headv[v] = i
                covered += 1
                x = i
                while parent[x] != x:
                    parent[x] = parent[parent[x]]
                    x = parent[x]
                counts[x] += 1
                f = base_u + v
                if f < minmem[x]:
                    minmem[x] = f
                if fill_head:
                    head[f] = i
            else:
                x = i
                while parent[x] != x:
                    parent[x] = parent[parent[x]]
                    x = parent[x]
                y = h
                while parent[y] != y:
                    parent[y] = parent[parent[y]]
                    y = parent[y]
                if x != y:
                    if size[x] < size[y]:
                        x, y = y, x
                    parent[y] = x
                    size[x] += size[y]
                    counts[x] += counts[y]
                    if minmem[y] < minmem[x]:
                        minmem[x] = minmem[y]
        for i in range(sa, ea):
            headv[bv[i]] = -1
            headv[cv[i]] = -1
        for j in range(sb, eb):
            headv[cv[perm[j]]] = -1
        sa = ea
    return covered, av, bv, cv


def lm2_components(
    ranks: np.ndarray, n: int, with_head: bool | None = None, use_numba: bool | None = None
):
    """Fused fast path for d = 2 with a complete 1-skeleton (LM_2 layout).

    Returns (head, root, counts, minmem, covered, vertex_cols); head is None
    for very large complexes (label queries then fall back to column scans).
    """
    from .combin import prefix_tables

    m = int(ranks.size)
    n_faces = n * (n - 1) // 2
    if with_head is None:
        with_head = n_faces <= 40_000_000
    parent = np.arange(m, dtype=np.int32)
    size = np.ones(m, dtype=np.int32)
    counts = np.zeros(m, dtype=np.int64)
    minmem = np.full(m, np.iinfo(np.int64).max, dtype=np.int64)
    head = np.full(n_faces, -1, dtype=np.int32) if with_head else np.empty(0, dtype=np.int32)
    if m == 0:
        return (head if with_head else None), parent, counts, minmem, 0, None
    a0, a1, _ = prefix_tables(n, 3)
    ranks = np.ascontiguousarray(ranks, dtype=np.int64)
    fast = NUMBA_OK if use_numba is None else (use_numba and NUMBA_OK)
    if fast:
        covered, av, bv, cv = _lm2_kernel(ranks, a0, a1, n, parent, size, counts, minmem, head)
        covered = int(covered)
        _compress(parent)
        _zero_non_roots(parent, counts)
    else:
        from .combin import unrank_combs

        cols_v = unrank_combs(ranks, n, 3)
        av, bv, cv = cols_v
        u = av.astype(np.int64)
        v = bv.astype(np.int64)
        w = cv.astype(np.int64)
        f_ab = u * (2 * n - u - 1) // 2 + (v - u - 1)
        f_ac = u * (2 * n - u - 1) // 2 + (w - u - 1)
        f_bc = v * (2 * n - v - 1) // 2 + (w - v - 1)
        cols = np.column_stack([f_bc, f_ac, f_ab])
        if not with_head:
            head = np.full(n_faces, -1, dtype=np.int32)
        covered = int(_py_pass_cols(cols, head, parent, size, counts, minmem))
        _py_compress(parent)
        counts[parent != np.arange(m, dtype=np.int32)] = 0
        if not with_head:
            head = None
    return (head if head is not None and head.size else None), parent, counts, minmem, covered, [av, bv, cv]
