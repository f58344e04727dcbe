"""Lexicographic ranking/unranking of vertex combinations and binomial tables.

Every skeleton level stores k-simplices as strictly increasing vertex tuples;
their lexicographic rank among all (k+1)-subsets of range(n) doubles as a
dense integer id.  The vectorized paths below keep the large Linial-Meshulam
samplers and the union-find kernel free of per-simplex Python overhead.
"""

from __future__ import annotations

import math
from bisect import bisect_right
from functools import lru_cache

import numpy as np


def comb(n: int, k: int) -> int:
    if k < 0 or n < 0 or k > n:
        return 0
    return math.comb(n, k)


@lru_cache(maxsize=128)
def prefix_tables(n: int, k: int) -> tuple[np.ndarray, ...]:
    """Cumulative tables A_i with A_i[v] = #combinations whose i-th element < v.

    More precisely A_i[v] = sum_{u < v} C(n-1-u, k-1-i); the lex rank of
    c_0 < ... < c_{k-1} is sum_i (A_i[c_i] - A_i[c_{i-1}+1]).
    """
    tables = []
    for i in range(k):
        j = k - 1 - i
        vals = [comb(n - 1 - u, j) for u in range(n)]
        a = np.zeros(n + 1, dtype=np.int64)
        a[1:] = np.cumsum(vals, dtype=np.int64)
        tables.append(a)
    return tuple(tables)


def rank_comb(tup: tuple[int, ...], n: int) -> int:
    """Lexicographic rank of a strictly increasing tuple among C(n, k) subsets."""
    k = len(tup)
    if k == 2:  # hot path for (d-1)-simplices at d = 2
        u, v = tup
        return u * (2 * n - u - 1) // 2 + (v - u - 1)
    tables = prefix_tables(n, k)
    r = 0
    prev = -1
    for i, c in enumerate(tup):
        a = tables[i]
        r += int(a[c]) - int(a[prev + 1])
        prev = c
    return r


def unrank_comb(r: int, n: int, k: int) -> tuple[int, ...]:
    """Inverse of :func:`rank_comb`; r must lie in [0, C(n, k))."""
    tables = prefix_tables(n, k)
    out = []
    prev = -1
    for i in range(k):
        a = tables[i]
        t = r + int(a[prev + 1])
        c = bisect_right(a, t) - 1
        r = t - int(a[c])
        out.append(c)
        prev = c
    return tuple(out)


def rank_combs(cols: list[np.ndarray], n: int) -> np.ndarray:
    """Vectorized lex rank; cols[i] holds the i-th vertex of each tuple."""
    k = len(cols)
    if k == 2:
        u = cols[0].astype(np.int64, copy=False)
        v = cols[1].astype(np.int64, copy=False)
        return u * (2 * n - u - 1) // 2 + (v - u - 1)
    tables = prefix_tables(n, k)
    r = np.zeros(len(cols[0]), dtype=np.int64)
    prev = None
    for i in range(k):
        a = tables[i]
        c = cols[i].astype(np.int64, copy=False)
        r += a[c]
        if prev is not None:
            r -= a[prev + 1]
        prev = c
    return r


def unrank_combs(ranks: np.ndarray, n: int, k: int) -> list[np.ndarray]:
    """Vectorized inverse of :func:`rank_combs`; returns k vertex columns."""
    tables = prefix_tables(n, k)
    r = ranks.astype(np.int64, copy=True)
    cols = []
    prev = None
    for i in range(k):
        a = tables[i]
        t = r if prev is None else r + a[prev + 1]
        c = np.searchsorted(a, t, side="right") - 1
        r = t - a[c]
        cols.append(c.astype(np.int32))
        prev = c
    return cols


def pair_rank(u: np.ndarray, v: np.ndarray, n: int) -> np.ndarray:
    """Lex rank of edges (u, v), u < v, as int64; closed form, no tables."""
    u = u.astype(np.int64, copy=False)
    v = v.astype(np.int64, copy=False)
    return u * (2 * n - u - 1) // 2 + (v - u - 1)
