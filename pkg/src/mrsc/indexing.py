"""Dense indexing of a complex for exploration: face ids and cofacet lists.

Exploration visits every cofacet of the current (d-1)-simplex, so the map
from (d-1)-simplex id to incident d-simplices is precomputed once per
complex as a CSR structure.  (d-1)-simplex ids are the level's dense
lexicographic indices.
"""

from __future__ import annotations

import numpy as np

from .combin import rank_combs
from .complexes import ArrayLevel, CompleteLevel, ComplexD, SetLevel, Simplex
from .errors import MembershipError, ResourceBudgetError

MAX_FACE_IDS = 60_000_000


class IndexedComplex:
    """Face ids, top-simplex vertex table, and cofacet CSR for one complex."""

    def __init__(self, x: ComplexD):
        self.x = x
        self.d = x.d
        self.n = x.n
        self.face_level = x.levels[x.d - 1]
        self.n_faces = len(self.face_level)
        if self.n_faces > MAX_FACE_IDS:
            raise ResourceBudgetError(
                f"{self.n_faces} (d-1)-simplices exceed the indexing budget"
            )
        self.top_vertices = _top_vertex_table(x)  # (m, d+1) int32
        self.m = self.top_vertices.shape[0]
        self.top_face_ids = _face_id_table(x, self.top_vertices)  # (m, d+1) int64
        self.cof_indptr, self.cof_indices = _cofacet_csr(self.top_face_ids, self.n_faces)

    def face_id(self, s: Simplex) -> int:
        try:
            return self.face_level.index_of(tuple(s))
        except KeyError:
            raise MembershipError(f"{tuple(s)} is not a (d-1)-simplex") from None

    def face_tuple(self, i: int) -> Simplex:
        return self.face_level.simplex_at(int(i))

    def top_tuple(self, i: int) -> Simplex:
        return tuple(int(v) for v in self.top_vertices[i])

    def cofacets(self, face_id: int) -> np.ndarray:
        """Indices of d-simplices containing the given (d-1)-simplex."""
        return self.cof_indices[self.cof_indptr[face_id] : self.cof_indptr[face_id + 1]]

    def cofacet_tuples(self, s: Simplex) -> list:
        return [self.top_tuple(i) for i in self.cofacets(self.face_id(s))]

    def up_degree(self, face_id: int) -> int:
        return int(self.cof_indptr[face_id + 1] - self.cof_indptr[face_id])

    def up_degrees(self, face_ids: np.ndarray) -> np.ndarray:
        return (self.cof_indptr[face_ids + 1] - self.cof_indptr[face_ids]).astype(np.int64)


def _top_vertex_table(x: ComplexD) -> np.ndarray:
    top = x.levels[x.d]
    if isinstance(top, ArrayLevel):
        return np.column_stack(top.vertex_columns()).astype(np.int32, copy=False)
    rows = top.sorted_list() if isinstance(top, SetLevel) else list(top)
    if not rows:
        return np.zeros((0, x.d + 1), dtype=np.int32)
    return np.asarray(rows, dtype=np.int32)


def _face_id_table(x: ComplexD, tv: np.ndarray) -> np.ndarray:
    """Column j holds the id of the face obtained by dropping vertex column j."""
    m, w = tv.shape
    level = x.levels[x.d - 1]
    out = np.empty((m, w), dtype=np.int64)
    if m == 0:
        return out
    if isinstance(level, CompleteLevel):
        for j in range(w):
            cols = [tv[:, c] for c in range(w) if c != j]
            out[:, j] = rank_combs(cols, x.n)
    elif isinstance(level, ArrayLevel):
        for j in range(w):
            cols = [tv[:, c] for c in range(w) if c != j]
            codes = rank_combs(cols, x.n)
            idx = np.searchsorted(level.codes, codes)
            if not (level.codes[idx] == codes).all():
                raise MembershipError("top simplex with a missing (d-1)-face")
            out[:, j] = idx
    else:
        for i in range(m):
            t = tuple(int(v) for v in tv[i])
            for j in range(w):
                out[i, j] = level.index_of(t[:j] + t[j + 1 :])
    return out


def _cofacet_csr(face_ids: np.ndarray, n_faces: int):
    m, w = face_ids.shape
    flat = face_ids.reshape(-1)
    counts = np.bincount(flat, minlength=n_faces)
    indptr = np.zeros(n_faces + 1, dtype=np.int64)
    np.cumsum(counts, out=indptr[1:])
    order = np.argsort(flat, kind="stable")
    indices = (order // w).astype(np.int64)
    return indptr, indices
