"""Finite d-dimensional simplicial complexes with per-dimension skeleton sets.

A simplex is a plain tuple of strictly increasing vertex ids.  A ComplexD
stores one skeleton level per dimension 0..d; levels come in three storage
flavors so that the same data model covers both desk-scale complexes (hash
sets of tuples) and Linial-Meshulam complexes at n ~ 10^4 whose full lower
skeleton is only ever represented implicitly:

* SetLevel      -- explicit frozenset of tuples (the default),
* CompleteLevel -- all (k+1)-subsets of range(n), stored as a formula,
* ArrayLevel    -- sorted numpy array of lexicographic rank codes.

Dense integer ids (``index_of``) follow lexicographic order in all three.
"""

from __future__ import annotations

import json
from itertools import combinations
from typing import Iterable, Iterator

import numpy as np

from .combin import comb, rank_comb, unrank_comb, unrank_combs
from .errors import DimensionError, MembershipError

Simplex = tuple  # strictly increasing vertex tuple; dimension = len - 1


def simplex(vertices: Iterable[int]) -> Simplex:
    """Canonical simplex: sorted tuple of distinct non-negative vertex ids."""
    t = tuple(sorted(set(int(v) for v in vertices)))
    if not t:
        raise DimensionError("a simplex needs at least one vertex")
    if t[0] < 0:
        raise DimensionError(f"negative vertex id in {t}")
    return t


def dim(s: Simplex) -> int:
    return len(s) - 1


def faces(s: Simplex, k: int) -> set:
    """All k-dimensional faces of s; |result| = C(dim(s)+1, k+1)."""
    if k < 0 or k > dim(s):
        raise DimensionError(f"face dimension {k} out of range for {s}")
    return set(combinations(s, k + 1))


# ---------------------------------------------------------------------------
# skeleton levels


class SetLevel:
    """Explicit level: a frozenset of simplex tuples plus a lazy lex index."""

    __slots__ = ("k", "_set", "_sorted", "_index")

    def __init__(self, k: int, simplices: Iterable[Simplex]):
        self.k = k
        self._set = frozenset(simplices)
        for t in self._set:
            if len(t) != k + 1:
                raise DimensionError(f"{t} is not a {k}-simplex")
        self._sorted = None
        self._index = None

    def __contains__(self, t: Simplex) -> bool:
        return t in self._set

    def __len__(self) -> int:
        return len(self._set)

    def __iter__(self) -> Iterator[Simplex]:
        return iter(self.sorted_list())

    def sorted_list(self) -> list:
        if self._sorted is None:
            self._sorted = sorted(self._set)
        return self._sorted

    def index_of(self, t: Simplex) -> int:
        if self._index is None:
            self._index = {s: i for i, s in enumerate(self.sorted_list())}
        try:
            return self._index[t]
        except KeyError:
            raise MembershipError(f"{t} not in level {self.k}") from None

    def simplex_at(self, i: int) -> Simplex:
        return self.sorted_list()[i]


class CompleteLevel:
    """Implicit level containing every (k+1)-subset of range(n)."""

    __slots__ = ("k", "n")

    def __init__(self, k: int, n: int):
        self.k = k
        self.n = n

    def __contains__(self, t: Simplex) -> bool:
        return (
            len(t) == self.k + 1
            and all(0 <= v < self.n for v in t)
            and all(a < b for a, b in zip(t, t[1:]))
        )

    def __len__(self) -> int:
        return comb(self.n, self.k + 1)

    def __iter__(self) -> Iterator[Simplex]:
        return combinations(range(self.n), self.k + 1)

    def index_of(self, t: Simplex) -> int:
        if t not in self:
            raise MembershipError(f"{t} not in level {self.k}")
        return rank_comb(t, self.n)

    def simplex_at(self, i: int) -> Simplex:
        return unrank_comb(i, self.n, self.k + 1)


class ArrayLevel:
    """Level backed by a sorted int64 array of lexicographic rank codes."""

    __slots__ = ("k", "n", "codes", "_cols")

    def __init__(self, k: int, n: int, codes: np.ndarray):
        self.k = k
        self.n = n
        codes = np.asarray(codes, dtype=np.int64)
        if codes.size > 1 and not (codes[1:] > codes[:-1]).all():
            codes = np.unique(codes)
        self.codes = codes
        self._cols = None

    def __contains__(self, t: Simplex) -> bool:
        if len(t) != self.k + 1:
            return False
        c = rank_comb(t, self.n)
        i = np.searchsorted(self.codes, c)
        return i < self.codes.size and self.codes[i] == c

    def __len__(self) -> int:
        return int(self.codes.size)

    def __iter__(self) -> Iterator[Simplex]:
        cols = self.vertex_columns()
        for row in range(self.codes.size):
            yield tuple(int(c[row]) for c in cols)

    def vertex_columns(self) -> list:
        if self._cols is None:
            self._cols = unrank_combs(self.codes, self.n, self.k + 1)
        return self._cols

    def index_of(self, t: Simplex) -> int:
        c = rank_comb(t, self.n)
        i = int(np.searchsorted(self.codes, c))
        if i >= self.codes.size or self.codes[i] != c:
            raise MembershipError(f"{t} not in level {self.k}")
        return i

    def simplex_at(self, i: int) -> Simplex:
        return unrank_comb(int(self.codes[i]), self.n, self.k + 1)


Level = SetLevel | CompleteLevel | ArrayLevel


# ---------------------------------------------------------------------------
# the complex


class ComplexD:
    """A finite d-dimensional complex on vertex set [n], stored by skeletons.

    Downward closure is maintained by every constructor; ``validate()``
    re-checks it explicitly (meant for tests and small complexes).
    """

    __slots__ = ("n", "d", "levels")

    def __init__(self, n: int, d: int, levels: list):
        if d < 1:
            raise DimensionError("top dimension must be >= 1")
        if len(levels) != d + 1:
            raise DimensionError(f"need {d + 1} levels, got {len(levels)}")
        self.n = n
        self.d = d
        self.levels = tuple(levels)

    # -- constructors ------------------------------------------------------

    @classmethod
    def from_simplices(
        cls,
        n: int,
        d: int,
        simplices: Iterable[Simplex],
        include_all_vertices: bool = True,
    ) -> "ComplexD":
        """Downward closure of the given simplices (all dims <= d).

        With ``include_all_vertices`` the 0-skeleton is all of [n] (the model's
        convention); without it only vertices of the given simplices appear
        (used for extracted neighborhoods, which keep the ambient n).
        """
        sets: list[set] = [set() for _ in range(d + 1)]
        stack = [simplex(s) for s in simplices]
        for s in stack:
            if dim(s) > d:
                raise DimensionError(f"{s} exceeds top dimension {d}")
            if s[-1] >= n:
                raise DimensionError(f"vertex {s[-1]} outside [0, {n})")
        seen = set(stack)
        while stack:
            s = stack.pop()
            sets[dim(s)].add(s)
            if dim(s) > 0:
                for f in combinations(s, len(s) - 1):
                    if f not in seen:
                        seen.add(f)
                        stack.append(f)
        if include_all_vertices:
            sets[0].update((v,) for v in range(n))
        return cls(n, d, [SetLevel(k, sets[k]) for k in range(d + 1)])

    @classmethod
    def complete(cls, n: int, d: int) -> "ComplexD":
        """The complete complex Delta_n up to dimension d."""
        return cls(n, d, [CompleteLevel(k, n) for k in range(d + 1)])

    @classmethod
    def with_complete_skeleton(cls, n: int, d: int, top: Level) -> "ComplexD":
        """Linial-Meshulam layout: complete levels below d, explicit top level."""
        return cls(n, d, [CompleteLevel(k, n) for k in range(d)] + [top])

    # -- queries -----------------------------------------------------------

    def level(self, k: int) -> Level:
        if k < 0 or k > self.d:
            raise DimensionError(f"no level {k} in a {self.d}-complex")
        return self.levels[k]

    def s(self, k: int) -> int:
        """Number of k-simplices."""
        return len(self.level(k))

    def __contains__(self, t: Simplex) -> bool:
        k = dim(t)
        return 0 <= k <= self.d and t in self.levels[k]

    def validate(self) -> None:
        """Assert downward closure and vertex range; O(total size)."""
        for k in range(self.d, 0, -1):
            lower = self.levels[k - 1]
            for s in self.levels[k]:
                if s[-1] >= self.n:
                    raise DimensionError(f"vertex {s[-1]} outside [0, {self.n})")
                for f in combinations(s, k):
                    if f not in lower:
                        raise MembershipError(f"missing face {f} of {s}")

    def maximal_simplices(self) -> Iterator[Simplex]:
        """Simplices not contained in any stored higher simplex, by descending dim."""
        for k in range(self.d, -1, -1):
            if k == self.d:
                yield from self.levels[k]
                continue
            covered = set()
            for s in self.levels[k + 1]:
                covered.update(combinations(s, k + 1))
            for s in self.levels[k]:
                if s not in covered:
                    yield s


def downward_closure(s: Simplex) -> ComplexD:
    """Q(s): the complex containing exactly the non-empty subsets of s."""
    s = simplex(s)
    return ComplexD.from_simplices(
        s[-1] + 1, max(dim(s), 1), [s], include_all_vertices=False
    )


def adjacent(a: Simplex, b: Simplex, x: ComplexD) -> bool:
    """True iff some d-simplex of x contains both (d-1)-simplices a and b."""
    for t, name in ((a, "a"), (b, "b")):
        if dim(t) != x.d - 1 or t not in x:
            raise MembershipError(f"{name}={t} is not a (d-1)-simplex of the complex")
    if a == b:
        return False
    union = tuple(sorted(set(a) | set(b)))
    if len(union) != x.d + 1:
        return False
    return union in x.levels[x.d]


# ---------------------------------------------------------------------------
# serialization: JSON Lines, one record per maximal simplex

MAX_JSONL_RECORDS = 10_000_000


def write_jsonl(x: ComplexD, path) -> int:
    """Write one ``{"dim": k, "vertices": [...]}`` record per maximal simplex."""
    count = 0
    with open(path, "w") as fh:
        for s in x.maximal_simplices():
            fh.write(json.dumps({"dim": dim(s), "vertices": list(s)}) + "\n")
            count += 1
            if count > MAX_JSONL_RECORDS:
                from .errors import ResourceBudgetError

                raise ResourceBudgetError(
                    f"complex has more than {MAX_JSONL_RECORDS} maximal simplices"
                )
    return count


def read_jsonl(path, n: int | None = None, d: int | None = None) -> ComplexD:
    """Read maximal-simplex records and re-close downward."""
    tops = []
    max_v = -1
    max_d = 0
    with open(path) as fh:
        for line in fh:
            line = line.strip()
            if not line:
                continue
            rec = json.loads(line)
            s = simplex(rec["vertices"])
            if dim(s) != rec["dim"]:
                raise DimensionError(f"record dim {rec['dim']} != actual {dim(s)}")
            tops.append(s)
            max_v = max(max_v, s[-1])
            max_d = max(max_d, dim(s))
    n = n if n is not None else max_v + 1
    d = d if d is not None else max(max_d, 1)
    return ComplexD.from_simplices(n, d, tops)
