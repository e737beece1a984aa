"""Abstract simplicial complexes, joins, skeleta and deleted products.

A complex is stored by its maximal faces only (an antichain of sorted
vertex tuples on vertices 0..n-1); the full downward-closed face set is
derived on demand.  The deleted product machinery enumerates ordered
r-tuples of pairwise vertex-disjoint nonempty faces, which are exactly
the cells sigma_1 x ... x sigma_r of the r-fold deleted product, with
the symmetric group permuting coordinates freely.

Vertex-disjointness tests run on integer bitmasks, which double as
arbitrary-width bitsets, so the same code path covers any vertex count.
"""

from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator, Optional, Sequence

__all__ = [
    "SimplicialComplex",
    "DisjointTuple",
    "DeletedProductStats",
    "simplex_skeleton",
    "join_complexes",
    "disjoint_tuples",
    "deleted_product_stats",
    "verify_free_action",
]


@dataclass(frozen=True)
class SimplicialComplex:
    """Downward-closed face collection given by its maximal faces."""

    num_vertices: int
    maximal_faces: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        if self.num_vertices < 0:
            raise ValueError("num_vertices must be nonnegative")
        seen = set()
        for f in self.maximal_faces:
            if not f or list(f) != sorted(set(f)):
                raise ValueError(f"face {f} is not a sorted duplicate-free tuple")
            if f[0] < 0 or f[-1] >= self.num_vertices:
                raise ValueError(f"face {f} has vertices outside 0..{self.num_vertices - 1}")
            seen.add(frozenset(f))
        for a in seen:
            for b in seen:
                if a < b:
                    raise ValueError("maximal faces must form an antichain")

    @classmethod
    def from_faces(cls, num_vertices: int, faces: Sequence[Sequence[int]]) -> "SimplicialComplex":
        """Normalize arbitrary generating faces: dedupe, drop dominated ones."""
        sets = {frozenset(f) for f in faces if len(f) > 0}
        maximal = [s for s in sets if not any(s < t for t in sets)]
        ordered = sorted((tuple(sorted(s)) for s in maximal), key=lambda f: (len(f), f))
        return cls(num_vertices, tuple(ordered))

    def faces(self) -> tuple[tuple[int, ...], ...]:
        """All nonempty faces, sorted by (dimension, lexicographic)."""
        return _all_faces(self)

    def has_face(self, face: Sequence[int]) -> bool:
        s = set(face)
        return bool(s) and any(s.issubset(mf) for mf in self.maximal_faces)

    @property
    def dim(self) -> int:
        if not self.maximal_faces:
            return -1
        return max(len(f) for f in self.maximal_faces) - 1

    def to_json(self) -> dict:
        return {
            "num_vertices": self.num_vertices,
            "maximal_faces": [list(f) for f in self.maximal_faces],
        }

    @classmethod
    def from_json(cls, obj: dict) -> "SimplicialComplex":
        return cls.from_faces(int(obj["num_vertices"]), obj["maximal_faces"])


@lru_cache(maxsize=None)
def _all_faces(K: SimplicialComplex) -> tuple[tuple[int, ...], ...]:
    found: set[tuple[int, ...]] = set()
    for mf in K.maximal_faces:
        for size in range(1, len(mf) + 1):
            found.update(itertools.combinations(mf, size))
    return tuple(sorted(found, key=lambda f: (len(f), f)))


@dataclass(frozen=True)
class DisjointTuple:
    """Ordered r-tuple of nonempty pairwise vertex-disjoint faces."""

    faces: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        used: set[int] = set()
        for f in self.faces:
            if not f:
                raise ValueError("faces of a disjoint tuple must be nonempty")
            if used & set(f):
                raise ValueError(f"faces are not pairwise disjoint: {self.faces}")
            used |= set(f)

    @property
    def dim_sum(self) -> int:
        return sum(len(f) - 1 for f in self.faces)

    def in_complex(self, K: SimplicialComplex) -> bool:
        return all(K.has_face(f) for f in self.faces)


def simplex_skeleton(N: int, k: int) -> SimplicialComplex:
    """The k-skeleton of the N-simplex: all (k+1)-subsets of {0..N}."""
    if not 0 <= k <= N:
        raise ValueError(f"skeleton needs 0 <= k <= N, got (N={N}, k={k})")
    faces = tuple(itertools.combinations(range(N + 1), k + 1))
    return SimplicialComplex(N + 1, faces)


def join_complexes(K: SimplicialComplex, L: SimplicialComplex) -> SimplicialComplex:
    """Join with disjointly relabeled vertices (L shifted past K)."""
    shift = K.num_vertices
    faces = [
        a + tuple(v + shift for v in b)
        for a in K.maximal_faces
        for b in L.maximal_faces
    ]
    return SimplicialComplex.from_faces(shift + L.num_vertices, faces)


def _face_masks(faces: Sequence[tuple[int, ...]]) -> list[int]:
    masks = []
    for f in faces:
        m = 0
        for v in f:
            m |= 1 << v
        masks.append(m)
    return masks


def _disjoint_index_tuples(masks: Sequence[int], r: int, ordered: bool) -> Iterator[tuple[int, ...]]:
    """Backtracking enumeration of index tuples with disjoint masks.

    ordered=True yields all ordered tuples, in lexicographic order with
    respect to the face numbering; ordered=False yields only strictly
    increasing index tuples (one representative per symmetric orbit).
    """
    n = len(masks)
    chosen: list[int] = []

    def rec(used: int, start: int) -> Iterator[tuple[int, ...]]:
        if len(chosen) == r:
            yield tuple(chosen)
            return
        for i in range(start, n):
            m = masks[i]
            if m & used:
                continue
            chosen.append(i)
            yield from rec(used | m, i + 1 if not ordered else 0)
            chosen.pop()

    yield from rec(0, 0)


def disjoint_tuples(K: SimplicialComplex, r: int) -> Iterator[DisjointTuple]:
    """All ordered r-tuples of pairwise disjoint nonempty faces, each once.

    Faces are numbered by (dimension, lexicographic) order and tuples
    come out lexicographically in that numbering, so the stream is
    deterministic.
    """
    if r < 2:
        raise ValueError(f"disjoint_tuples needs r >= 2, got {r}")
    faces = K.faces()
    masks = _face_masks(faces)
    for idx in _disjoint_index_tuples(masks, r, ordered=True):
        yield DisjointTuple(tuple(faces[i] for i in idx))


def disjoint_face_combinations(K: SimplicialComplex, r: int) -> Iterator[tuple[tuple[int, ...], ...]]:
    """Unordered variant: one representative (sorted by face order) per orbit."""
    if r < 2:
        raise ValueError(f"disjoint_face_combinations needs r >= 2, got {r}")
    faces = K.faces()
    masks = _face_masks(faces)
    for idx in _disjoint_index_tuples(masks, r, ordered=False):
        yield tuple(faces[i] for i in idx)


@dataclass(frozen=True)
class DeletedProductStats:
    """Cell counts of the deleted product, grouped by total dimension."""

    cells_by_dim: tuple[tuple[int, int], ...]
    dimension: Optional[int]

    def as_dict(self) -> dict[int, int]:
        return dict(self.cells_by_dim)


def deleted_product_stats(K: SimplicialComplex, r: int) -> DeletedProductStats:
    """Counts of ordered disjoint tuples by sum of face dimensions."""
    counts: Counter[int] = Counter()
    for t in disjoint_tuples(K, r):
        counts[t.dim_sum] += 1
    if not counts:
        return DeletedProductStats(cells_by_dim=(), dimension=None)
    return DeletedProductStats(
        cells_by_dim=tuple(sorted(counts.items())),
        dimension=max(counts),
    )


def verify_free_action(K: SimplicialComplex, r: int) -> bool:
    """Check that no nontrivial coordinate permutation fixes any tuple.

    Pairwise disjoint nonempty faces are pairwise distinct, so this is
    always true; it is kept executable as a sanity check on the
    enumeration.
    """
    perms = [p for p in itertools.permutations(range(r)) if p != tuple(range(r))]
    for t in disjoint_tuples(K, r):
        for p in perms:
            if tuple(t.faces[p[i]] for i in range(r)) == t.faces:
                return False
    return True
