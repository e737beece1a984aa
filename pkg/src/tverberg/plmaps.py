"""Simplexwise-linear maps over exact rationals and the r-fold checker.

A PLMap assigns a rational point of R^d to every vertex; faces map by
affine extension.  Whether r pairwise vertex-disjoint faces have images
with a common point is exactly the feasibility of a small linear
program (barycentric weights per face, convexity rows, and equality of
the r affine combinations), which is decided by a phase-one simplex
with Bland's rule.  The tableau is kept integral via Edmonds-style
integer pivoting, so every verdict is exact and every reported witness
carries rational barycentric coordinates that reproduce the common
point identically.

The checker enumerates unordered disjoint tuples (the intersection
condition is symmetric, an r!-fold saving) in the deterministic face
order of :mod:`tverberg.complexes`, so the reported witness is the
lexicographically first failing tuple.
"""

from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Sequence

from .complexes import DisjointTuple, SimplicialComplex, disjoint_face_combinations, join_complexes

__all__ = [
    "PLMap",
    "IntersectionPoint",
    "IntersectionWitness",
    "CheckVerdict",
    "constant_map",
    "join_maps",
    "random_rational_map",
    "simplices_intersect",
    "almost_r_embedding_check",
    "in_general_position",
]

Point = tuple[Fraction, ...]


def _as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    raise TypeError(f"expected exact rational data, got {type(x).__name__}: {x!r}")


@dataclass(frozen=True)
class PLMap:
    """Simplexwise-linear map of a complex into R^d with rational vertex images."""

    complex: SimplicialComplex
    d: int
    coords: tuple[Point, ...]

    def __post_init__(self):
        if self.d < 0:
            raise ValueError("target dimension must be nonnegative")
        coords = tuple(tuple(_as_fraction(x) for x in pt) for pt in self.coords)
        if len(coords) != self.complex.num_vertices:
            raise ValueError(
                f"need one point per vertex: {self.complex.num_vertices} vertices, "
                f"{len(coords)} points"
            )
        for pt in coords:
            if len(pt) != self.d:
                raise ValueError(f"point {pt} does not lie in R^{self.d}")
        object.__setattr__(self, "coords", coords)

    def eval(self, face: Sequence[int], weights: Sequence) -> Point:
        """Affine combination sum w_j * image(v_j) over the face's vertices.

        Weights are indexed by the face in its sorted vertex order and
        must be nonnegative rationals summing to 1.
        """
        face = tuple(face)
        if not self.complex.has_face(face):
            raise ValueError(f"{face} is not a face of the complex")
        w = [_as_fraction(x) for x in weights]
        if len(w) != len(face):
            raise ValueError("one weight per face vertex required")
        if any(x < 0 for x in w) or sum(w) != 1:
            raise ValueError("weights must be nonnegative and sum to 1 exactly")
        out = [Fraction(0)] * self.d
        for wi, v in zip(w, face):
            for ell in range(self.d):
                out[ell] += wi * self.coords[v][ell]
        return tuple(out)

    def to_json(self) -> dict:
        return {
            "d": self.d,
            "coords": {str(v): [str(x) for x in pt] for v, pt in enumerate(self.coords)},
        }

    @classmethod
    def from_json(cls, complex: SimplicialComplex, obj: dict) -> "PLMap":
        d = int(obj["d"])
        coords = [()] * complex.num_vertices
        for key, vals in obj["coords"].items():
            coords[int(key)] = tuple(Fraction(s) for s in vals)
        return cls(complex, d, tuple(coords))


def constant_map(n: int, d: int = 0) -> PLMap:
    """The full n-simplex collapsed to the origin of R^d (default R^0)."""
    if n < 0:
        raise ValueError("simplex dimension must be nonnegative")
    K = SimplicialComplex(n + 1, (tuple(range(n + 1)),))
    origin = tuple(Fraction(0) for _ in range(d))
    return PLMap(K, d, tuple(origin for _ in range(n + 1)))


def join_maps(f: PLMap, g: PLMap) -> PLMap:
    """Join of maps: first factor lands in (R^p, 0, 0), second in (0, R^q, 1).

    On the joined simplex with weights lam on the K-part and mu on the
    L-part (lam + mu = 1), the affine extension takes the value
    (lam*f(x), mu*g(y), mu), which realizes the join formula with the
    last coordinate recording mu.
    """
    K = join_complexes(f.complex, g.complex)
    d = f.d + g.d + 1
    zf = tuple(Fraction(0) for _ in range(f.d))
    zg = tuple(Fraction(0) for _ in range(g.d))
    coords = [pt + zg + (Fraction(0),) for pt in f.coords]
    coords += [zf + pt + (Fraction(1),) for pt in g.coords]
    return PLMap(K, d, tuple(coords))


def _affinely_independent(points: Sequence[Point]) -> bool:
    if len(points) <= 1:
        return True
    base = points[0]
    rows = [[p[ell] - base[ell] for ell in range(len(base))] for p in points[1:]]
    # exact rank by fraction-free elimination
    rank = 0
    ncols = len(base)
    col = 0
    while rank < len(rows) and col < ncols:
        piv = None
        for i in range(rank, len(rows)):
            if rows[i][col] != 0:
                piv = i
                break
        if piv is None:
            col += 1
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        pv = rows[rank][col]
        for i in range(rank + 1, len(rows)):
            factor = rows[i][col] / pv
            if factor:
                rows[i] = [a - factor * b for a, b in zip(rows[i], rows[rank])]
        rank += 1
        col += 1
    return rank == len(rows)


def in_general_position(f: PLMap) -> bool:
    """No d+1 of the vertex images are affinely dependent.

    Dependence is inherited by supersets, so checking all (d+1)-subsets
    covers every smaller subset as well.
    """
    pts = f.coords
    size = min(len(pts), f.d + 1)
    return all(
        _affinely_independent([pts[i] for i in sub])
        for sub in itertools.combinations(range(len(pts)), size)
    )


def random_rational_map(K: SimplicialComplex, d: int, seed: int, span: int = 4,
                        denominator: int = 4096) -> PLMap:
    """Seeded random map with bounded rational coordinates.

    Coordinates are n/denominator with |n| <= span*denominator, drawn
    from the stdlib Mersenne Twister (stable across platforms for a
    fixed seed).  For complexes on at most 12 vertices the draw is
    rejected until the images are in general position.
    """
    rng = random.Random(seed)
    lim = span * denominator
    while True:
        coords = tuple(
            tuple(Fraction(rng.randint(-lim, lim), denominator) for _ in range(d))
            for _ in range(K.num_vertices)
        )
        f = PLMap(K, d, coords)
        if K.num_vertices > 12 or in_general_position(f):
            return f


# ---------------------------------------------------------------------------
# Exact feasibility core
# ---------------------------------------------------------------------------

def _phase_one(A: list[list[int]], b: list[int]) -> Optional[list[Fraction]]:
    """Feasible x >= 0 with A x = b over the integers, or None.

    Phase-one simplex with Bland's rule (smallest eligible index enters;
    ties in the ratio test break toward the smallest basic index), so
    termination is guaranteed.  The tableau stays integral via integer
    pivoting: after a pivot on (p, q) every other row transforms as
    (T[i][j]*piv - T[i][q]*T[p][j]) / det with exact division by the
    previous pivot.
    """
    m = len(A)
    n = len(A[0]) if m else 0
    T: list[list[int]] = []
    for i in range(m):
        row = list(A[i])
        rhs = b[i]
        if rhs < 0:
            row = [-v for v in row]
            rhs = -rhs
        art = [0] * m
        art[i] = 1
        T.append(row + art + [rhs])
    obj = [-sum(T[i][j] for i in range(m)) for j in range(n)]
    obj += [0] * m
    obj.append(-sum(T[i][-1] for i in range(m)))
    T.append(obj)

    ncols = n + m
    det = 1
    basis = list(range(n, n + m))
    while True:
        objrow = T[m]
        q = -1
        for j in range(ncols):
            if objrow[j] < 0:
                q = j
                break
        if q < 0:
            break
        p = -1
        bn = bd = 0
        for i in range(m):
            v = T[i][q]
            if v > 0:
                num = T[i][-1]
                if p < 0 or num * bd < bn * v or (num * bd == bn * v and basis[i] < basis[p]):
                    p, bn, bd = i, num, v
        if p < 0:
            raise AssertionError("phase-one objective is bounded; no pivot row found")
        piv = T[p][q]
        Tp = T[p]
        for i in range(m + 1):
            if i == p:
                continue
            Ti = T[i]
            tiq = Ti[q]
            if tiq:
                T[i] = [(a * piv - tiq * c) // det for a, c in zip(Ti, Tp)]
            elif piv != det:
                T[i] = [(a * piv) // det for a in Ti]
        det = piv
        basis[p] = q

    if T[m][-1] != 0:
        return None
    x = [Fraction(0)] * n
    for i in range(m):
        if basis[i] < n:
            x[basis[i]] = Fraction(T[i][-1], det)
    return x


@dataclass(frozen=True)
class IntersectionPoint:
    """A common point of r convex hulls with exact convex weights per hull."""

    point: Point
    barycentric: tuple[tuple[Fraction, ...], ...]


def simplices_intersect(point_sets: Sequence[Sequence[Point]], d: int) -> Optional[IntersectionPoint]:
    """Common point of the convex hulls of r rational point sets, or None.

    Decided by exact LP feasibility; the returned weights reproduce the
    point identically for every hull.
    """
    r = len(point_sets)
    if r < 2:
        raise ValueError(f"need at least 2 point sets, got {r}")
    sets = [[tuple(_as_fraction(x) for x in p) for p in ps] for ps in point_sets]
    for ps in sets:
        if not ps:
            raise ValueError("every point set must be nonempty")
        for p in ps:
            if len(p) != d:
                raise ValueError(f"point {p} does not lie in R^{d}")

    denom = 1
    for ps in sets:
        for p in ps:
            for x in p:
                denom = denom * x.denominator // math.gcd(denom, x.denominator)
    scaled = [[[int(x * denom) for x in p] for p in ps] for ps in sets]

    sizes = [len(ps) for ps in sets]
    offsets = [0]
    for s in sizes:
        offsets.append(offsets[-1] + s)
    nvars = offsets[-1]

    A: list[list[int]] = []
    b: list[int] = []
    for i in range(r):
        row = [0] * nvars
        for j in range(sizes[i]):
            row[offsets[i] + j] = 1
        A.append(row)
        b.append(1)
    for i in range(1, r):
        for ell in range(d):
            row = [0] * nvars
            for j in range(sizes[0]):
                row[offsets[0] + j] = -scaled[0][j][ell]
            for j in range(sizes[i]):
                row[offsets[i] + j] = scaled[i][j][ell]
            A.append(row)
            b.append(0)

    x = _phase_one(A, b)
    if x is None:
        return None
    barys = tuple(
        tuple(x[offsets[i] + j] for j in range(sizes[i])) for i in range(r)
    )
    point = tuple(
        sum((w * sets[0][j][ell] for j, w in enumerate(barys[0])), Fraction(0))
        for ell in range(d)
    )
    for i in range(1, r):
        other = tuple(
            sum((w * sets[i][j][ell] for j, w in enumerate(barys[i])), Fraction(0))
            for ell in range(d)
        )
        if other != point:
            raise AssertionError("LP solution does not reproduce a common point")
    return IntersectionPoint(point=point, barycentric=barys)


# ---------------------------------------------------------------------------
# The checker
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class IntersectionWitness:
    """A disjoint tuple whose images share a point, with exact evidence."""

    tuple_: DisjointTuple
    point: Point
    barycentric: tuple[tuple[Fraction, ...], ...]

    def verify(self, f: PLMap) -> None:
        """Re-check every invariant by plain rational arithmetic."""
        for face, w in zip(self.tuple_.faces, self.barycentric):
            if len(w) != len(face):
                raise ValueError("weight count mismatch")
            if any(x < 0 for x in w):
                raise ValueError("negative barycentric weight")
            if sum(w) != 1:
                raise ValueError("barycentric weights do not sum to 1")
            combo = [Fraction(0)] * f.d
            for wi, v in zip(w, face):
                for ell in range(f.d):
                    combo[ell] += wi * f.coords[v][ell]
            if tuple(combo) != self.point:
                raise ValueError(f"face {face} does not reach the witness point")

    def to_json(self) -> dict:
        return {
            "faces": [list(face) for face in self.tuple_.faces],
            "point": [str(x) for x in self.point],
            "barycentric": [[str(x) for x in w] for w in self.barycentric],
        }


@dataclass(frozen=True)
class CheckVerdict:
    passed: bool
    witness: Optional[IntersectionWitness]
    tuples_checked: int


def _bbox(points: Sequence[Point], d: int) -> tuple[Point, Point]:
    lo = tuple(min(p[ell] for p in points) for ell in range(d))
    hi = tuple(max(p[ell] for p in points) for ell in range(d))
    return lo, hi


def _boxes_meet(boxes: Sequence[tuple[Point, Point]], d: int) -> bool:
    for ell in range(d):
        if max(b[0][ell] for b in boxes) > min(b[1][ell] for b in boxes):
            return False
    return True


def _is_maximal_tuple(K: SimplicialComplex, faces: tuple[tuple[int, ...], ...]) -> bool:
    used = set()
    for f in faces:
        used |= set(f)
    free = [v for v in range(K.num_vertices) if v not in used]
    for f in faces:
        for v in free:
            if K.has_face(tuple(sorted(f + (v,)))):
                return False
    return True


def _scan(f: PLMap, combos: Iterable[tuple[int, tuple[tuple[int, ...], ...]]],
          boxes: dict[tuple[int, ...], tuple[Point, Point]]) -> tuple[int, Optional[tuple]]:
    checked = 0
    for pos, faces in combos:
        checked += 1
        if not _boxes_meet([boxes[face] for face in faces], f.d):
            continue
        point_sets = [[f.coords[v] for v in face] for face in faces]
        hit = simplices_intersect(point_sets, f.d)
        if hit is not None:
            return checked, (pos, faces, hit)
    return checked, None


def _scan_chunk(args):
    f, chunk = args
    faces_seen = {face for _, faces in chunk for face in faces}
    boxes = {face: _bbox([f.coords[v] for v in face], f.d) for face in faces_seen}
    _, found = _scan(f, chunk, boxes)
    return found


def almost_r_embedding_check(f: PLMap, r: int, maximal_only: bool = False,
                             workers: int = 1) -> CheckVerdict:
    """Decide whether f is an almost r-embedding, exactly.

    Passes iff no r pairwise vertex-disjoint faces have intersecting
    images.  On failure the witness is the first failing tuple in the
    deterministic enumeration order (one representative per unordered
    tuple; the condition is symmetric).  With maximal_only=True only
    inclusion-maximal disjoint tuples are tested, which is equivalent
    because an intersection of subfaces persists on superfaces.
    """
    if r < 2:
        raise ValueError(f"almost_r_embedding_check needs r >= 2, got {r}")
    combos = enumerate(disjoint_face_combinations(f.complex, r))
    if maximal_only:
        combos = ((pos, faces) for pos, faces in combos
                  if _is_maximal_tuple(f.complex, faces))

    if workers > 1:
        return _check_parallel(f, list(combos), workers)

    boxes = {face: _bbox([f.coords[v] for v in face], f.d) for face in f.complex.faces()}
    checked, found = _scan(f, combos, boxes)
    if found is None:
        return CheckVerdict(passed=True, witness=None, tuples_checked=checked)
    _, faces, hit = found
    witness = IntersectionWitness(
        tuple_=DisjointTuple(faces), point=hit.point, barycentric=hit.barycentric
    )
    witness.verify(f)
    return CheckVerdict(passed=False, witness=witness, tuples_checked=checked)


def _check_parallel(f: PLMap, combos: list, workers: int) -> CheckVerdict:
    """Split the tuple list into chunks; merge to the enumeration-first hit."""
    from concurrent.futures import ProcessPoolExecutor

    chunk_size = max(1, (len(combos) + workers - 1) // workers)
    chunks = [combos[i:i + chunk_size] for i in range(0, len(combos), chunk_size)]
    best = None
    with ProcessPoolExecutor(max_workers=workers) as pool:
        for found in pool.map(_scan_chunk, [(f, ch) for ch in chunks]):
            if found is not None and (best is None or found[0] < best[0]):
                best = found
    if best is None:
        return CheckVerdict(passed=True, witness=None, tuples_checked=len(combos))
    _, faces, hit = best
    witness = IntersectionWitness(
        tuple_=DisjointTuple(faces), point=hit.point, barycentric=hit.barycentric
    )
    witness.verify(f)
    return CheckVerdict(passed=False, witness=witness, tuples_checked=len(combos))
