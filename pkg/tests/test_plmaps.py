import itertools
from fractions import Fraction as F

import pytest

from tverberg.complexes import SimplicialComplex, simplex_skeleton
from tverberg.plmaps import (
    CheckVerdict,
    IntersectionWitness,
    PLMap,
    almost_r_embedding_check,
    constant_map,
    in_general_position,
    join_maps,
    random_rational_map,
    simplices_intersect,
)

# ---------------------------------------------------------------------------
# Oracles (independent of the LP path)
# ---------------------------------------------------------------------------

def orient(p, q, r):
    """Sign of the signed area of the triangle p q r, exactly."""
    val = (q[0] - p[0]) * (r[1] - p[1]) - (q[1] - p[1]) * (r[0] - p[0])
    return (val > 0) - (val < 0)


def segments_cross(p, q, r, s):
    """Exact proper-or-touching intersection test for segments pq and rs."""
    d1 = orient(r, s, p)
    d2 = orient(r, s, q)
    d3 = orient(p, q, r)
    d4 = orient(p, q, s)
    if d1 != d2 and d3 != d4:
        return True

    def on_segment(a, b, c):
        return (
            orient(a, b, c) == 0
            and min(a[0], b[0]) <= c[0] <= max(a[0], b[0])
            and min(a[1], b[1]) <= c[1] <= max(a[1], b[1])
        )

    return (
        on_segment(r, s, p) or on_segment(r, s, q)
        or on_segment(p, q, r) or on_segment(p, q, s)
    )


def point_in_triangle(p, a, b, c):
    signs = {orient(a, b, p), orient(b, c, p), orient(c, a, p)}
    return not ({1, -1} <= signs)


def square_map():
    K = simplex_skeleton(3, 3)
    pts = ((F(0), F(0)), (F(1), F(0)), (F(0), F(1)), (F(1), F(1)))
    return PLMap(K, 2, pts)


def unit_triangle_map():
    K = simplex_skeleton(2, 2)
    return PLMap(K, 2, ((F(0), F(0)), (F(1), F(0)), (F(0), F(1))))


# ---------------------------------------------------------------------------
# PLMap basics
# ---------------------------------------------------------------------------

class TestPLMap:
    def test_eval_vertex(self):
        f = unit_triangle_map()
        assert f.eval((1,), (1,)) == (F(1), F(0))

    def test_eval_midpoint(self):
        f = unit_triangle_map()
        assert f.eval((0, 1), (F(1, 2), F(1, 2))) == (F(1, 2), F(0))

    def test_eval_centroid(self):
        f = unit_triangle_map()
        w = (F(1, 3), F(1, 3), F(1, 3))
        assert f.eval((0, 1, 2), w) == (F(1, 3), F(1, 3))

    def test_eval_validation(self):
        f = unit_triangle_map()
        with pytest.raises(ValueError):
            f.eval((0, 1), (F(1, 2), F(1, 4)))  # does not sum to 1
        with pytest.raises(ValueError):
            f.eval((0, 1), (F(3, 2), F(-1, 2)))  # negative weight
        with pytest.raises(ValueError):
            f.eval((0, 3), (F(1, 2), F(1, 2)))  # not a face

    def test_rejects_float_coordinates(self):
        K = simplex_skeleton(0, 0)
        with pytest.raises(TypeError):
            PLMap(K, 1, ((0.5,),))

    def test_json_round_trip(self):
        f = square_map()
        obj = f.to_json()
        assert obj["coords"]["0"] == ["0", "0"]
        assert PLMap.from_json(f.complex, obj) == f


class TestConstantMap:
    def test_point(self):
        f = constant_map(0)
        assert f.d == 0 and f.coords == ((),)

    def test_vacuous_almost_6_embedding(self):
        # 5 vertices cannot host 6 disjoint nonempty faces
        f = constant_map(4)
        assert almost_r_embedding_check(f, 6).passed is True

    def test_edge_to_point_fails_r2(self):
        f = constant_map(1)
        verdict = almost_r_embedding_check(f, 2)
        assert verdict.passed is False
        assert verdict.witness.tuple_.faces == ((0,), (1,))


class TestJoinMaps:
    def test_point_join_point(self):
        f = constant_map(0, d=0)
        j = join_maps(f, f)
        assert j.d == 1
        assert j.coords == ((F(0),), (F(1),))

    def test_identity_segment_join_point(self):
        K = simplex_skeleton(1, 1)
        seg = PLMap(K, 1, ((F(0),), (F(1),)))
        assert almost_r_embedding_check(seg, 2).passed
        j = join_maps(seg, constant_map(0))
        assert j.complex == simplex_skeleton(2, 2) and j.d == 2
        assert almost_r_embedding_check(j, 2).passed

    def test_join_of_almost_2_embeddings(self):
        f = unit_triangle_map()
        g = unit_triangle_map()
        assert almost_r_embedding_check(f, 2).passed
        j = join_maps(f, g)
        assert j.complex == simplex_skeleton(5, 5) and j.d == 5
        assert almost_r_embedding_check(j, 2).passed


# ---------------------------------------------------------------------------
# Exact intersection decisions
# ---------------------------------------------------------------------------

class TestSimplicesIntersect:
    def test_crossing_segments(self):
        hit = simplices_intersect(
            [[(F(0), F(0)), (F(1), F(1))], [(F(1), F(0)), (F(0), F(1))]], 2
        )
        assert hit.point == (F(1, 2), F(1, 2))

    def test_separated_triangles(self):
        tri = [(F(0), F(0)), (F(1), F(0)), (F(0), F(1))]
        far = [(x + 10, y) for x, y in tri]
        assert simplices_intersect([tri, far], 2) is None

    def test_three_segments_through_origin(self):
        sets = [
            [(F(1), F(0)), (F(-1), F(0))],
            [(F(1), F(2)), (F(-1), F(-2))],
            [(F(-1), F(2)), (F(1), F(-2))],
        ]
        hit = simplices_intersect(sets, 2)
        assert hit.point == (F(0), F(0))
        for w in hit.barycentric:
            assert sum(w) == 1 and all(x >= 0 for x in w)

    def test_zero_dimensional_target(self):
        hit = simplices_intersect([[()], [(), ()]], 0)
        assert hit.point == ()

    def test_dimension_mismatch(self):
        with pytest.raises(ValueError):
            simplices_intersect([[(F(0),)], [(F(0), F(0))]], 1)
        with pytest.raises(ValueError):
            simplices_intersect([[(F(0),)]], 1)

    def test_touching_hulls(self):
        # shared endpoint counts as intersection
        hit = simplices_intersect(
            [[(F(0), F(0)), (F(1), F(0))], [(F(1), F(0)), (F(2), F(5))]], 2
        )
        assert hit.point == (F(1), F(0))


# ---------------------------------------------------------------------------
# The checker
# ---------------------------------------------------------------------------

class TestChecker:
    def test_radon_square(self):
        verdict = almost_r_embedding_check(square_map(), 2)
        assert verdict.passed is False
        assert verdict.witness.tuple_.faces == ((0, 3), (1, 2))
        assert verdict.witness.point == (F(1, 2), F(1, 2))
        verdict.witness.verify(square_map())

    def test_unit_triangle_passes(self):
        assert almost_r_embedding_check(unit_triangle_map(), 2).passed

    def test_witness_soundness_recheck(self):
        verdict = almost_r_embedding_check(square_map(), 2)
        w = verdict.witness
        # independent recomputation of both affine combinations
        for face, weights in zip(w.tuple_.faces, w.barycentric):
            pt = [F(0), F(0)]
            for wi, v in zip(weights, face):
                pt[0] += wi * square_map().coords[v][0]
                pt[1] += wi * square_map().coords[v][1]
            assert tuple(pt) == w.point

    def test_k5_crossing_matches_segment_oracle(self):
        K5 = simplex_skeleton(4, 1)
        for seed in range(8):
            f = random_rational_map(K5, 2, seed)
            verdict = almost_r_embedding_check(f, 2)
            assert verdict.passed is False
            faces = verdict.witness.tuple_.faces
            assert all(len(face) == 2 for face in faces)
            e1, e2 = faces
            pts = f.coords
            assert segments_cross(pts[e1[0]], pts[e1[1]], pts[e2[0]], pts[e2[1]])
            # and the oracle agrees some disjoint pair crosses
            edges = [face for face in K5.faces() if len(face) == 2]
            crossing = [
                (a, b)
                for a, b in itertools.combinations(edges, 2)
                if not set(a) & set(b)
                and segments_cross(pts[a[0]], pts[a[1]], pts[b[0]], pts[b[1]])
            ]
            assert (e1, e2) in crossing or (e2, e1) in crossing

    def test_radon_oracle_sample(self):
        K = simplex_skeleton(3, 3)
        for seed in range(12):
            f = random_rational_map(K, 2, seed)
            verdict = almost_r_embedding_check(f, 2)
            assert verdict.passed is False
            verdict.witness.verify(f)

    def test_tverberg_r3_sample(self):
        K = simplex_skeleton(6, 6)
        for seed in (0, 1):
            f = random_rational_map(K, 2, seed)
            verdict = almost_r_embedding_check(f, 3)
            assert verdict.passed is False
            verdict.witness.verify(f)

    def test_tuple_monotonicity(self):
        # v3 inside the big triangle; supersets of the witness still fail
        K = simplex_skeleton(4, 4)
        pts = (
            (F(0), F(0)), (F(4), F(0)), (F(0), F(4)), (F(1), F(1)), (F(2), F(9)),
        )
        f = PLMap(K, 2, pts)
        base = [[pts[3]], [pts[0], pts[1], pts[2]]]
        assert simplices_intersect(base, 2) is not None
        bigger = [[pts[3], pts[4]], [pts[0], pts[1], pts[2]]]
        assert simplices_intersect(bigger, 2) is not None
        verdict = almost_r_embedding_check(f, 2)
        assert verdict.passed is False

    def test_affine_invariance(self):
        f = square_map()
        # x -> A x + b with A = [[2, 1], [1, 1]], b = (3, 5)
        def T(p):
            return (2 * p[0] + p[1] + 3, p[0] + p[1] + 5)

        g = PLMap(f.complex, 2, tuple(T(p) for p in f.coords))
        vf = almost_r_embedding_check(f, 2)
        vg = almost_r_embedding_check(g, 2)
        assert vf.passed == vg.passed is False
        assert vf.witness.tuple_.faces == vg.witness.tuple_.faces
        assert vg.witness.point == T(vf.witness.point)

    def test_maximal_only_mode_agrees(self):
        for seed in range(4):
            f = random_rational_map(simplex_skeleton(3, 3), 2, seed)
            full = almost_r_embedding_check(f, 2)
            pruned = almost_r_embedding_check(f, 2, maximal_only=True)
            assert full.passed == pruned.passed
            if not pruned.passed:
                pruned.witness.verify(f)
        g = unit_triangle_map()
        assert almost_r_embedding_check(g, 2, maximal_only=True).passed

    def test_parallel_matches_sequential(self):
        f = square_map()
        seq = almost_r_embedding_check(f, 2)
        par = almost_r_embedding_check(f, 2, workers=2)
        assert par.passed == seq.passed is False
        assert par.witness.tuple_.faces == seq.witness.tuple_.faces
        assert par.witness.point == seq.witness.point

    def test_empty_tuple_set_passes(self):
        f = constant_map(1)
        assert almost_r_embedding_check(f, 4).passed is True

    def test_witness_json(self):
        verdict = almost_r_embedding_check(square_map(), 2)
        obj = verdict.witness.to_json()
        assert obj["faces"] == [[0, 3], [1, 2]]
        assert obj["point"] == ["1/2", "1/2"]
        assert all(isinstance(s, str) for row in obj["barycentric"] for s in row)


class TestRandomMaps:
    def test_determinism(self):
        K = simplex_skeleton(4, 1)
        a = random_rational_map(K, 2, 1)
        b = random_rational_map(K, 2, 1)
        c = random_rational_map(K, 2, 2)
        assert a == b and a != c

    def test_general_position(self):
        for seed in range(6):
            f = random_rational_map(simplex_skeleton(4, 1), 2, seed)
            assert in_general_position(f)

    def test_bounded_rationals(self):
        f = random_rational_map(simplex_skeleton(4, 1), 2, 7)
        for pt in f.coords:
            for x in pt:
                assert abs(x) <= 4 and x.denominator <= 4096
