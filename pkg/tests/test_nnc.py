"""NNC polyhedra: strict constraints, closure points and the exact-join test."""

import random
from fractions import Fraction

import pytest

from exactjoin import oracles
from exactjoin.certify import verify_witness_point, witness_point
from exactjoin.core import Generator
from exactjoin.instances import random_polyhedron, random_polyhedron_pair
from exactjoin.nnc import NncPolyhedron, detect_exact_join_nnc, nnc_convert, topological_closure
from exactjoin.polyhedra import detect_exact_join_closed

from conftest import cons


def nnc(*texts, dim=2):
    return NncPolyhedron.from_constraints(cons(*texts, dim=dim), dim)


def point(*coords, dim=2):
    return NncPolyhedron.from_generators(dim, [coords])


STRIP = ("2 <= x1 < 4",)
OPEN_3 = ("0 < x1 < 3", "1 < x2 < 5")
OPEN_4 = ("3 < x1 < 6", "1 < x2 < 5")


class TestRepresentation:
    def test_half_open_strip(self):
        p = nnc(*STRIP)
        assert p.points == ((2, 0),)
        assert p.closure_points == ((4, 0),)
        assert set(p.rays) == {(0, 1), (0, -1)}

    def test_open_square(self):
        p = nnc("0 < x1 < 1", "0 < x2 < 1")
        assert len(p.points) == 1 and len(p.closure_points) == 4

    def test_membership(self):
        p = nnc(*STRIP)
        assert p.contains_point((Fraction(2), Fraction(7)))
        assert not p.contains_point((Fraction(4), Fraction(0)))
        assert p.closure_contains((Fraction(4), Fraction(0)))

    def test_from_generators(self):
        p = NncPolyhedron.from_generators(1, [(0,)], [(1,)])
        assert p == nnc("0 <= x1 < 1", dim=1)

    def test_convert_both_ways(self):
        pts, cps, rays = nnc_convert(cons("0 <= x1 < 1", dim=1), 1)
        assert (pts, cps, rays) == (((0,),), ((1,),), ())
        gens = [Generator.point((0,)), Generator.closure_point((1,))]
        assert set(nnc_convert(gens, 1)) == set(nnc("0 <= x1 < 1", dim=1).constraints)

    def test_closure(self):
        assert topological_closure(nnc(*OPEN_3)) == nnc("0 <= x1 <= 3", "1 <= x2 <= 5")

    def test_strictly_empty(self):
        assert nnc("x1 < 0", "x1 > 0", dim=1).is_empty
        assert nnc("x1 <= 0", "x1 > 0", dim=1).is_empty

    def test_round_trip_on_random_polyhedra(self):
        rng = random.Random(3)
        for _ in range(80):
            p = random_polyhedron(rng, rng.randint(1, 3), nnc=True)
            q = NncPolyhedron.from_generators(p.dim, p.points, p.closure_points, p.rays, p.lines)
            assert q == p

    def test_emptiness_matches_elimination(self):
        rng = random.Random(5)
        for _ in range(80):
            p = random_polyhedron(rng, rng.randint(1, 3), nnc=True)
            assert p.is_empty == oracles.fm_is_empty(list(p.constraints), p.dim)


class TestExactJoin:
    def test_strip_and_point_via_a_ray(self):
        a, b = nnc(*STRIP), point(4, 2)
        d = detect_exact_join_nnc(a, b)
        assert not d.exact
        w = d.witness
        assert (w.condition, w.first, str(w.beta), w.g) == (1, 0, "x1 < 4", Generator.ray((0, 1)))
        x = witness_point(a, b, w)
        assert verify_witness_point(a, b, x)

    def test_strip_gap_point(self):
        a, b = nnc(*STRIP), point(4, 2)
        p = (Fraction(4), Fraction(0))
        assert a.join(b).contains_point(p) and not a.contains_point(p) and not b.contains_point(p)

    def test_open_rectangles_sharing_an_open_side(self):
        a, b = nnc(*OPEN_3), nnc(*OPEN_4)
        d = detect_exact_join_nnc(a, b)
        assert not d.exact and d.witness.condition == 3
        assert verify_witness_point(a, b, witness_point(a, b, d.witness))

    def test_closing_the_side_makes_it_exact(self):
        a = nnc(*OPEN_3)
        b = nnc("3 <= x1 < 6", "1 < x2 < 5")
        assert detect_exact_join_nnc(a, b).exact

    def test_segment_meets_half_open_segment(self):
        a = nnc("0 < x1 <= 1", "x2 = 0")
        b = nnc("1 <= x1 < 2", "x2 = 0")
        assert detect_exact_join_nnc(a, b).exact

    def test_open_square_and_corner(self):
        # the hull adds the open edges next to the corner
        a, b = nnc("0 < x1 < 1", "0 < x2 < 1"), point(1, 1)
        assert not detect_exact_join_nnc(a, b).exact

    def test_exhaustive_lists_every_witness(self):
        a, b = nnc(*OPEN_3), nnc(*OPEN_4)
        d = detect_exact_join_nnc(a, b, exhaustive=True)
        assert isinstance(d.witness, list) and len(d.witness) >= 1

    def test_closed_operands_agree_with_the_closed_test(self):
        rng = random.Random(7)
        from exactjoin.instances import random_polyhedron_pair as pair

        for _ in range(80):
            a, b = pair(rng, rng.randint(1, 3))
            na, nb = NncPolyhedron.from_closed(a), NncPolyhedron.from_closed(b)
            assert detect_exact_join_nnc(na, nb).exact == detect_exact_join_closed(a, b).exact

    @pytest.mark.parametrize("seed", [11, 13])
    def test_agrees_with_complement_inclusion(self, seed):
        rng = random.Random(seed)
        for _ in range(60):
            a, b = random_polyhedron_pair(rng, rng.randint(1, 3), nnc=True)
            d = detect_exact_join_nnc(a, b)
            exact = oracles.complement_inclusion(list(a.join(b).constraints), list(a.constraints), list(b.constraints), a.dim)
            assert d.exact == exact
            if not d.exact:
                assert verify_witness_point(a, b, witness_point(a, b, d.witness))
