"""Closed polyhedra: double description conversion and the exact-join test."""

import random
from fractions import Fraction

import pytest

from exactjoin import oracles
from exactjoin.certify import verify_witness_point, witness_point
from exactjoin.core import Generator, satisfies_all
from exactjoin.dd import cone_constraints, cone_generators, idot, primitive
from exactjoin.instances import random_generator_polytope, random_polyhedron, random_polyhedron_pair
from exactjoin.polyhedra import CPolyhedron, convert, detect_exact_join_closed

from conftest import cons

P1 = ("x1 >= 0", "x2 >= 0", "x1 + x2 <= 2")
P2 = ("x1 <= 2", "x2 >= 0", "x1 - x2 >= 0")


def poly(*texts, dim=2):
    return CPolyhedron.from_constraints(cons(*texts, dim=dim), dim)


class TestConeConversion:
    def test_primitive(self):
        assert primitive((4, -6, 0)) == (2, -3, 0)

    def test_nonnegative_orthant(self):
        rays, lines = cone_generators(2, [((1, 0), False), ((0, 1), False)])
        assert sorted(rays) == [(0, 1), (1, 0)] and lines == []

    def test_half_plane_has_a_line(self):
        rays, lines = cone_generators(2, [((1, 0), False)])
        assert rays == [(1, 0)] and len(lines) == 1 and idot(lines[0], (1, 0)) == 0

    def test_generators_back_to_constraints(self):
        ineqs, eqs = cone_constraints(2, [(1, 0), (0, 1)], [])
        assert sorted(ineqs) == [(0, 1), (1, 0)] and eqs == []


class TestConversion:
    def test_triangle_vertices(self):
        assert poly(*P1).points == ((0, 0), (0, 2), (2, 0))

    def test_generators_to_constraints(self):
        gens = [Generator.point(p) for p in [(0, 0), (2, 0), (0, 2)]]
        assert set(convert(gens, 2)) == set(poly(*P1).constraints)

    def test_unbounded(self):
        p = poly("x1 >= 0", "x2 >= 0")
        assert p.points == ((0, 0),) and set(p.rays) == {(0, 1), (1, 0)}

    def test_line(self):
        p = poly("x2 = 1")
        assert p.lines == ((1, 0),) and p.points == ((0, 1),)

    def test_empty(self):
        p = poly("x1 >= 1", "x1 <= 0")
        assert p.is_empty and p == CPolyhedron.empty(2)

    def test_redundant_constraints_are_dropped(self):
        p = poly(*P1, "x1 <= 5", "x1 + x2 <= 3")
        assert len(p.constraints) == 3

    def test_strict_rejected(self):
        with pytest.raises(ValueError):
            poly("x1 < 1")

    def test_round_trip_on_random_polyhedra(self):
        rng = random.Random(3)
        for _ in range(100):
            p = random_polyhedron(rng, rng.randint(1, 3))
            q = CPolyhedron.from_generators(p.dim, p.points, p.rays, p.lines)
            assert q == p
            assert CPolyhedron.from_constraints(q.constraints, p.dim) == p

    def test_vertices_satisfy_the_constraints(self):
        rng = random.Random(5)
        for _ in range(60):
            p = random_generator_polytope(rng, rng.randint(1, 3))
            for v in p.points:
                assert satisfies_all(v, p.constraints)

    def test_emptiness_matches_elimination(self):
        rng = random.Random(7)
        for _ in range(100):
            p = random_polyhedron(rng, rng.randint(1, 3), max_constraints=6)
            assert p.is_empty == oracles.fm_is_empty(list(p.constraints), p.dim)


class TestLattice:
    def test_join_of_the_triangles(self):
        assert poly(*P1).join(poly(*P2)) == poly("0 <= x1 <= 2", "0 <= x2 <= 2")

    def test_meet(self):
        assert poly(*P1).meet(poly(*P2)) == poly("x1 + x2 <= 2", "x2 >= 0", "x1 - x2 >= 0")

    def test_inclusion(self):
        assert poly("0 <= x1 <= 2", "0 <= x2 <= 2").includes(poly(*P1))
        assert not poly(*P1).includes(poly(*P2))


class TestExactJoin:
    def test_triangles_with_a_square_join(self):
        a, b = poly(*P1), poly(*P2)
        d = detect_exact_join_closed(a, b)
        assert not d.exact
        assert str(d.witness.beta) == "x1 + x2 <= 2"
        assert d.witness.g == Generator.point((0, 2))
        x = witness_point(a, b, d.witness)
        assert verify_witness_point(a, b, x)

    def test_gap_point(self):
        a, b = poly(*P1), poly(*P2)
        p = (Fraction(1), Fraction(2))
        assert a.join(b).contains_point(p) and not a.contains_point(p) and not b.contains_point(p)

    def test_square_centre_is_covered(self):
        # (1, 1) lies on the boundary of both triangles, so it is not a gap point
        p = (Fraction(1), Fraction(1))
        assert poly(*P1).contains_point(p) and poly(*P2).contains_point(p)

    def test_square_halves_are_exact(self):
        a = poly("0 <= x1 <= 1", "0 <= x2 <= 2")
        b = poly("1 <= x1 <= 2", "0 <= x2 <= 2")
        assert detect_exact_join_closed(a, b).exact

    def test_identical(self):
        assert detect_exact_join_closed(poly(*P1), poly(*P1)).exact

    def test_agrees_with_complement_inclusion(self):
        rng = random.Random(11)
        for _ in range(80):
            a, b = random_polyhedron_pair(rng, rng.randint(1, 3))
            d = detect_exact_join_closed(a, b)
            exact = oracles.complement_inclusion(list(a.join(b).constraints), list(a.constraints), list(b.constraints), a.dim)
            assert d.exact == exact
            if not d.exact:
                assert verify_witness_point(a, b, witness_point(a, b, d.witness))
