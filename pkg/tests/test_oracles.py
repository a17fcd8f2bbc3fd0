"""The independent oracles: elimination, covering, template joins, grids."""

import random
from fractions import Fraction

import pytest

from exactjoin import oracles
from exactjoin.core import INF
from exactjoin.polyhedra import CPolyhedron

from conftest import cons


class TestElimination:
    @pytest.mark.parametrize(
        "texts, dim, empty",
        [
            (("x1 <= 0", "x1 >= 1"), 1, True),
            (("x1 <= 0", "x1 >= 0"), 1, False),
            (("x1 < 0", "x1 >= 0"), 1, True),
            (("x1 + x2 <= 1", "x1 >= 1", "x2 > 0"), 2, True),
            (("x1 + x2 <= 1", "x1 >= 1", "x2 >= 0"), 2, False),
            (("x1 - x2 = 0", "x1 + x2 = 2", "x1 > 1"), 2, True),
        ],
    )
    def test_emptiness(self, texts, dim, empty):
        assert oracles.fm_is_empty(cons(*texts, dim=dim), dim) is empty

    def test_sup(self):
        cs = cons("x1 >= 0", "x2 >= 0", "x1 + x2 <= 2", dim=2)
        assert oracles.fm_sup(cs, [Fraction(1), Fraction(2)]) == 4
        assert oracles.fm_sup(cs, [Fraction(-1), Fraction(0)]) == 0

    def test_sup_unbounded_and_empty(self):
        assert oracles.fm_sup(cons("x1 >= 0", dim=1), [Fraction(1)]) == INF
        assert oracles.fm_sup(cons("x1 >= 1", "x1 <= 0", dim=1), [Fraction(1)]) is None

    def test_sup_matches_vertex_enumeration(self):
        # the supremum is attained at a vertex unless some ray increases the form
        rng = random.Random(3)
        from exactjoin.instances import random_generator_polytope

        for _ in range(60):
            p = random_generator_polytope(rng, rng.randint(1, 3))
            form = [Fraction(rng.randint(-3, 3)) for _ in range(p.dim)]
            best = max(sum(a * x for a, x in zip(form, v)) for v in p.points)
            if any(sum(a * x for a, x in zip(form, r)) > 0 for r in p.rays):
                best = INF
            assert oracles.fm_sup(list(p.constraints), form) == best

    def test_bounding_box(self):
        cs = cons("x1 >= 0", "x2 >= 0", "x1 + x2 <= 2", dim=2)
        assert oracles.bounding_box(cs, 2) == [(0, 2), (0, 2)]
        assert oracles.bounding_box(cons("x1 >= 0", dim=1), 1) is None


class TestCovering:
    def test_two_halves_cover_the_square(self):
        square = cons("0 <= x1 <= 2", "0 <= x2 <= 2", dim=2)
        left = cons("0 <= x1 <= 1", "0 <= x2 <= 2", dim=2)
        right = cons("1 <= x1 <= 2", "0 <= x2 <= 2", dim=2)
        assert oracles.covered(square, [left, right], 2)

    def test_open_seam_is_not_covered(self):
        seg = cons("0 <= x1 <= 2", dim=1)
        assert not oracles.covered(seg, [cons("0 <= x1 < 1", dim=1), cons("1 < x1 <= 2", dim=1)], 1)

    def test_complement_inclusion_on_the_triangles(self):
        a = cons("x1 >= 0", "x2 >= 0", "x1 + x2 <= 2", dim=2)
        b = cons("x1 <= 2", "x2 >= 0", "x1 - x2 >= 0", dim=2)
        j = list(CPolyhedron.from_constraints(a, 2).join(CPolyhedron.from_constraints(b, 2)).constraints)
        assert not oracles.complement_inclusion(j, a, b, 2)

    def test_nested_is_exact(self):
        a = cons("0 <= x1 <= 2", dim=1)
        b = cons("0 <= x1 <= 1", dim=1)
        assert oracles.complement_inclusion(a, a, b, 1)

    def test_covering_matches_a_fine_grid(self):
        # two oracles cross-checked on one-dimensional unions of intervals
        rng = random.Random(5)
        for _ in range(150):
            def iv():
                lo, hi = sorted(rng.randint(-3, 3) for _ in range(2))
                return cons(f"x1 {'>=' if rng.random() < 0.5 else '>'} {lo}", f"x1 {'<=' if rng.random() < 0.5 else '<'} {hi}", dim=1)

            region, pieces = iv(), [iv(), iv()]
            pts = [(Fraction(k, 4),) for k in range(-14, 15)]
            inside = lambda cs, p: all(c.value(p) < c.bound or (c.value(p) == c.bound and not c.is_strict) for c in cs)
            gap = any(inside(region, p) and not any(inside(q, p) for q in pieces) for p in pts)
            assert oracles.covered(region, pieces, 1) is (not gap)


class TestTemplateJoin:
    def test_forms(self):
        assert len(oracles.weakly_relational_forms(2, octagonal=False)) == 6
        assert len(oracles.weakly_relational_forms(2, octagonal=True)) == 8

    def test_join_of_boxes(self):
        forms = oracles.weakly_relational_forms(1, octagonal=False)
        j = oracles.template_join(cons("0 <= x1 <= 1", dim=1), cons("3 <= x1 <= 4", dim=1), forms)
        assert CPolyhedron.from_constraints(j, 1) == CPolyhedron.from_constraints(cons("0 <= x1 <= 4", dim=1), 1)


class TestGrid:
    def test_points(self):
        pts = list(oracles.grid_points([(0, 1)], Fraction(1, 2)))
        assert pts == [(0,), (Fraction(1, 2),), (1,)]

    def test_counterexample(self):
        in_a = lambda p: p[0] <= 1
        in_b = lambda p: p[0] >= 2
        p = oracles.grid_counterexample(lambda p: True, in_a, in_b, [(0, 3)], Fraction(1, 2))
        assert p == (Fraction(3, 2),)

    def test_report_agreement(self):
        assert oracles.OracleReport("x", "exact", "exact").agree
        assert not oracles.OracleReport("x", "exact", "inexact").agree
