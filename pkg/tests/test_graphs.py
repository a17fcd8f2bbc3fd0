"""Weighted graphs: closure, consistency and reduction."""

import random
from fractions import Fraction

import pytest

from exactjoin import oracles
from exactjoin.bd import arc_constraint
from exactjoin.core import INF
from exactjoin.graphs import (
    WeightedGraph,
    bellman_ford_closure,
    closure,
    graph_glb,
    graph_lub,
    is_closed,
    is_consistent,
    reduction,
    zero_classes,
)


def random_graph(rng: random.Random, n: int, density: float = 0.4, lo: int = -2, hi: int = 6) -> WeightedGraph:
    arcs = {}
    for i in range(n):
        for j in range(n):
            if i != j and rng.random() < density:
                arcs[(i, j)] = Fraction(rng.randint(lo, hi), rng.choice((1, 1, 2)))
    g = WeightedGraph.from_arcs(n, arcs)
    return g.replace({(i, i): Fraction(0) for i in range(n)})


def consistent_graphs(seed: int, count: int, n_max: int = 6):
    rng = random.Random(seed)
    out = []
    while len(out) < count:
        g = random_graph(rng, rng.randint(2, n_max))
        if is_consistent(g):
            out.append(g)
    return out


class TestBasics:
    def test_from_arcs_keeps_the_smaller_weight(self):
        g = WeightedGraph.from_arcs(2, {(0, 1): 3})
        assert g[0, 1] == 3 and g[1, 0] == INF

    def test_lub_and_glb_are_pointwise(self):
        a = WeightedGraph.from_arcs(2, {(0, 1): 1})
        b = WeightedGraph.from_arcs(2, {(0, 1): 4, (1, 0): 2})
        assert graph_lub(a, b)[0, 1] == 4 and graph_lub(a, b)[1, 0] == INF
        assert graph_glb(a, b)[0, 1] == 1 and graph_glb(a, b)[1, 0] == 2

    def test_non_square_rejected(self):
        with pytest.raises(ValueError):
            WeightedGraph(((0, 1),))


class TestClosure:
    def test_triangle(self):
        g = WeightedGraph.from_arcs(3, {(0, 1): 2, (1, 2): 3, (0, 2): 10})
        c = closure(g)
        assert c[0, 2] == 5 and c[0, 0] == 0

    def test_negative_cycle_is_inconsistent(self):
        g = WeightedGraph.from_arcs(2, {(0, 1): 1, (1, 0): -2})
        assert closure(g) is None and not is_consistent(g)

    def test_zero_cycle_is_consistent(self):
        assert is_consistent(WeightedGraph.from_arcs(2, {(0, 1): 1, (1, 0): -1}))

    def test_matches_bellman_ford(self):
        rng = random.Random(3)
        for _ in range(300):
            g = random_graph(rng, rng.randint(2, 7))
            assert closure(g) == bellman_ford_closure(g)

    def test_weights_are_linear_programming_suprema(self):
        # closed weight of (i, j) = max of x_i - x_j over the constraint system, with x_0 = 0
        for g in consistent_graphs(17, 60, n_max=4):
            c = closure(g)
            dim = g.size - 1
            if dim == 0:
                continue
            cs = [arc_constraint(dim, i, j, g.w[i][j]) for i, j in g.arcs() if not (i == 0 and j == 0)]
            cs = [b for b in cs if any(b.coeffs)]
            for i in range(g.size):
                for j in range(g.size):
                    if i == j:
                        continue
                    form = [Fraction(0)] * dim
                    if i:
                        form[i - 1] += 1
                    if j:
                        form[j - 1] -= 1
                    assert oracles.fm_sup(cs, form) == c[i, j]


@pytest.fixture(scope="module")
def graphs():
    return consistent_graphs(23, 120)


class TestClosureProperties:
    def test_idempotent(self, graphs):
        for g in graphs:
            c = closure(g)
            assert closure(c) == c and is_closed(c)

    def test_reductive(self, graphs):
        for g in graphs:
            assert closure(g).leq(g)

    def test_monotone(self, graphs):
        rng = random.Random(1)
        for g in graphs:
            # loosening any arc can only loosen the closure
            looser = g.replace({a: g.w[a[0]][a[1]] + rng.randint(0, 3) for a in g.arcs()})
            assert closure(g).leq(closure(looser))


class TestReduction:
    def test_zero_classes(self):
        g = closure(WeightedGraph.from_arcs(3, {(0, 1): 1, (1, 0): -1, (1, 2): 5}))
        assert zero_classes(g) == [[0, 1], [2]]

    def test_reduction_recovers_the_closure(self):
        for g in consistent_graphs(31, 150):
            c = closure(g)
            assert closure(reduction(c)) == c

    def test_reduction_is_minimal(self):
        for g in consistent_graphs(37, 80):
            c = closure(g)
            r = reduction(c)
            for i, j in r.arcs():
                assert closure(r.replace({(i, j): INF})) != c

    def test_reduction_of_a_chain(self):
        c = closure(WeightedGraph.from_arcs(3, {(0, 1): 1, (1, 2): 1}))
        assert reduction(c).arcs() == [(0, 1), (1, 2)]
