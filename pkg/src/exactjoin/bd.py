"""Bounded-difference shapes and their exact join test.

A shape over x1..xn is a graph on nodes 0..n where node 0 stands for the
constant zero: an arc (i, j) of weight w encodes xi - xj <= w, so (i, 0)
is an upper bound on xi and (0, j) an upper bound on -xj.  Shapes keep
their closed graph and a reduction of it.

Integer shapes only admit integral weights; non-integral bounds are
rounded down on construction, which is sound and exact over the integers.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .core import (
    INF,
    Constraint,
    Decision,
    DimensionError,
    Disjoint,
    DomainFormError,
    braced,
)
from .graphs import WeightedGraph, closure, graph_glb, graph_lub, reduction


class NotBdForm(DomainFormError):
    pass


@dataclass(frozen=True)
class BdShape:
    """A (rational or integer) bounded-difference shape.

    ``closed`` is ``None`` for the empty shape.
    """

    dim: int
    closed: WeightedGraph | None
    integer: bool = False
    reduced: WeightedGraph | None = field(default=None, compare=False, repr=False)

    @classmethod
    def from_graph(cls, g: WeightedGraph, integer: bool = False) -> "BdShape":
        if integer:
            g = WeightedGraph(tuple(tuple(v if v == INF else Fraction(math.floor(v)) for v in r) for r in g.w))
        c = closure(g)
        dim = g.size - 1
        if c is None:
            return cls(dim, None, integer)
        return cls(dim, c, integer, reduction(c))

    @classmethod
    def empty(cls, dim: int, integer: bool = False) -> "BdShape":
        return cls(dim, None, integer)

    @classmethod
    def universe(cls, dim: int, integer: bool = False) -> "BdShape":
        return cls.from_graph(WeightedGraph.top(dim + 1), integer)

    @property
    def is_empty(self) -> bool:
        return self.closed is None

    def arcs(self) -> list[tuple[int, int]]:
        return [] if self.reduced is None else self.reduced.arcs()

    def includes(self, other: "BdShape") -> bool:
        """``other`` is a subset of ``self``."""
        _check(self, other)
        if other.is_empty:
            return True
        if self.is_empty:
            return False
        return other.closed.leq(self.closed)

    def join(self, other: "BdShape") -> "BdShape":
        _check(self, other)
        if self.is_empty:
            return other
        if other.is_empty:
            return self
        g = graph_lub(self.closed, other.closed)
        return BdShape(self.dim, g, self.integer, reduction(g))

    def meet(self, other: "BdShape") -> "BdShape":
        _check(self, other)
        if self.is_empty or other.is_empty:
            return BdShape.empty(self.dim, self.integer)
        return BdShape.from_graph(graph_glb(self.closed, other.closed), self.integer)

    def contains_point(self, p: Sequence[Fraction]) -> bool:
        if self.is_empty:
            return False
        if self.integer and any(Fraction(v).denominator != 1 for v in p):
            return False
        x = (Fraction(0),) + tuple(p)
        w = self.closed.w
        return all(
            w[i][j] == INF or x[i] - x[j] <= w[i][j] for i in range(self.dim + 1) for j in range(self.dim + 1)
        )

    def constraints(self) -> list[Constraint]:
        """Constraints of the reduced graph (an infeasible pair if empty)."""
        if self.is_empty:
            unit = [1] + [0] * (self.dim - 1)
            return [Constraint.make(unit, "<=", 0), Constraint.make(unit, ">=", 1)]
        return [arc_constraint(self.dim, i, j, self.reduced.w[i][j]) for i, j in self.reduced.arcs()]

    def __str__(self) -> str:
        head = "int_bds" if self.integer else "bds"
        return braced(head, self.constraints())


def _check(a: BdShape, b: BdShape) -> None:
    if a.dim != b.dim:
        raise DimensionError(f"dimension mismatch: {a.dim} vs {b.dim}")
    if a.integer != b.integer:
        raise TypeError("cannot mix rational and integer shapes")


def arc_constraint(dim: int, i: int, j: int, w: Fraction) -> Constraint:
    coeffs = [0] * dim
    if i:
        coeffs[i - 1] += 1
    if j:
        coeffs[j - 1] -= 1
    return Constraint.make(coeffs, "<=", w)


def constraint_arc(beta: Constraint) -> tuple[int, int, Fraction]:
    """The arc (i, j, weight) encoding a non-strict bounded difference."""
    if beta.rel != "<=":
        raise NotBdForm(f"not a non-strict bounded difference: {beta}", beta)
    nz = [(idx, c) for idx, c in enumerate(beta.coeffs, start=1) if c != 0]
    if len(nz) == 1 and abs(nz[0][1]) == 1:
        (idx, c), = nz
        return (idx, 0, beta.bound) if c > 0 else (0, idx, beta.bound)
    if len(nz) == 2 and {nz[0][1], nz[1][1]} == {1, -1}:
        (a, ca), (b, _) = nz
        return (a, b, beta.bound) if ca > 0 else (b, a, beta.bound)
    raise NotBdForm(f"not a bounded difference: {beta}", beta)


def bd_from_constraints(cs: Iterable[Constraint], dim: int | None = None, integer: bool = False) -> BdShape:
    cs = list(cs)
    if dim is None:
        if not cs:
            raise ValueError("dimension needed for an empty constraint system")
        dim = cs[0].dim
    arcs: dict[tuple[int, int], Fraction] = {}
    for beta in cs:
        if beta.dim != dim:
            raise DimensionError(f"dimension mismatch: {beta.dim} vs {dim}")
        if beta.is_strict:
            raise NotBdForm(f"strict constraints are not allowed: {beta}", beta)
        for half in beta.inequalities():
            i, j, b = constraint_arc(half)
            if integer:
                b = Fraction(math.floor(b))
            if (i, j) not in arcs or b < arcs[(i, j)]:
                arcs[(i, j)] = b
    return BdShape.from_graph(WeightedGraph.from_arcs(dim + 1, arcs), integer)


# ---------------------------------------------------------------------------
# Exact join detection
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class BdWitness:
    """Arc (i, j) of the first reduction and (k, l) of the second."""

    i: int
    j: int
    k: int
    l: int
    disjoint: bool = False

    @property
    def indices(self) -> tuple[int, int, int, int]:
        return (self.i, self.j, self.k, self.l)


def bd_conditions(b1: BdShape, b2: BdShape, i: int, j: int, k: int, l: int) -> tuple[bool, bool]:
    """Evaluate the two detection conditions on one pair of arcs.

    Returns (weights of each arc strictly improve on the other shape,
    the cross inequality against the join holds), with the extra slack
    of 2 in the cross inequality for integer shapes.
    """
    w1, w2 = b1.closed.w, b2.closed.w
    c1 = w1[i][j] < w2[i][j] and w2[k][l] < w1[k][l]
    lhs = w1[i][j] + w2[k][l]
    rhs = max(w1[i][l], w2[i][l]) + max(w1[k][j], w2[k][j])
    if lhs == INF:
        return c1, False
    c2 = lhs + 2 <= rhs if b1.integer else lhs < rhs
    return c1, c2


def _detect(b1: BdShape, b2: BdShape) -> Decision:
    _check(b1, b2)
    if b1.is_empty or b2.is_empty or b1.includes(b2) or b2.includes(b1):
        return Decision.exact_join()
    w1, w2 = b1.closed.w, b2.closed.w
    slack = 2 if b1.integer else 0
    # arcs of R1 that improve on G2, arcs of R2 that improve on G1
    first = [(i, j) for i, j in b1.arcs() if w1[i][j] < w2[i][j]]
    second = [(k, l) for k, l in b2.arcs() if w2[k][l] < w1[k][l]]
    for i, j in first:
        a = w1[i][j]
        for k, l in second:
            lhs = a + w2[k][l] + slack
            rhs = max(w1[i][l], w2[i][l]) + max(w1[k][j], w2[k][j])
            ok = lhs <= rhs if slack else lhs < rhs
            if ok:
                return Decision.inexact(BdWitness(i, j, k, l, disjoint=(i == l and j == k)))
    return Decision.exact_join()


def detect_exact_join_bd(b1: BdShape, b2: BdShape) -> Decision:
    """Exact join test for rational bounded-difference shapes."""
    if b1.integer or b2.integer:
        raise TypeError("use detect_exact_join_int_bd for integer shapes")
    return _detect(b1, b2)


def detect_exact_join_int_bd(b1: BdShape, b2: BdShape) -> Decision:
    """Exact join test for integer bounded-difference shapes."""
    if not (b1.integer and b2.integer):
        raise TypeError("use detect_exact_join_bd for rational shapes")
    return _detect(b1, b2)


def build_separating_witness(b1: BdShape, b2: BdShape, i: int, j: int, k: int, l: int) -> BdShape | Disjoint:
    """A non-empty shape inside the join and disjoint from both inputs.

    When (i, j) is the reverse of (k, l) the inputs themselves do not
    intersect; the construction still yields a shape strictly between
    them, and :class:`Disjoint` is only returned if it comes out empty.
    """
    _check(b1, b2)
    if b1.is_empty or b2.is_empty:
        raise ValueError("witnesses only exist for non-empty shapes")
    if (i, j) not in b1.arcs() or (k, l) not in b2.arcs():
        raise ValueError("indices are not arcs of the reductions")
    c1, c2 = bd_conditions(b1, b2, i, j, k, l)
    if not (c1 and c2):
        raise ValueError(f"({i}, {j}, {k}, {l}) does not witness an inexact join")
    w1, w2 = b1.closed.w, b2.closed.w
    g = graph_lub(b1.closed, b2.closed)
    w = g.w
    if b1.integer:
        eps = Fraction(1)
    else:
        terms = [w[i][j] - w1[i][j], w[k][l] - w2[k][l], (w[i][l] + w[k][j] - w1[i][j] - w2[k][l]) / 2]
        finite = [t for t in terms if t != INF]
        eps = min(finite) if finite else Fraction(1)
    updates = {(j, i): -w1[i][j] - eps}
    updates[(l, k)] = -w2[k][l] - eps
    shape = BdShape.from_graph(g.replace(updates), b1.integer)
    if shape.is_empty and i == l and j == k:
        return Disjoint()
    return shape


def verify_bd_witness(b1: BdShape, b2: BdShape, witness: BdShape | Disjoint) -> bool:
    """Check that ``witness`` certifies that the join is not the union."""
    if isinstance(witness, Disjoint):
        return b1.meet(b2).is_empty and not b1.includes(b2) and not b2.includes(b1)
    return (
        not witness.is_empty
        and b1.join(b2).includes(witness)
        and witness.meet(b1).is_empty
        and witness.meet(b2).is_empty
    )


def format_bd_witness(w: BdWitness) -> str:
    return f"arcs ({w.i}, {w.j}) and ({w.k}, {w.l})" + (" [disjoint]" if w.disjoint else "")


def shape_bounds(s: BdShape) -> list[tuple[Fraction, Fraction]] | None:
    """Per-variable [lo, hi] bounds of a non-empty shape, or None if unbounded."""
    if s.is_empty:
        return None
    w = s.closed.w
    out = []
    for v in range(1, s.dim + 1):
        hi, lo = w[v][0], w[0][v]
        if hi == INF or lo == INF:
            return None
        out.append((-lo, hi))
    return out


__all__ = [
    "BdShape",
    "BdWitness",
    "NotBdForm",
    "bd_conditions",
    "bd_from_constraints",
    "build_separating_witness",
    "detect_exact_join_bd",
    "detect_exact_join_int_bd",
    "format_bd_witness",
    "shape_bounds",
    "verify_bd_witness",
]
