"""Octagonal shapes over 2n signed nodes and their exact join tests.

Node 2k stands for +x_{k+1} and node 2k+1 for -x_{k+1}; the partner of
node i is ``bar(i) = i ^ 1``.  An arc (i, j) of weight w encodes
``s_i - s_j <= w`` where s is the signed value of a node, so
``x1 + x2 <= b`` is the arc (0, 3) (and its twin (2, 1)) and ``x1 <= b``
is the arc (0, 1) with weight 2b.

Graphs are stored as full matrices and kept coherent
(``w(i, j) == w(bar(j), bar(i))``) by every constructor and closure.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .core import INF, Constraint, Decision, DimensionError, Disjoint, DomainFormError, braced
from .graphs import WeightedGraph, _Scaled, graph_glb, graph_lub


class NotOctagonalForm(DomainFormError):
    pass


def bar(i: int) -> int:
    return i ^ 1


def signed_values(p: Sequence[Fraction]) -> list[Fraction]:
    """Signed node values (x1, -x1, x2, -x2, ...) of a point."""
    out = []
    for v in p:
        v = Fraction(v)
        out += [v, -v]
    return out


def is_coherent(g: WeightedGraph) -> bool:
    n = g.size
    w = g.w
    return all(w[i][j] == w[bar(j)][bar(i)] for i in range(n) for j in range(n))


def coherent_graph(size: int, arcs: dict[tuple[int, int], Fraction]) -> WeightedGraph:
    """Graph holding each arc together with its coherent twin."""
    both: dict[tuple[int, int], Fraction] = {}
    for (i, j), v in arcs.items():
        for key in ((i, j), (bar(j), bar(i))):
            if key not in both or v < both[key]:
                both[key] = v
    g = WeightedGraph.from_arcs(size, both)
    return g.replace({(i, i): Fraction(0) for i in range(size) if g.w[i][i] == INF or g.w[i][i] > 0})


# ---------------------------------------------------------------------------
# Strong and tight closure
# ---------------------------------------------------------------------------


def _shortest_paths(mat) -> bool:
    n = mat.shape[0]
    for i in range(n):
        if mat[i, i] > 0:
            mat[i, i] = 0
    for k in range(n):
        np.minimum(mat, mat[:, k : k + 1] + mat[k : k + 1, :], out=mat)
        if mat[k, k] < 0:
            return False
    return True


def _strengthen(mat) -> None:
    n = mat.shape[0]
    unary = np.array([mat[i, bar(i)] for i in range(n)], dtype=mat.dtype)
    bars = [bar(j) for j in range(n)]
    # (w(i, bar i) + w(bar j, j)) / 2 for every (i, j)
    half = (unary[:, None] + unary[bars][None, :]) / 2 if mat.dtype != object else None
    if half is None:
        for i in range(n):
            for j in range(n):
                a, b = unary[i], mat[bars[j], j]
                if a != INF and b != INF:
                    mat[i, j] = min(mat[i, j], (a + b) // 2)
    else:
        np.minimum(mat, half, out=mat)


def _rows(s: _Scaled, mat) -> tuple[tuple, ...]:
    return s.to_rows(mat)


def _strong_mat(mat) -> bool:
    """In-place strong closure of a scaled matrix with even finite weights; False if inconsistent."""
    if not _shortest_paths(mat):
        return False
    _strengthen(mat)
    return not bool((np.diagonal(mat) < 0).any())


def _tight_mat(mat) -> bool:
    """In-place tight closure of an integer matrix; False if there is no integer solution."""
    if not _shortest_paths(mat):
        return False
    n = mat.shape[0]
    for i in range(n):
        v = mat[i, bar(i)]
        if v != INF:
            mat[i, bar(i)] = 2 * math.floor(v / 2) if mat.dtype != object else 2 * (v // 2)
    for i in range(0, n, 2):
        a, b = mat[i, i + 1], mat[i + 1, i]
        if a != INF and b != INF and a + b < 0:
            return False
    _strengthen(mat)
    return not bool((np.diagonal(mat) < 0).any())


def _integral(g: WeightedGraph) -> WeightedGraph:
    if any(v != INF and Fraction(v).denominator != 1 for row in g.w for v in row):
        return WeightedGraph(tuple(tuple(v if v == INF else Fraction(math.floor(v)) for v in r) for r in g.w))
    return g


def strong_closure(g: WeightedGraph) -> WeightedGraph | None:
    """Shortest-path closure followed by one strengthening pass.

    Returns ``None`` if the graph is inconsistent.  Weights are scaled by
    an extra factor of 2 so the halving step stays integral.
    """
    s = _Scaled(g.w, extra_denom=2)
    if not _strong_mat(s.mat):
        return None
    return WeightedGraph(_rows(s, s.mat))


def tight_closure(g: WeightedGraph) -> WeightedGraph | None:
    """Closure over the integers: unary weights are made even.

    Returns ``None`` if the constraints have no integer solution.
    Non-integral weights are first rounded down.
    """
    s = _Scaled(_integral(g).w)
    if not _tight_mat(s.mat):
        return None
    return WeightedGraph(_rows(s, s.mat))


def is_strongly_closed(g: WeightedGraph) -> bool:
    return all(g.w[i][i] == 0 for i in range(g.size)) and strong_closure(g) == g


def is_tightly_closed(g: WeightedGraph) -> bool:
    return all(g.w[i][i] == 0 for i in range(g.size)) and tight_closure(g) == g


def _coherent_pairs(g: WeightedGraph) -> list[tuple[int, int]]:
    seen = set()
    pairs = []
    for i, j in g.arcs():
        twin = (bar(j), bar(i))
        if twin in seen:
            continue
        seen.add((i, j))
        pairs.append((i, j))
    return pairs


def _reduce(g: WeightedGraph, integer: bool) -> WeightedGraph:
    """Drop coherent arc pairs one at a time while the closure still recovers ``g``.

    Works on the scaled integer matrix so each trial is one vectorized
    closure and an array comparison.
    """
    s = _Scaled(g.w) if integer else _Scaled(g.w, extra_denom=2)
    close = _tight_mat if integer else _strong_mat
    target = s.mat
    current = target.copy()
    for i, j in _coherent_pairs(g):
        twin = (bar(j), bar(i))
        trial = current.copy()
        trial[i, j] = INF
        trial[twin] = INF
        work = trial.copy()
        if close(work) and np.array_equal(work, target):
            current = trial
    return WeightedGraph(s.to_rows(current))


def strong_reduction(g: WeightedGraph) -> WeightedGraph:
    """A minimal coherent subgraph whose strong closure is ``g``."""
    return _reduce(g, integer=False)


def tight_reduction(g: WeightedGraph) -> WeightedGraph:
    """A minimal coherent subgraph whose tight closure is ``g``."""
    return _reduce(g, integer=True)


# ---------------------------------------------------------------------------
# Shapes
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class OctShape:
    """A rational or integer octagonal shape; ``closed`` is None when empty."""

    dim: int
    closed: WeightedGraph | None
    integer: bool = False
    reduced: WeightedGraph | None = field(default=None, compare=False, repr=False)

    @classmethod
    def from_graph(cls, g: WeightedGraph, integer: bool = False, reduce: bool = True) -> "OctShape":
        if g.size % 2:
            raise ValueError("octagonal graphs have an even number of nodes")
        c = tight_closure(g) if integer else strong_closure(g)
        dim = g.size // 2
        if c is None:
            return cls(dim, None, integer)
        red = None
        if reduce:
            red = tight_reduction(c) if integer else strong_reduction(c)
        return cls(dim, c, integer, red)

    @classmethod
    def empty(cls, dim: int, integer: bool = False) -> "OctShape":
        return cls(dim, None, integer)

    @property
    def is_empty(self) -> bool:
        return self.closed is None

    def _reduction(self) -> WeightedGraph:
        if self.reduced is None:
            red = tight_reduction(self.closed) if self.integer else strong_reduction(self.closed)
            object.__setattr__(self, "reduced", red)
        return self.reduced

    def arcs(self) -> list[tuple[int, int]]:
        return [] if self.is_empty else self._reduction().arcs()

    def includes(self, other: "OctShape") -> bool:
        _check(self, other)
        if other.is_empty:
            return True
        if self.is_empty:
            return False
        return other.closed.leq(self.closed)

    def join(self, other: "OctShape") -> "OctShape":
        _check(self, other)
        if self.is_empty:
            return other
        if other.is_empty:
            return self
        return OctShape(self.dim, graph_lub(self.closed, other.closed), self.integer)

    def meet(self, other: "OctShape") -> "OctShape":
        _check(self, other)
        if self.is_empty or other.is_empty:
            return OctShape.empty(self.dim, self.integer)
        return OctShape.from_graph(graph_glb(self.closed, other.closed), self.integer, reduce=False)

    def contains_point(self, p: Sequence[Fraction]) -> bool:
        if self.is_empty:
            return False
        if self.integer and any(Fraction(v).denominator != 1 for v in p):
            return False
        s = signed_values(p)
        w = self.closed.w
        n = 2 * self.dim
        return all(w[i][j] == INF or s[i] - s[j] <= w[i][j] for i in range(n) for j in range(n))

    def constraints(self) -> list[Constraint]:
        if self.is_empty:
            unit = [1] + [0] * (self.dim - 1)
            return [Constraint.make(unit, "<=", 0), Constraint.make(unit, ">=", 1)]
        red = self._reduction()
        return [arc_constraint(self.dim, i, j, red.w[i][j]) for i, j in _coherent_pairs(red)]

    def __str__(self) -> str:
        head = "int_oct" if self.integer else "oct"
        return braced(head, self.constraints())


def _check(a: OctShape, b: OctShape) -> None:
    if a.dim != b.dim:
        raise DimensionError(f"dimension mismatch: {a.dim} vs {b.dim}")
    if a.integer != b.integer:
        raise TypeError("cannot mix rational and integer shapes")


def arc_constraint(dim: int, i: int, j: int, w: Fraction) -> Constraint:
    coeffs = [Fraction(0)] * dim
    coeffs[i // 2] += 1 if i % 2 == 0 else -1
    coeffs[j // 2] -= 1 if j % 2 == 0 else -1
    # unary arcs read 2*x <= w
    return Constraint.make(coeffs, "<=", w)


def constraint_arc(beta: Constraint) -> tuple[int, int, Fraction]:
    if beta.rel != "<=":
        raise NotOctagonalForm(f"not a non-strict octagonal constraint: {beta}", beta)
    nz = [(idx, c) for idx, c in enumerate(beta.coeffs) if c != 0]
    if len(nz) == 1 and abs(nz[0][1]) == 1:
        (v, c), = nz
        return (2 * v, 2 * v + 1, 2 * beta.bound) if c > 0 else (2 * v + 1, 2 * v, 2 * beta.bound)
    if len(nz) == 2 and all(abs(c) == 1 for _, c in nz):
        (a, ca), (b, cb) = nz
        i = 2 * a if ca > 0 else 2 * a + 1
        j = 2 * b + 1 if cb > 0 else 2 * b
        return (i, j, beta.bound)
    raise NotOctagonalForm(f"not an octagonal constraint: {beta}", beta)


def oct_from_constraints(cs: Iterable[Constraint], dim: int | None = None, integer: bool = False) -> OctShape:
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
            raise NotOctagonalForm(f"strict constraints are not allowed: {beta}", beta)
        for half in beta.inequalities():
            i, j, b = constraint_arc(half)
            if integer:
                b = Fraction(2 * math.floor(b / 2)) if j == bar(i) else Fraction(math.floor(b))
            if (i, j) not in arcs or b < arcs[(i, j)]:
                arcs[(i, j)] = b
    return OctShape.from_graph(coherent_graph(2 * dim, arcs), integer)


# ---------------------------------------------------------------------------
# Exact join detection
# ---------------------------------------------------------------------------

CONDITION_NAMES = ("1a", "1b", "2a", "2b", "3a", "3b", "4a", "4b")


@dataclass(frozen=True)
class OctWitness:
    i: int
    j: int
    k: int
    l: int
    disjoint: bool = False

    @property
    def indices(self) -> tuple[int, int, int, int]:
        return (self.i, self.j, self.k, self.l)


def _sides(w1, w2, w, i, j, k, l, e1, e2):
    """(lhs, rhs) of the eight conditions with slacks e1 = eps_ij, e2 = eps_kl."""
    a, b = w1[i][j], w2[k][l]
    ib, jb, kb, lb = bar(i), bar(j), bar(k), bar(l)
    return (
        (a + e1, w2[i][j]),
        (b + e2, w1[k][l]),
        (a + b + e1 + e2, w[i][l] + w[k][j]),
        (a + b + e1 + e2, w[i][kb] + w[jb][l]),
        (2 * a + b + 2 * e1 + e2, w[i][l] + w[i][kb] + w[jb][j]),
        (2 * a + b + 2 * e1 + e2, w[k][j] + w[jb][l] + w[i][ib]),
        (a + 2 * b + e1 + 2 * e2, w[i][l] + w[jb][l] + w[k][kb]),
        (a + 2 * b + e1 + 2 * e2, w[k][j] + w[i][kb] + w[lb][l]),
    )


def _eps(i: int, j: int) -> int:
    return 2 if j == bar(i) else 1


def _slacks(integer: bool, i: int, j: int, k: int, l: int) -> tuple[int, int]:
    if not integer:
        return 0, 0
    return _eps(i, j), _eps(k, l)


def oct_conditions(o1: OctShape, o2: OctShape, i: int, j: int, k: int, l: int) -> dict[str, bool]:
    """Truth value of every condition for one pair of arcs.

    Rational shapes use strict inequalities; integer shapes use
    non-strict ones with the per-arc slacks (2 for unary arcs, else 1).
    """
    w1, w2 = o1.closed.w, o2.closed.w
    w = graph_lub(o1.closed, o2.closed).w
    e1, e2 = _slacks(o1.integer, i, j, k, l)
    out = {}
    for name, (lhs, rhs) in zip(CONDITION_NAMES, _sides(w1, w2, w, i, j, k, l, e1, e2)):
        if lhs == INF:
            out[name] = False
        else:
            out[name] = lhs <= rhs if o1.integer else lhs < rhs
    return out


def _detect(o1: OctShape, o2: OctShape) -> Decision:
    _check(o1, o2)
    if o1.is_empty or o2.is_empty or o1.includes(o2) or o2.includes(o1):
        return Decision.exact_join()
    w1, w2 = o1.closed.w, o2.closed.w
    w = graph_lub(o1.closed, o2.closed).w
    integer = o1.integer
    if integer:
        first = [(i, j) for i, j in o1.arcs() if w1[i][j] + _eps(i, j) <= w2[i][j]]
        second = [(k, l) for k, l in o2.arcs() if w2[k][l] + _eps(k, l) <= w1[k][l]]
    else:
        first = [(i, j) for i, j in o1.arcs() if w1[i][j] < w2[i][j]]
        second = [(k, l) for k, l in o2.arcs() if w2[k][l] < w1[k][l]]
    for i, j in first:
        for k, l in second:
            e1, e2 = _slacks(integer, i, j, k, l)
            sides = _sides(w1, w2, w, i, j, k, l, e1, e2)[2:]
            if all((lhs <= rhs) if integer else (lhs < rhs) for lhs, rhs in sides):
                disjoint = (i, j) in ((l, k), (bar(k), bar(l)))
                return Decision.inexact(OctWitness(i, j, k, l, disjoint))
    return Decision.exact_join()


def detect_exact_join_oct(o1: OctShape, o2: OctShape) -> Decision:
    """Exact join test for rational octagonal shapes."""
    if o1.integer or o2.integer:
        raise TypeError("use detect_exact_join_int_oct for integer shapes")
    return _detect(o1, o2)


def detect_exact_join_int_oct(o1: OctShape, o2: OctShape) -> Decision:
    """Exact join test for integer octagonal shapes."""
    if not (o1.integer and o2.integer):
        raise TypeError("use detect_exact_join_oct for rational shapes")
    return _detect(o1, o2)


def build_oct_witness(o1: OctShape, o2: OctShape, i: int, j: int, k: int, l: int) -> OctShape | Disjoint:
    """A non-empty octagon inside the join and disjoint from both inputs."""
    _check(o1, o2)
    if o1.is_empty or o2.is_empty:
        raise ValueError("witnesses only exist for non-empty shapes")
    if (i, j) not in o1.arcs() or (k, l) not in o2.arcs():
        raise ValueError("indices are not arcs of the reductions")
    if not all(oct_conditions(o1, o2, i, j, k, l).values()):
        raise ValueError(f"({i}, {j}, {k}, {l}) does not witness an inexact join")
    w1, w2 = o1.closed.w, o2.closed.w
    g = graph_lub(o1.closed, o2.closed)
    w = g.w
    if o1.integer:
        e1, e2 = _slacks(True, i, j, k, l)
    else:
        a, b = w1[i][j], w2[k][l]
        ib, jb, kb, lb = bar(i), bar(j), bar(k), bar(l)
        terms = [
            (w[i][j] - a, 1),
            (w[k][l] - b, 1),
            (w[i][l] + w[k][j] - a - b, 2),
            (w[i][kb] + w[jb][l] - a - b, 2),
            (w[i][l] + w[i][kb] + w[jb][j] - 2 * a - b, 3),
            (w[k][j] + w[jb][l] + w[i][ib] - 2 * a - b, 3),
            (w[i][l] + w[jb][l] + w[k][kb] - a - 2 * b, 3),
            (w[k][j] + w[i][kb] + w[lb][l] - a - 2 * b, 3),
        ]
        finite = [t / d for t, d in terms if t != INF]
        e1 = e2 = min(finite) if finite else Fraction(1)
    updates = {}
    for key in ((j, i), (bar(i), bar(j))):
        updates[key] = -w1[i][j] - e1
    for key in ((l, k), (bar(k), bar(l))):
        updates[key] = -w2[k][l] - e2
    shape = OctShape.from_graph(g.replace(updates), o1.integer, reduce=False)
    if shape.is_empty and (i, j) in ((l, k), (bar(k), bar(l))):
        return Disjoint()
    return shape


def verify_oct_witness(o1: OctShape, o2: OctShape, witness: OctShape | Disjoint) -> bool:
    if isinstance(witness, Disjoint):
        return o1.meet(o2).is_empty and not o1.includes(o2) and not o2.includes(o1)
    return (
        not witness.is_empty
        and o1.join(o2).includes(witness)
        and witness.meet(o1).is_empty
        and witness.meet(o2).is_empty
        and is_coherent(witness.closed)
    )


def bd_to_oct(shape) -> OctShape:
    """Embed a bounded-difference shape as an octagon over the same variables."""
    if shape.is_empty:
        return OctShape.empty(shape.dim, shape.integer)
    return oct_from_constraints(shape.constraints(), shape.dim, shape.integer)


def shape_bounds(s: OctShape) -> list[tuple[Fraction, Fraction]] | None:
    if s.is_empty:
        return None
    w = s.closed.w
    out = []
    for v in range(s.dim):
        hi, lo = w[2 * v][2 * v + 1], w[2 * v + 1][2 * v]
        if hi == INF or lo == INF:
            return None
        out.append((-lo / 2, hi / 2))
    return out
