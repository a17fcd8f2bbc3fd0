"""Weighted directed graphs with weights in the rationals extended by +inf.

Used as the representation of bounded-difference and octagonal shapes.
Graphs are immutable dense matrices.  Shortest-path closure is computed
with Floyd-Warshall after scaling all finite weights to integers by a
common denominator, so no rational arithmetic happens in the inner loop.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .core import INF, DimensionError, Q

Weight = "Fraction | float"

# float64 represents every integer of magnitude below 2**53 exactly
_FLOAT_SAFE = 2**52


@dataclass(frozen=True)
class WeightedGraph:
    """``w[i][j]`` is the weight of the arc from i to j (``INF`` if absent)."""

    w: tuple[tuple, ...]

    def __post_init__(self):
        n = len(self.w)
        if n == 0 or any(len(row) != n for row in self.w):
            raise ValueError("weight matrix must be square and non-empty")

    @classmethod
    def from_matrix(cls, rows: Iterable[Iterable]) -> "WeightedGraph":
        return cls(tuple(tuple(INF if v == INF else Q(v) for v in row) for row in rows))

    @classmethod
    def top(cls, size: int, zero_diagonal: bool = True) -> "WeightedGraph":
        """The graph with no arcs (diagonal 0 if requested)."""
        return cls(
            tuple(
                tuple(Fraction(0) if (i == j and zero_diagonal) else INF for j in range(size))
                for i in range(size)
            )
        )

    @classmethod
    def from_arcs(cls, size: int, arcs: dict[tuple[int, int], Fraction]) -> "WeightedGraph":
        rows = [[INF] * size for _ in range(size)]
        for (i, j), v in arcs.items():
            if v < rows[i][j]:
                rows[i][j] = Q(v)
        return cls(tuple(tuple(r) for r in rows))

    @property
    def size(self) -> int:
        return len(self.w)

    def __getitem__(self, ij: tuple[int, int]):
        i, j = ij
        return self.w[i][j]

    def arcs(self) -> list[tuple[int, int]]:
        """Finite-weight pairs (i, j) with i != j, in row-major order."""
        n = self.size
        return [(i, j) for i in range(n) for j in range(n) if i != j and self.w[i][j] != INF]

    def arc_count(self) -> int:
        return len(self.arcs())

    def replace(self, updates: dict[tuple[int, int], Fraction]) -> "WeightedGraph":
        rows = [list(r) for r in self.w]
        for (i, j), v in updates.items():
            rows[i][j] = v
        return WeightedGraph(tuple(tuple(r) for r in rows))

    def leq(self, other: "WeightedGraph") -> bool:
        """Pointwise ``self <= other`` (the graph order)."""
        _same_size(self, other)
        return all(a <= b for ra, rb in zip(self.w, other.w) for a, b in zip(ra, rb))

    def __str__(self) -> str:
        lines = []
        for i, j in self.arcs():
            lines.append(f"{i} -> {j}: {self.w[i][j]}")
        return "\n".join(lines) if lines else "(no arcs)"


def _same_size(g1: WeightedGraph, g2: WeightedGraph) -> None:
    if g1.size != g2.size:
        raise DimensionError(f"node-count mismatch: {g1.size} vs {g2.size}")


def graph_lub(g1: WeightedGraph, g2: WeightedGraph) -> WeightedGraph:
    """Pointwise maximum of the weights."""
    _same_size(g1, g2)
    return WeightedGraph(tuple(tuple(max(a, b) for a, b in zip(r1, r2)) for r1, r2 in zip(g1.w, g2.w)))


def graph_glb(g1: WeightedGraph, g2: WeightedGraph) -> WeightedGraph:
    """Pointwise minimum of the weights."""
    _same_size(g1, g2)
    return WeightedGraph(tuple(tuple(min(a, b) for a, b in zip(r1, r2)) for r1, r2 in zip(g1.w, g2.w)))


# ---------------------------------------------------------------------------
# Closure
# ---------------------------------------------------------------------------


class _Scaled:
    """Integer image of a weight matrix: ``mat = w * denom``, +inf kept."""

    def __init__(self, w: Sequence[Sequence], extra_denom: int = 1):
        denom = 1
        for row in w:
            for v in row:
                if v != INF:
                    denom = math.lcm(denom, v.denominator)
        denom *= extra_denom
        self.denom = denom
        self.size = len(w)
        ints = [[INF if v == INF else int(v * denom) for v in row] for row in w]
        self.ints = ints
        biggest = max((abs(v) for v in (x for row in ints for x in row) if v != INF), default=0)
        # bounding every simple-path weight keeps float arithmetic exact
        self.use_float = biggest * (self.size + 1) * 4 < _FLOAT_SAFE
        dtype = np.float64 if self.use_float else object
        self.mat = np.array(ints, dtype=dtype)

    def to_rows(self, mat) -> tuple[tuple, ...]:
        d = self.denom
        out = []
        for row in mat.tolist():
            out.append(tuple(INF if v == INF else Fraction(int(v), d) for v in row))
        return tuple(out)


def _floyd_warshall(mat) -> bool:
    """In-place all-pairs shortest paths; False as soon as a negative cycle shows up."""
    n = mat.shape[0]
    for i in range(n):
        if mat[i, i] > 0:
            mat[i, i] = 0
    for k in range(n):
        col = mat[:, k : k + 1]
        row = mat[k : k + 1, :]
        np.minimum(mat, col + row, out=mat)
        if mat[k, k] < 0:
            return False
    return not bool((np.diagonal(mat) < 0).any())


def closure(g: WeightedGraph) -> WeightedGraph | None:
    """Shortest-path closure, or ``None`` if ``g`` has a negative cycle."""
    s = _Scaled(g.w)
    if not _floyd_warshall(s.mat):
        return None
    return WeightedGraph(s.to_rows(s.mat))


def is_consistent(g: WeightedGraph) -> bool:
    return closure(g) is not None


def is_closed(g: WeightedGraph) -> bool:
    n = g.size
    w = g.w
    if any(w[i][i] != 0 for i in range(n)):
        return False
    return closure(g) == g


# ---------------------------------------------------------------------------
# Reduction
# ---------------------------------------------------------------------------


def zero_classes(g: WeightedGraph) -> list[list[int]]:
    """Partition the nodes of a closed graph into zero-weight-cycle classes."""
    n = g.size
    w = g.w
    seen = [False] * n
    classes = []
    for i in range(n):
        if seen[i]:
            continue
        cls = [i]
        seen[i] = True
        for j in range(i + 1, n):
            if not seen[j] and w[i][j] != INF and w[j][i] != INF and w[i][j] + w[j][i] == 0:
                cls.append(j)
                seen[j] = True
        classes.append(cls)
    return classes


def reduction(g: WeightedGraph) -> WeightedGraph:
    """A minimal subgraph of the closed graph ``g`` with the same closure.

    Nodes on a common zero-weight cycle form an equivalence class; each
    class is linked by a single cycle through its members in index order,
    and between classes only arcs among class leaders (smallest members)
    that are not implied through a third leader are kept.
    """
    n = g.size
    w = g.w
    arcs: dict[tuple[int, int], Fraction] = {}
    classes = zero_classes(g)
    for cls in classes:
        if len(cls) > 1:
            for a, b in zip(cls, cls[1:] + cls[:1]):
                arcs[(a, b)] = w[a][b]
    leaders = [cls[0] for cls in classes]
    sub = WeightedGraph(tuple(tuple(w[a][b] for b in leaders) for a in leaders))
    mat = _Scaled(sub.w).mat
    m = len(leaders)
    finite = mat != INF
    for x in range(m):
        # implied[c, y]: w(x, c) + w(c, y) == w(x, y) through a third leader c
        implied = (mat[x, :, None] + mat) == mat[x][None, :]
        implied[x, :] = False
        implied[np.arange(m), np.arange(m)] = False
        keep = finite[x] & ~implied.any(axis=0)
        keep[x] = False
        for y in np.nonzero(keep)[0].tolist():
            arcs[(leaders[x], leaders[y])] = w[leaders[x]][leaders[y]]
    rows = [[INF] * n for _ in range(n)]
    for i in range(n):
        rows[i][i] = w[i][i]
    for (i, j), v in arcs.items():
        rows[i][j] = v
    return WeightedGraph(tuple(tuple(r) for r in rows))


def bellman_ford_closure(g: WeightedGraph) -> WeightedGraph | None:
    """Reference closure: one Bellman-Ford run per source, in exact rationals."""
    n = g.size
    edges = [(i, j, g.w[i][j]) for i in range(n) for j in range(n) if i != j and g.w[i][j] != INF]
    rows = []
    for s in range(n):
        dist: list = [INF] * n
        dist[s] = min(Fraction(0), g.w[s][s]) if g.w[s][s] != INF else Fraction(0)
        if dist[s] < 0:
            return None
        for _ in range(n - 1):
            changed = False
            for i, j, v in edges:
                if dist[i] != INF and dist[i] + v < dist[j]:
                    dist[j] = dist[i] + v
                    changed = True
            if not changed:
                break
        for i, j, v in edges:
            if dist[i] != INF and dist[i] + v < dist[j]:
                return None
        if dist[s] < 0:
            return None
        rows.append(tuple(dist))
    return WeightedGraph(tuple(rows))
