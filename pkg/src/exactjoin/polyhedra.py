"""Topologically closed convex polyhedra in double description.

A :class:`CPolyhedron` keeps both a minimal constraint system and a
minimal generator system (points and rays; lines are listed as pairs of
opposite rays).  Conversion homogenizes ``<a, x> <= b`` into the cone
constraint ``b*x0 - <a, x> >= 0`` and runs :mod:`exactjoin.dd`.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .core import (
    Constraint,
    Decision,
    DimensionError,
    Generator,
    braced,
    dot,
    satisfies_all,
    saturates,
)
from .dd import IntVec, cone_constraints, cone_generators, integral


def infeasible_constraints(dim: int) -> tuple[Constraint, ...]:
    unit = [1] + [0] * (dim - 1)
    return (Constraint.make(unit, "<=", 0), Constraint.make(unit, ">=", 1))


def _constraint_row(beta: Constraint, extra: Sequence[int] = ()) -> tuple[IntVec, bool]:
    row = [beta.bound] + [-c for c in beta.coeffs] + list(extra)
    return integral(row), beta.is_equality


def _row_constraint(row: Sequence[int], rel: str) -> Constraint | None:
    """Cone row (c0, c) read back as ``-<c, x> rel c0``; None if c is zero."""
    c0, coeffs = row[0], row[1:]
    if all(c == 0 for c in coeffs):
        return None
    return Constraint.make([-c for c in coeffs], rel, c0)


def sort_constraints(cs: Iterable[Constraint]) -> tuple[Constraint, ...]:
    return tuple(sorted(set(cs), key=lambda c: (c.rel, tuple(-x for x in c.coeffs), c.bound)))


def sort_generators(gs: Iterable[Generator]) -> tuple[Generator, ...]:
    return tuple(sorted(set(gs), key=lambda g: (g.kind, g.coords)))


class PolyhedronBase:
    """Queries shared by closed and NNC polyhedra.

    Subclasses provide ``dim``, ``constraints``, ``points``,
    ``closure_points``, ``rays`` and ``lines`` (lines also appear in
    ``rays`` as opposite pairs).
    """

    dim: int
    constraints: tuple[Constraint, ...]
    points: tuple[tuple[Fraction, ...], ...]
    closure_points: tuple[tuple[Fraction, ...], ...]
    rays: tuple[tuple[Fraction, ...], ...]
    lines: tuple[tuple[Fraction, ...], ...]

    @property
    def is_empty(self) -> bool:
        return not self.points

    def generators(self) -> tuple[Generator, ...]:
        gs = [Generator.point(p) for p in self.points]
        gs += [Generator.closure_point(c) for c in self.closure_points]
        gs += [Generator.ray(r) for r in self.rays]
        return tuple(gs)

    def ineqs(self) -> list[Constraint]:
        """The constraint system with every equality split into two halves."""
        out: list[Constraint] = []
        for c in self.constraints:
            out.extend(c.inequalities())
        return out

    def contains_point(self, p: Sequence[Fraction]) -> bool:
        return not self.is_empty and satisfies_all(p, self.constraints)

    def closure_contains(self, p: Sequence[Fraction]) -> bool:
        """Membership in the topological closure."""
        return not self.is_empty and satisfies_all(p, (c.weakened() for c in self.constraints))

    def has_ray(self, r: Sequence[Fraction]) -> bool:
        for c in self.constraints:
            v = dot(c.coeffs, r)
            if v > 0 or (c.is_equality and v != 0):
                return False
        return True

    def subsumes(self, g: Generator) -> bool:
        if self.is_empty:
            return False
        if g.kind == "point":
            return self.contains_point(g.coords)
        if g.kind == "closure_point":
            return self.closure_contains(g.coords)
        return self.has_ray(g.coords)

    def includes(self, other: "PolyhedronBase") -> bool:
        """``other`` is a subset of ``self``."""
        if other.dim != self.dim:
            raise DimensionError(f"dimension mismatch: {self.dim} vs {other.dim}")
        if other.is_empty:
            return True
        return all(self.subsumes(g) for g in other.generators())

    def satisfies(self, beta: Constraint) -> bool:
        """Every point of the polyhedron satisfies ``beta``."""
        if self.is_empty:
            return True
        for half in beta.inequalities():
            a, b = half.coeffs, half.bound
            if any(dot(a, r) > 0 for r in self.rays):
                return False
            if any(dot(a, c) > b for c in self.closure_points):
                return False
            if half.is_strict:
                if any(dot(a, p) >= b for p in self.points):
                    return False
            elif any(dot(a, p) > b for p in self.points):
                return False
        return True

    def violates(self, beta: Constraint) -> bool:
        return not self.satisfies(beta)

    def sample_point(self) -> tuple[Fraction, ...]:
        if self.is_empty:
            raise ValueError("empty polyhedron")
        return self.points[0]


@dataclass(frozen=True, eq=False)
class CPolyhedron(PolyhedronBase):
    dim: int
    constraints: tuple[Constraint, ...]
    points: tuple[tuple[Fraction, ...], ...]
    rays: tuple[tuple[Fraction, ...], ...]
    lines: tuple[tuple[Fraction, ...], ...]

    closure_points = ()

    @classmethod
    def from_constraints(cls, cs: Iterable[Constraint], dim: int | None = None) -> "CPolyhedron":
        cs = list(cs)
        if dim is None:
            if not cs:
                raise ValueError("dimension needed for an empty constraint system")
            dim = cs[0].dim
        for c in cs:
            if c.dim != dim:
                raise DimensionError(f"dimension mismatch: {c.dim} vs {dim}")
            if c.is_strict:
                raise ValueError(f"strict constraint in a closed polyhedron: {c}")
        rows = [(tuple([1] + [0] * dim), False)] + [_constraint_row(c) for c in cs]
        rays, lines = cone_generators(dim + 1, rows)
        return cls._from_cone_generators(dim, rays, lines)

    @classmethod
    def _from_cone_generators(cls, dim: int, rays: list[IntVec], lines: list[IntVec]) -> "CPolyhedron":
        pts = [tuple(Fraction(x, r[0]) for x in r[1:]) for r in rays if r[0] > 0]
        if not pts:
            return cls.empty(dim)
        rs = [Generator.ray(r[1:]).coords for r in rays if r[0] == 0]
        ls = [Generator.ray(l[1:]).coords for l in lines]
        ray_pairs = rs + [l for l in ls] + [tuple(-x for x in l) for l in ls]
        gen_rows = [integral((1,) + p) for p in pts] + [integral((0,) + r) for r in rs]
        line_rows = [integral((0,) + l) for l in ls]
        ineqs, eqs = cone_constraints(dim + 1, gen_rows, line_rows)
        cs = [_row_constraint(r, "<=") for r in ineqs] + [_row_constraint(r, "=") for r in eqs]
        return cls(
            dim,
            sort_constraints(c for c in cs if c is not None),
            tuple(sorted(set(pts))),
            tuple(sorted({Generator.ray(r).coords for r in ray_pairs})),
            tuple(sorted(set(ls))),
        )

    @classmethod
    def from_generators(
        cls,
        dim: int,
        points: Iterable[Sequence] = (),
        rays: Iterable[Sequence] = (),
        lines: Iterable[Sequence] = (),
    ) -> "CPolyhedron":
        points, rays, lines = list(points), list(rays), list(lines)
        if not points:
            return cls.empty(dim)
        for v in points + rays + lines:
            if len(v) != dim:
                raise DimensionError(f"generator of dimension {len(v)} in a {dim}-dimensional space")
        gen_rows = [integral((Fraction(1),) + tuple(map(Fraction, p))) for p in points]
        gen_rows += [integral((Fraction(0),) + tuple(map(Fraction, r))) for r in rays]
        line_rows = [integral((Fraction(0),) + tuple(map(Fraction, l))) for l in lines]
        ineqs, eqs = cone_constraints(dim + 1, gen_rows, line_rows)
        cs = [_row_constraint(r, "<=") for r in ineqs] + [_row_constraint(r, "=") for r in eqs]
        return cls.from_constraints([c for c in cs if c is not None], dim)

    @classmethod
    def empty(cls, dim: int) -> "CPolyhedron":
        return cls(dim, infeasible_constraints(dim), (), (), ())

    @classmethod
    def universe(cls, dim: int) -> "CPolyhedron":
        return cls.from_constraints([], dim)

    def join(self, other: "CPolyhedron") -> "CPolyhedron":
        _check(self, other)
        if self.is_empty:
            return other
        if other.is_empty:
            return self
        return CPolyhedron.from_generators(
            self.dim, self.points + other.points, self.rays + other.rays, self.lines + other.lines
        )

    def meet(self, other: "CPolyhedron") -> "CPolyhedron":
        _check(self, other)
        if self.is_empty or other.is_empty:
            return CPolyhedron.empty(self.dim)
        return CPolyhedron.from_constraints(self.constraints + other.constraints, self.dim)

    def __eq__(self, other) -> bool:
        if not isinstance(other, CPolyhedron) or other.dim != self.dim:
            return NotImplemented
        if self.is_empty or other.is_empty:
            return self.is_empty and other.is_empty
        return self.constraints == other.constraints

    def __hash__(self) -> int:
        return hash((self.dim, self.constraints if not self.is_empty else None))

    def __str__(self) -> str:
        return braced("cpoly", self.constraints)


def _check(a: PolyhedronBase, b: PolyhedronBase) -> None:
    if a.dim != b.dim:
        raise DimensionError(f"dimension mismatch: {a.dim} vs {b.dim}")


def join(p1: CPolyhedron, p2: CPolyhedron) -> CPolyhedron:
    return p1.join(p2)


def meet(p1: CPolyhedron, p2: CPolyhedron) -> CPolyhedron:
    return p1.meet(p2)


def contains(p1: CPolyhedron, p2: CPolyhedron) -> bool:
    return p1.includes(p2)


def convert(description, dim: int | None = None):
    """Constraints to generators, or generators to constraints.

    A list of :class:`Constraint` yields the generator tuple
    ``(points, rays)`` (lines as ray pairs); a list of
    :class:`Generator` yields the minimized constraint tuple.
    """
    items = list(description)
    if items and isinstance(items[0], Generator):
        d = dim if dim is not None else items[0].dim
        pts = [g.coords for g in items if g.kind == "point"]
        rays = [g.coords for g in items if g.kind == "ray"]
        return CPolyhedron.from_generators(d, pts, rays).constraints
    p = CPolyhedron.from_constraints(items, dim)
    return p.points, p.rays


# ---------------------------------------------------------------------------
# Exact join detection
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class PolyWitness:
    """Constraint ``beta`` of one operand and generator ``g`` of the same operand.

    ``first`` tells which operand (0 or 1) the pair comes from; for NNC
    polyhedra ``condition`` records which of the three conditions held.
    """

    beta: Constraint
    g: Generator | None
    first: int = 0
    condition: int = 0


def _role_order(p1: PolyhedronBase, p2: PolyhedronBase) -> tuple[int, int]:
    # constraint count times generator count, the per-role cost of the scan
    cost1 = len(p1.ineqs()) * len(p1.generators())
    cost2 = len(p2.ineqs()) * len(p2.generators())
    return (1, 0) if cost1 > cost2 else (0, 1)


def detect_exact_join_closed(p1: CPolyhedron, p2: CPolyhedron) -> Decision:
    """Exact join test for topologically closed polyhedra.

    The join is inexact iff some constraint of one operand is saturated
    by one of its generators, is violated by the other operand, and that
    generator is not subsumed by the other operand.  Only one direction
    needs scanning; the cheaper operand plays the first role.
    """
    _check(p1, p2)
    if p1.is_empty or p2.is_empty:
        return Decision.exact_join()
    first, second = _role_order(p1, p2)
    a, b = (p1, p2)[first], (p1, p2)[second]
    gens = a.generators()
    for beta in a.ineqs():
        if not b.violates(beta):
            continue
        for g in gens:
            if saturates(g, beta) and not b.subsumes(g):
                return Decision.inexact(PolyWitness(beta, g, first))
    return Decision.exact_join()
