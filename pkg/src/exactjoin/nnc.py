"""Not-necessarily-closed polyhedra and their exact join test.

Conversion uses an extra slack coordinate e: a strict constraint
``<a, x> < b`` becomes ``<a, x> + e <= b`` and the encoded polyhedron
also satisfies ``0 <= e <= 1``.  A vertex of the encoding with e > 0 is a
point of the NNC polyhedron, a vertex with e = 0 a closure point.  In the
other direction a point p is encoded as both (p, 1) and (p, 0) and a
closure point c as (c, 0); a facet whose e coefficient is negative reads
back as a strict constraint.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .core import Constraint, Decision, DimensionError, Generator, braced, saturates
from .dd import IntVec, cone_constraints, cone_generators, integral
from .polyhedra import (
    CPolyhedron,
    PolyhedronBase,
    PolyWitness,
    infeasible_constraints,
    sort_constraints,
)


def _nnc_rows(cs: Sequence[Constraint], dim: int) -> list[tuple[IntVec, bool]]:
    rows = [
        (tuple([0] * (dim + 1) + [1]), False),  # e >= 0
        (tuple([1] + [0] * dim + [-1]), False),  # e <= 1
    ]
    for c in cs:
        slack = -1 if c.is_strict else 0
        row = [c.bound] + [-x for x in c.coeffs] + [slack]
        rows.append((integral(row), c.is_equality))
    return rows


def _read_constraint(row: Sequence[int], equality: bool) -> Constraint | None:
    c0, coeffs, ce = row[0], row[1:-1], row[-1]
    if all(c == 0 for c in coeffs):
        return None
    if equality:
        return Constraint.make([-c for c in coeffs], "=", c0)
    return Constraint.make([-c for c in coeffs], "<" if ce < 0 else "<=", c0)


@dataclass(frozen=True, eq=False)
class NncPolyhedron(PolyhedronBase):
    dim: int
    constraints: tuple[Constraint, ...]
    points: tuple[tuple[Fraction, ...], ...]
    closure_points: tuple[tuple[Fraction, ...], ...]
    rays: tuple[tuple[Fraction, ...], ...]
    lines: tuple[tuple[Fraction, ...], ...]

    @classmethod
    def from_constraints(cls, cs: Iterable[Constraint], dim: int | None = None) -> "NncPolyhedron":
        cs = list(cs)
        if dim is None:
            if not cs:
                raise ValueError("dimension needed for an empty constraint system")
            dim = cs[0].dim
        for c in cs:
            if c.dim != dim:
                raise DimensionError(f"dimension mismatch: {c.dim} vs {dim}")
        rays, lines = cone_generators(dim + 2, _nnc_rows(cs, dim))
        points, closure_points, rs = [], [], []
        for r in rays:
            if r[0] > 0:
                v = tuple(Fraction(x, r[0]) for x in r[1:-1])
                (points if r[-1] > 0 else closure_points).append(v)
            else:
                rs.append(Generator.ray(r[1:-1]).coords)
        if not points:
            return cls.empty(dim)
        ls = [Generator.ray(l[1:-1]).coords for l in lines]
        point_set = set(points)
        closure_set = {c for c in closure_points if c not in point_set}
        return cls._canonical(dim, point_set, closure_set, rs, ls)

    @classmethod
    def _canonical(cls, dim, points, closure_points, rays, lines) -> "NncPolyhedron":
        """Recompute a minimal constraint system, then the generators from it."""
        gen_rows = []
        for p in points:
            gen_rows.append(integral((Fraction(1),) + tuple(p) + (Fraction(1),)))
            gen_rows.append(integral((Fraction(1),) + tuple(p) + (Fraction(0),)))
        for c in closure_points:
            gen_rows.append(integral((Fraction(1),) + tuple(c) + (Fraction(0),)))
        for r in rays:
            gen_rows.append(integral((Fraction(0),) + tuple(r) + (Fraction(0),)))
        line_rows = [integral((Fraction(0),) + tuple(l) + (Fraction(0),)) for l in lines]
        ineqs, eqs = cone_constraints(dim + 2, gen_rows, line_rows)
        cs = [_read_constraint(r, False) for r in ineqs] + [_read_constraint(r, True) for r in eqs]
        cs = sort_constraints(c for c in cs if c is not None)
        return cls._from_minimal_constraints(dim, cs)

    @classmethod
    def _from_minimal_constraints(cls, dim: int, cs: tuple[Constraint, ...]) -> "NncPolyhedron":
        rays, lines = cone_generators(dim + 2, _nnc_rows(cs, dim))
        points, closure_points, rs = set(), set(), set()
        for r in rays:
            if r[0] > 0:
                v = tuple(Fraction(x, r[0]) for x in r[1:-1])
                (points if r[-1] > 0 else closure_points).add(v)
            else:
                rs.add(Generator.ray(r[1:-1]).coords)
        if not points:
            return cls.empty(dim)
        closure_points -= points
        points = _prune_points(points, cs)
        ls = sorted({Generator.ray(l[1:-1]).coords for l in lines})
        for l in ls:
            rs.add(l)
            rs.add(Generator.ray([-x for x in l]).coords)
        return cls(
            dim,
            cs,
            tuple(sorted(points)),
            tuple(sorted(closure_points)),
            tuple(sorted(rs)),
            tuple(ls),
        )

    @classmethod
    def from_generators(
        cls,
        dim: int,
        points: Iterable[Sequence] = (),
        closure_points: Iterable[Sequence] = (),
        rays: Iterable[Sequence] = (),
        lines: Iterable[Sequence] = (),
    ) -> "NncPolyhedron":
        points = [tuple(map(Fraction, p)) for p in points]
        closure_points = [tuple(map(Fraction, c)) for c in closure_points]
        rays = [tuple(map(Fraction, r)) for r in rays]
        lines = [tuple(map(Fraction, l)) for l in lines]
        if not points:
            return cls.empty(dim)
        for v in points + closure_points + rays + lines:
            if len(v) != dim:
                raise DimensionError(f"generator of dimension {len(v)} in a {dim}-dimensional space")
        return cls._canonical(dim, points, closure_points, rays, lines)

    @classmethod
    def from_closed(cls, p: CPolyhedron) -> "NncPolyhedron":
        if p.is_empty:
            return cls.empty(p.dim)
        return cls(p.dim, p.constraints, p.points, (), p.rays, p.lines)

    @classmethod
    def empty(cls, dim: int) -> "NncPolyhedron":
        return cls(dim, infeasible_constraints(dim), (), (), (), ())

    @classmethod
    def universe(cls, dim: int) -> "NncPolyhedron":
        return cls.from_constraints([], dim)

    @property
    def is_closed(self) -> bool:
        return not any(c.is_strict for c in self.constraints)

    def join(self, other: "NncPolyhedron") -> "NncPolyhedron":
        _check(self, other)
        if self.is_empty:
            return other
        if other.is_empty:
            return self
        return NncPolyhedron.from_generators(
            self.dim,
            self.points + other.points,
            self.closure_points + other.closure_points,
            self.rays + other.rays,
        )

    def meet(self, other: "NncPolyhedron") -> "NncPolyhedron":
        _check(self, other)
        if self.is_empty or other.is_empty:
            return NncPolyhedron.empty(self.dim)
        return NncPolyhedron.from_constraints(self.constraints + other.constraints, self.dim)

    def add_constraints(self, cs: Iterable[Constraint]) -> "NncPolyhedron":
        if self.is_empty:
            return self
        return NncPolyhedron.from_constraints(self.constraints + tuple(cs), self.dim)

    def __eq__(self, other) -> bool:
        if not isinstance(other, NncPolyhedron) or other.dim != self.dim:
            return NotImplemented
        if self.is_empty or other.is_empty:
            return self.is_empty and other.is_empty
        return self.includes(other) and other.includes(self)

    def __hash__(self) -> int:
        return hash((self.dim, self.points))

    def __str__(self) -> str:
        return braced("nncpoly", self.constraints)


def _prune_points(points, cs) -> set:
    """Drop points that another point makes redundant.

    A point lies in the relative interior of the face cut out by the
    constraints it saturates; it is redundant as soon as another kept
    point saturates a superset of those constraints.
    """
    weak = [c.weakened() for c in cs]
    sat = {p: frozenset(k for k, c in enumerate(weak) if c.value(p) == c.bound) for p in points}
    kept: list = []
    for p in sorted(points, key=lambda p: (-len(sat[p]), p)):
        if not any(sat[q] >= sat[p] for q in kept):
            kept.append(p)
    return set(kept)


def _check(a: PolyhedronBase, b: PolyhedronBase) -> None:
    if a.dim != b.dim:
        raise DimensionError(f"dimension mismatch: {a.dim} vs {b.dim}")


def nnc_convert(description, dim: int | None = None):
    """Constraints to (points, closure points, rays), or generators to constraints."""
    items = list(description)
    if items and isinstance(items[0], Generator):
        d = dim if dim is not None else items[0].dim
        by = {k: [g.coords for g in items if g.kind == k] for k in ("point", "closure_point", "ray")}
        return NncPolyhedron.from_generators(d, by["point"], by["closure_point"], by["ray"]).constraints
    p = NncPolyhedron.from_constraints(items, dim)
    return p.points, p.closure_points, p.rays


def topological_closure(p: NncPolyhedron) -> NncPolyhedron:
    if p.is_empty:
        return p
    return NncPolyhedron.from_constraints([c.weakened() for c in p.constraints], p.dim)


# ---------------------------------------------------------------------------
# Exact join detection
# ---------------------------------------------------------------------------


def hyperplane_inclusion_fails(
    join: NncPolyhedron, pj: NncPolyhedron, beta: Constraint
) -> bool:
    """True iff the join restricted to the hyperplane of ``beta`` is not inside ``pj``."""
    h = beta.hyperplane()
    return not pj.add_constraints([h]).includes(join.add_constraints([h]))


_KIND_ORDER = {"ray": 0, "closure_point": 1, "point": 2}


def _scan_key(g: Generator):
    # rays, then closure points, then points; larger coordinates first breaks ties
    return (_KIND_ORDER[g.kind], tuple(-c for c in g.coords))


def _conditions(p1: NncPolyhedron, p2: NncPolyhedron, exhaustive: bool):
    found = []
    strict_candidates: list[tuple[int, Constraint]] = []
    ops = (p1, p2)
    for i in (0, 1):
        pi, pj = ops[i], ops[1 - i]
        gens = pi.generators()
        for beta in pi.ineqs():
            if not pj.violates(beta):
                continue
            sat = sorted((g for g in gens if saturates(g, beta)), key=_scan_key)
            if not sat:
                continue
            for g in sat:
                if g.kind in ("ray", "closure_point") and not pj.subsumes(g):
                    found.append(PolyWitness(beta, g, i, 1))
                elif g.kind == "point" and not beta.is_strict and not pj.closure_contains(g.coords):
                    found.append(PolyWitness(beta, g, i, 2))
                if found and not exhaustive:
                    return found
            if beta.is_strict and (i, beta) not in strict_candidates:
                strict_candidates.append((i, beta))
    if strict_candidates and (exhaustive or not found):
        j = p1.join(p2)
        for i, beta in strict_candidates:
            if hyperplane_inclusion_fails(j, ops[1 - i], beta):
                found.append(PolyWitness(beta, None, i, 3))
                if not exhaustive:
                    return found
    return found


def detect_exact_join_nnc(p1: NncPolyhedron, p2: NncPolyhedron, exhaustive: bool = False) -> Decision:
    """Exact join test for NNC polyhedra.

    Scans both role assignments for a generator saturating a constraint
    that the other operand violates, then applies the ray/closure-point,
    point, and strict-hyperplane conditions; the hyperplane inclusion
    test is the costly one and runs last.  With ``exhaustive`` every
    witness is collected (the decision is the same).
    """
    _check(p1, p2)
    if p1.is_empty or p2.is_empty:
        return Decision.exact_join()
    found = _conditions(p1, p2, exhaustive)
    if not found:
        return Decision.exact_join()
    return Decision.inexact(found if exhaustive else found[0])
