"""Witness points for inexact polyhedral joins.

Given the (constraint, generator) pair returned by a detection routine,
build an explicit rational point that lies in the join of the two
operands but in neither operand.  The construction follows the usual
argument: start from a point (or closure point) ``u`` of the first
operand on the boundary of ``beta`` that is outside the closure of the
second operand, and move a little towards a point of the second operand
that violates ``beta``.  Every candidate is checked exactly, so a
returned point is always a genuine witness.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

from .core import Constraint, dot
from .polyhedra import PolyhedronBase, PolyWitness

Point = tuple[Fraction, ...]

_MAX_HALVINGS = 80


def _axpy(t: Fraction, x: Sequence[Fraction], y: Sequence[Fraction]) -> Point:
    """``y + t * (x - y)``."""
    return tuple(b + t * (a - b) for a, b in zip(x, y))


def _violates_point(beta: Constraint, x: Sequence[Fraction]) -> bool:
    v = beta.value(x)
    return v >= beta.bound if beta.is_strict else v > beta.bound


def _violating_point(p: PolyhedronBase, beta: Constraint) -> Point | None:
    """A point of ``p`` that violates the single inequality ``beta``."""
    for q in p.points:
        if _violates_point(beta, q):
            return q
    base = p.points[0]
    a, b = beta.coeffs, beta.bound
    for r in p.rays:
        ar = dot(a, r)
        if ar > 0:
            lam = max(Fraction(0), (b - dot(a, base)) / ar) + 1
            return tuple(x + lam * y for x, y in zip(base, r))
    for c in p.closure_points:
        if dot(a, c) > b:
            t = Fraction(1, 2)
            for _ in range(_MAX_HALVINGS):
                q = _axpy(t, base, c)
                if _violates_point(beta, q):
                    return q
                t /= 2
    return None


def _outside_closure_constraint(p: PolyhedronBase, x: Sequence[Fraction]) -> Constraint | None:
    for c in p.constraints:
        for half in c.inequalities():
            if half.value(x) > half.bound:
                return half
    return None


def _ray_anchor(pi: PolyhedronBase, pj: PolyhedronBase, beta: Constraint, r: Point):
    """Turn a ray witness into a boundary anchor point.

    Returns ``(beta', u)``: ``beta'`` is valid for ``pi`` and
    violated by ``pj``, ``u`` lies in the closure of ``pi``, saturates
    ``beta'`` and is outside the closure of ``pj``.
    """
    a = beta.coeffs
    cands = [(dot(a, q), 0, q) for q in pi.points] + [(dot(a, c), 1, c) for c in pi.closure_points]
    m, _, base = max(cands, key=lambda t: (t[0], -t[1]))
    if m == beta.bound:
        beta2 = beta
    else:
        beta2 = Constraint.make(a, "<=", m)
    gamma = None
    for c in pj.constraints:
        for half in c.inequalities():
            if dot(half.coeffs, r) > 0:
                gamma = half
                break
        if gamma is not None:
            break
    if gamma is None:
        raise ValueError("ray is a ray of the other operand")
    ar = dot(gamma.coeffs, r)
    rho = max(Fraction(0), (gamma.bound - gamma.value(base)) / ar) + 1
    u = tuple(x + rho * y for x, y in zip(base, r))
    return beta2, u


def _approach(pi: PolyhedronBase, pj: PolyhedronBase, u: Point, p2: Point) -> Point | None:
    """Search the half-open segment from ``u`` (closure of ``pi``) to ``p2`` (point of ``pj``).

    Every point of that segment other than ``u`` lies in the join.
    """
    t = Fraction(1, 2)
    for _ in range(_MAX_HALVINGS):
        x = _axpy(t, p2, u)
        if not pi.contains_point(x) and not pj.contains_point(x):
            return x
        t /= 2
    return None


def _hyperplane_witness(p1, p2, w: PolyWitness) -> Point | None:
    """Point for the strict-hyperplane condition: on the hyperplane, in the join, outside ``P_j``."""
    pj = (p1, p2)[1 - w.first]
    h = w.beta.hyperplane()
    jh = p1.join(p2).add_constraints([h])
    pjh = pj.add_constraints([h])
    if jh.is_empty:
        return None
    x0 = jh.points[0]
    for g in jh.generators():
        if pjh.subsumes(g):
            continue
        if g.kind == "point":
            return g.coords
        if g.kind == "closure_point":
            t = Fraction(1, 2)
            for _ in range(_MAX_HALVINGS):
                x = _axpy(t, x0, g.coords)
                if not pj.contains_point(x):
                    return x
                t /= 2
        else:
            lam = Fraction(1)
            for _ in range(_MAX_HALVINGS):
                x = tuple(a + lam * b for a, b in zip(x0, g.coords))
                if not pj.contains_point(x):
                    return x
                lam *= 2
    return None


def witness_point(p1: PolyhedronBase, p2: PolyhedronBase, w: PolyWitness) -> Point:
    """A point in the join of ``p1`` and ``p2`` that lies in neither.

    Raises ``ValueError`` if ``w`` is not a valid inexactness witness.
    """
    if w.condition == 3:
        x = _hyperplane_witness(p1, p2, w)
    else:
        pi, pj = (p1, p2)[w.first], (p1, p2)[1 - w.first]
        g = w.g
        if g is None:
            raise ValueError("witness carries no generator")
        if g.kind == "ray":
            beta, u = _ray_anchor(pi, pj, w.beta, g.coords)
        else:
            beta, u = w.beta, g.coords
        if _outside_closure_constraint(pj, u) is None:
            x = None
        else:
            p2pt = _violating_point(pj, beta)
            x = None if p2pt is None else _approach(pi, pj, u, p2pt)
    if x is None or not verify_witness_point(p1, p2, x):
        raise ValueError("not an inexactness witness")
    return x


def verify_witness_point(p1: PolyhedronBase, p2: PolyhedronBase, x: Sequence[Fraction]) -> bool:
    """``x`` is in the join and outside both operands."""
    return p1.join(p2).contains_point(x) and not p1.contains_point(x) and not p2.contains_point(x)
