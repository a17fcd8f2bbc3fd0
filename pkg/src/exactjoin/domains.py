"""Uniform access to every shape domain by its text tag.

Each :class:`Domain` bundles the lattice operations, the exact join
test, witness construction and checking, and the brute-force oracle of
one domain so that the powerset, the CLI and the test suites can treat
all domains alike.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Callable, Sequence

from . import bd, boxes, certify, octagons, oracles
from .core import INF, Constraint, Decision, Disjoint, DomainFormError
from .nnc import NncPolyhedron, detect_exact_join_nnc
from .polyhedra import CPolyhedron, detect_exact_join_closed


def box_from_constraints(cs: Sequence[Constraint], dim: int, integer: bool = False) -> boxes.Box:
    """Box described by unary constraints; rejects anything else."""
    if integer:
        comps = [boxes.IntInterval.make(-INF, INF) for _ in range(dim)]
    else:
        comps = [boxes.NncInterval.universe() for _ in range(dim)]
    for c in cs:
        nz = [k for k, a in enumerate(c.coeffs) if a != 0]
        if len(nz) != 1:
            raise DomainFormError(f"not an interval constraint: {c}", c)
        k = nz[0]
        a = c.coeffs[k]
        b = c.bound / a
        if integer:
            if c.is_strict:
                raise DomainFormError(f"strict constraint in an integer box: {c}", c)
            if c.is_equality:
                piece = boxes.IntInterval.make(b, b)
            elif a > 0:
                piece = boxes.IntInterval.make(-INF, b)
            else:
                piece = boxes.IntInterval.make(b, INF)
        else:
            closed = not c.is_strict
            if c.is_equality:
                piece = boxes.NncInterval.closed(b, b)
            elif a > 0:
                piece = boxes.NncInterval.make(-INF, b, False, closed)
            else:
                piece = boxes.NncInterval.make(b, INF, closed, False)
        comps[k] = comps[k].meet(piece)
    return boxes.Box(comps)


def integer_complement(beta: Constraint) -> Constraint:
    """Complement of ``beta`` over the integers (integral coefficients and bound)."""
    if beta.is_equality or beta.is_strict:
        raise ValueError(f"no integer complement for {beta}")
    scale = math.lcm(*(Fraction(x).denominator for x in beta.coeffs))
    a = [x * scale for x in beta.coeffs]
    b = math.floor(beta.bound * scale)
    return Constraint.make(a, ">=", b + 1)


@dataclass(frozen=True)
class Domain:
    tag: str
    integer: bool
    detect: Callable[[Any, Any], Decision]
    from_constraints: Callable[[Sequence[Constraint], int], Any]
    constraints: Callable[[Any], list[Constraint]]
    witness: Callable[[Any, Any, Decision], Any]
    verify_witness: Callable[[Any, Any, Any], bool]
    join_constraints: Callable[[Any, Any], list[Constraint]]
    polyhedral: bool = False

    def join(self, a, b):
        return a.join(b)

    def includes(self, a, b) -> bool:
        return a.includes(b)

    def is_empty(self, a) -> bool:
        return a.is_empty

    def contains_point(self, a, p) -> bool:
        return a.contains_point(p)

    def meet(self, a, b):
        return a.meet(b)

    def key(self, a) -> str:
        return str(a)

    def oracle_exact(self, a, b) -> bool:
        """Independent exactness verdict by complement inclusion."""
        if a.is_empty or b.is_empty:
            return True
        if self.integer:
            dim = a.dim
            return covered_integer(self, self.join(a, b), [a, b], dim)
        dim = a.dim
        return oracles.complement_inclusion(
            self.join_constraints(a, b), self.constraints(a), self.constraints(b), dim
        )

    def covered(self, region, pieces: Sequence) -> bool:
        """``region`` (an element) lies inside the union of ``pieces``."""
        if self.integer:
            return covered_integer(self, region, list(pieces), region.dim)
        return oracles.covered(self.constraints(region), [self.constraints(p) for p in pieces], region.dim)


def covered_integer(dom: Domain, region, pieces: Sequence, dim: int) -> bool:
    """Integer covering through domain meets with integer complements."""
    if region.is_empty:
        return True
    if not pieces:
        return False
    first, rest = pieces[0], pieces[1:]
    for c in dom.constraints(first):
        for half in c.inequalities():
            part = region.meet(dom.from_constraints([integer_complement(half)], dim))
            if not covered_integer(dom, part, rest, dim):
                return False
    return True


# ---------------------------------------------------------------------------
# Witness helpers
# ---------------------------------------------------------------------------


def _box_witness(a, b, d: Decision):
    return boxes.box_witness_point(a, b, d.witness)


def _point_ok(a, b, p) -> bool:
    return a.join(b).contains_point(p) and not a.contains_point(p) and not b.contains_point(p)


def _bd_witness(a, b, d: Decision):
    return bd.build_separating_witness(a, b, *d.witness.indices)


def _oct_witness(a, b, d: Decision):
    return octagons.build_oct_witness(a, b, *d.witness.indices)


def _poly_witness(a, b, d: Decision):
    return certify.witness_point(a, b, d.witness)


def _poly_from_constraints(cls):
    def build(cs, dim):
        return cls.from_constraints(list(cs), dim)

    return build


def _template_join(octagonal: bool):
    def join_cs(a, b):
        forms = oracles.weakly_relational_forms(a.dim, octagonal)
        return oracles.template_join(a.constraints(), b.constraints(), forms)

    return join_cs


def _box_join_constraints(a, b):
    return a.join(b).constraints()


def _dd_join_constraints(a, b):
    return list(a.join(b).constraints)


def _constraints_attr(x):
    return list(x.constraints)


def _constraints_call(x):
    return x.constraints()


DOMAINS: dict[str, Domain] = {
    "box": Domain(
        "box", False, boxes.detect_exact_join_box,
        lambda cs, dim: box_from_constraints(cs, dim, False),
        _constraints_call, _box_witness, _point_ok, _box_join_constraints,
    ),
    "int_box": Domain(
        "int_box", True, boxes.detect_exact_join_box,
        lambda cs, dim: box_from_constraints(cs, dim, True),
        _constraints_call, _box_witness, _point_ok, _box_join_constraints,
    ),
    "bds": Domain(
        "bds", False, bd.detect_exact_join_bd,
        lambda cs, dim: bd.bd_from_constraints(cs, dim, False),
        _constraints_call, _bd_witness, bd.verify_bd_witness, _template_join(False),
    ),
    "int_bds": Domain(
        "int_bds", True, bd.detect_exact_join_int_bd,
        lambda cs, dim: bd.bd_from_constraints(cs, dim, True),
        _constraints_call, _bd_witness, bd.verify_bd_witness, _template_join(False),
    ),
    "oct": Domain(
        "oct", False, octagons.detect_exact_join_oct,
        lambda cs, dim: octagons.oct_from_constraints(cs, dim, False),
        _constraints_call, _oct_witness, octagons.verify_oct_witness, _template_join(True),
    ),
    "int_oct": Domain(
        "int_oct", True, octagons.detect_exact_join_int_oct,
        lambda cs, dim: octagons.oct_from_constraints(cs, dim, True),
        _constraints_call, _oct_witness, octagons.verify_oct_witness, _template_join(True),
    ),
    "cpoly": Domain(
        "cpoly", False, detect_exact_join_closed,
        _poly_from_constraints(CPolyhedron),
        _constraints_attr, _poly_witness, certify.verify_witness_point, _dd_join_constraints, True,
    ),
    "nncpoly": Domain(
        "nncpoly", False, detect_exact_join_nnc,
        _poly_from_constraints(NncPolyhedron),
        _constraints_attr, _poly_witness, certify.verify_witness_point, _dd_join_constraints, True,
    ),
}


def get_domain(tag: str) -> Domain:
    try:
        return DOMAINS[tag]
    except KeyError:
        raise ValueError(f"unknown domain {tag!r}; expected one of {', '.join(DOMAINS)}") from None


def witness_is_disjoint(w) -> bool:
    return isinstance(w, Disjoint)
