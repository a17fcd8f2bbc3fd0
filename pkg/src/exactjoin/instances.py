"""Seeded random instances with small integer data.

Pairs are drawn so that both verdicts occur often: besides independent
draws, some pairs are made by cutting one shape in two, or by sharing
most of the constraints, which tends to produce exact joins.
"""

from __future__ import annotations

import random
from fractions import Fraction

from .bd import BdShape, bd_from_constraints
from .boxes import Box, IntInterval, NncInterval
from .core import INF, Constraint
from .nnc import NncPolyhedron
from .octagons import OctShape, oct_from_constraints
from .polyhedra import CPolyhedron


def random_box(rng: random.Random, dim: int, integer: bool = False, lo: int = -5, hi: int = 5,
               unbounded_p: float = 0.1) -> Box:
    comps = []
    for _ in range(dim):
        a, b = sorted(rng.randint(lo, hi) for _ in range(2))
        a = -INF if rng.random() < unbounded_p else a
        b = INF if rng.random() < unbounded_p else b
        if integer:
            comps.append(IntInterval.make(a, b))
        else:
            lc, hc = rng.random() < 0.6, rng.random() < 0.6
            if a == b:
                lc = hc = True
            comps.append(NncInterval.make(a, b, lc, hc))
    return Box(comps)


def random_box_pair(rng: random.Random, dim: int, integer: bool = False, **kw) -> tuple[Box, Box]:
    b1 = random_box(rng, dim, integer, **kw)
    if rng.random() < 0.4:
        # perturb a single component so the pair is often exact
        b2 = list(random_box(rng, dim, integer, **kw).components)
        keep = rng.randrange(dim)
        comps = list(b1.components)
        comps[keep] = b2[keep]
        return b1, Box(comps)
    return b1, random_box(rng, dim, integer, **kw)


def _unit(dim: int, terms: dict[int, int]) -> tuple[int, ...]:
    return tuple(terms.get(k, 0) for k in range(dim))


def random_bd_constraints(rng: random.Random, dim: int, lo: int, hi: int, count: int,
                          bounded: bool = False) -> list[Constraint]:
    cs = []
    for _ in range(count):
        i, j = rng.sample(range(dim + 1), 2)
        terms = {}
        if i:
            terms[i - 1] = 1
        if j:
            terms[j - 1] = -1
        cs.append(Constraint.make(_unit(dim, terms), "<=", rng.randint(lo, hi)))
    if bounded:
        for k in range(dim):
            u = rng.randint(0, hi)
            cs.append(Constraint.make(_unit(dim, {k: 1}), "<=", u))
            cs.append(Constraint.make(_unit(dim, {k: -1}), "<=", rng.randint(0, -lo) if lo < 0 else 0))
    return cs


def random_bd(rng: random.Random, dim: int, integer: bool = False, lo: int = -3, hi: int = 3,
              bounded: bool = False, tries: int = 50) -> BdShape:
    for _ in range(tries):
        count = rng.randint(1, dim * (dim + 1))
        s = bd_from_constraints(random_bd_constraints(rng, dim, lo, hi, count, bounded), dim, integer)
        if not s.is_empty:
            return s
    return BdShape.universe(dim, integer)


def random_bd_pair(rng: random.Random, dim: int, integer: bool = False, **kw) -> tuple[BdShape, BdShape]:
    a = random_bd(rng, dim, integer, **kw)
    if rng.random() < 0.3:
        # cut along one difference: often exact
        i, j = rng.sample(range(dim + 1), 2)
        terms = {}
        if i:
            terms[i - 1] = 1
        if j:
            terms[j - 1] = -1
        c = rng.randint(-2, 2)
        lo_part = a.meet(bd_from_constraints([Constraint.make(_unit(dim, terms), "<=", c)], dim, integer))
        hi_part = a.meet(bd_from_constraints([Constraint.make(_unit(dim, terms), ">=", c)], dim, integer))
        if not lo_part.is_empty and not hi_part.is_empty:
            return lo_part, hi_part
    return a, random_bd(rng, dim, integer, **kw)


def _oct_form(rng: random.Random, dim: int) -> tuple[int, ...]:
    if dim == 1 or rng.random() < 0.4:
        return _unit(dim, {rng.randrange(dim): rng.choice((1, -1))})
    i, j = rng.sample(range(dim), 2)
    return _unit(dim, {i: rng.choice((1, -1)), j: rng.choice((1, -1))})


def random_oct(rng: random.Random, dim: int, integer: bool = False, lo: int = -3, hi: int = 3,
               bounded: bool = False, tries: int = 50) -> OctShape:
    for _ in range(tries):
        cs = [Constraint.make(_oct_form(rng, dim), "<=", rng.randint(lo, hi))
              for _ in range(rng.randint(1, 2 * dim * dim))]
        if bounded:
            for k in range(dim):
                cs.append(Constraint.make(_unit(dim, {k: 1}), "<=", rng.randint(0, hi)))
                cs.append(Constraint.make(_unit(dim, {k: -1}), "<=", rng.randint(0, -lo)))
        s = oct_from_constraints(cs, dim, integer)
        if not s.is_empty:
            return s
    return oct_from_constraints([], dim, integer)


def random_oct_pair(rng: random.Random, dim: int, integer: bool = False, **kw) -> tuple[OctShape, OctShape]:
    a = random_oct(rng, dim, integer, **kw)
    if rng.random() < 0.3:
        f = _oct_form(rng, dim)
        c = rng.randint(-2, 2)
        p = a.meet(oct_from_constraints([Constraint.make(f, "<=", c)], dim, integer))
        q = a.meet(oct_from_constraints([Constraint.make(f, ">=", c)], dim, integer))
        if not p.is_empty and not q.is_empty:
            return p, q
    return a, random_oct(rng, dim, integer, **kw)


def random_linear_constraints(rng: random.Random, dim: int, count: int, lo: int = -3, hi: int = 3,
                              strict_p: float = 0.0) -> list[Constraint]:
    cs = []
    while len(cs) < count:
        a = [rng.randint(lo, hi) for _ in range(dim)]
        if not any(a):
            continue
        rel = "<" if rng.random() < strict_p else "<="
        cs.append(Constraint.make(a, rel, rng.randint(lo, hi)))
    return cs


def random_polyhedron(rng: random.Random, dim: int, nnc: bool = False, max_constraints: int = 6,
                      tries: int = 100):
    cls = NncPolyhedron if nnc else CPolyhedron
    for _ in range(tries):
        cs = random_linear_constraints(rng, dim, rng.randint(1, max_constraints), strict_p=0.4 if nnc else 0.0)
        p = cls.from_constraints(cs, dim)
        if not p.is_empty:
            return p
    return cls.universe(dim)


def random_polyhedron_pair(rng: random.Random, dim: int, nnc: bool = False, max_constraints: int = 6):
    cls = NncPolyhedron if nnc else CPolyhedron
    r = rng.random()
    if r < 0.3:
        base = random_linear_constraints(rng, dim, rng.randint(0, max_constraints - 1), strict_p=0.4 if nnc else 0.0)
        (cut,) = random_linear_constraints(rng, dim, 1)
        rel_a, rel_b = "<=", ">="
        if nnc and rng.random() < 0.5:
            rel_a, rel_b = rng.choice([("<", ">="), ("<=", ">"), ("<", ">")])
        p = cls.from_constraints(base + [Constraint.make(cut.coeffs, rel_a, cut.bound)], dim)
        q = cls.from_constraints(base + [Constraint.make(cut.coeffs, rel_b, cut.bound)], dim)
        if not p.is_empty and not q.is_empty:
            return p, q
    if r < 0.5:
        shared = random_linear_constraints(rng, dim, rng.randint(1, max_constraints - 1), strict_p=0.4 if nnc else 0.0)
        extra = random_linear_constraints(rng, dim, 2, strict_p=0.4 if nnc else 0.0)
        p = cls.from_constraints(shared + extra[:1], dim)
        q = cls.from_constraints(shared + extra[1:], dim)
        if not p.is_empty and not q.is_empty:
            return p, q
    return random_polyhedron(rng, dim, nnc, max_constraints), random_polyhedron(rng, dim, nnc, max_constraints)


def random_generator_polytope(rng: random.Random, dim: int, points: int = 5, lo: int = -3, hi: int = 3) -> CPolyhedron:
    pts = [tuple(Fraction(rng.randint(lo, hi)) for _ in range(dim)) for _ in range(points)]
    rays = []
    if rng.random() < 0.3:
        r = tuple(Fraction(rng.randint(-1, 1)) for _ in range(dim))
        if any(r):
            rays.append(r)
    return CPolyhedron.from_generators(dim, pts, rays)


def random_pair(rng: random.Random, tag: str, dim: int):
    """A random pair of shapes of the domain named ``tag``."""
    if tag in ("box", "int_box"):
        return random_box_pair(rng, dim, tag == "int_box")
    if tag in ("bds", "int_bds"):
        return random_bd_pair(rng, dim, tag == "int_bds")
    if tag in ("oct", "int_oct"):
        return random_oct_pair(rng, dim, tag == "int_oct")
    if tag in ("cpoly", "nncpoly"):
        return random_polyhedron_pair(rng, dim, tag == "nncpoly")
    raise ValueError(f"unknown domain {tag!r}")
