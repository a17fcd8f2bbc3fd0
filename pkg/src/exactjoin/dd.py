"""Double description conversion for polyhedral cones.

A cone is described either by constraints ``<c, y> >= 0`` / ``<c, y> = 0``
or by generators: rays (non-negative combinations) and lines (arbitrary
combinations).  :func:`cone_generators` turns constraints into a minimal
generator system by the incremental Motzkin method with the combinatorial
adjacency test; running it on the generators of a cone yields the
constraints of that cone (polar duality).

All vectors are tuples of Python ints, kept primitive (gcd 1).
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Iterable, Sequence

IntVec = tuple[int, ...]


def primitive(v: Iterable[int]) -> IntVec:
    v = tuple(v)
    g = 0
    for x in v:
        g = math.gcd(g, x)
    if g > 1:
        v = tuple(x // g for x in v)
    return v


def integral(v: Sequence[Fraction]) -> IntVec:
    """Scale a rational vector to a primitive integer vector (same direction)."""
    d = 1
    for x in v:
        d = math.lcm(d, Fraction(x).denominator)
    return primitive(int(Fraction(x) * d) for x in v)


def idot(a: Sequence[int], b: Sequence[int]) -> int:
    return sum(x * y for x, y in zip(a, b))


def _canonical_line(v: IntVec) -> IntVec:
    lead = next(x for x in v if x != 0)
    return v if lead > 0 else tuple(-x for x in v)


def cone_generators(dim: int, constraints: Sequence[tuple[IntVec, bool]]) -> tuple[list[IntVec], list[IntVec]]:
    """Minimal (rays, lines) of ``{y : <c, y> >= 0 (or = 0 if flagged)}``.

    ``constraints`` holds pairs (c, is_equality).
    """
    lines: list[IntVec] = [tuple(1 if k == i else 0 for k in range(dim)) for i in range(dim)]
    rays: list[IntVec] = []
    sats: list[int] = []  # bitmask of processed constraints saturated by each ray
    for idx, (c, is_eq) in enumerate(constraints):
        bit = 1 << idx
        pivot = next((l for l in lines if idot(c, l) != 0), None)
        if pivot is not None:
            cp = idot(c, pivot)
            if cp < 0:
                pivot = tuple(-x for x in pivot)
                cp = -cp
            new_lines = []
            for l in lines:
                if l is pivot or l == pivot or l == tuple(-x for x in pivot):
                    continue
                cl = idot(c, l)
                if cl:
                    l = primitive(cp * x - cl * y for x, y in zip(l, pivot))
                new_lines.append(l)
            lines = new_lines
            new_rays = []
            for r in rays:
                cr = idot(c, r)
                if cr:
                    r = primitive(cp * x - cr * y for x, y in zip(r, pivot))
                new_rays.append(r)
            rays = new_rays
            sats = [s | bit for s in sats]
            if not is_eq:
                rays.append(primitive(pivot))
                # the pivot saturates every earlier constraint (it was a line) but not this one
                sats.append((bit - 1))
            continue
        vals = [idot(c, r) for r in rays]
        pos = [i for i, v in enumerate(vals) if v > 0]
        neg = [i for i, v in enumerate(vals) if v < 0]
        zero = [i for i, v in enumerate(vals) if v == 0]
        if not neg and not is_eq:
            sats = [s | bit if vals[i] == 0 else s for i, s in enumerate(sats)]
            continue
        # adjacency: no third ray saturates everything the pair saturates
        need = dim - len(lines) - 2
        created: list[IntVec] = []
        created_sats: list[int] = []
        for p in pos:
            for q in neg:
                common = sats[p] & sats[q]
                if bin(common).count("1") < need:
                    continue
                adjacent = True
                for r in range(len(rays)):
                    if r != p and r != q and (sats[r] & common) == common:
                        adjacent = False
                        break
                if not adjacent:
                    continue
                vp, vq = vals[p], -vals[q]
                new = primitive(vp * x + vq * y for x, y in zip(rays[q], rays[p]))
                created.append(new)
                created_sats.append(common | bit)
        keep = zero + ([] if is_eq else pos)
        next_rays = [rays[i] for i in keep]
        next_sats = [sats[i] | bit if vals[i] == 0 else sats[i] for i in keep]
        rays = next_rays + created
        sats = next_sats + created_sats
    # drop duplicates that can arise from degenerate inputs
    seen: dict[IntVec, None] = {}
    for r in rays:
        seen.setdefault(r, None)
    return list(seen), [_canonical_line(l) for l in lines]


def cone_constraints(dim: int, rays: Sequence[IntVec], lines: Sequence[IntVec]) -> tuple[list[IntVec], list[IntVec]]:
    """Minimal (inequalities, equalities) of the cone generated by rays and lines."""
    gens = [(tuple(r), False) for r in rays] + [(tuple(l), True) for l in lines]
    return cone_generators(dim, gens)
