"""Intervals, boxes and exact join detection for Cartesian products.

A box is a product of one-dimensional elements drawn from a single 1-D
domain.  The exact-join test only needs five operations from that domain
(join, inclusion, equality, emptiness and the 1-D union-equals-join test),
collected in :class:`Interval1D`.  Two instantiations ship here:
possibly-open rational intervals (:class:`NncInterval`) and integer
intervals (:class:`IntInterval`).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Iterable, Protocol, Sequence, TypeVar

from .core import INF, Constraint, Decision, DimensionError, Q, braced, format_rational

T = TypeVar("T", bound="Interval1D")


class Interval1D(Protocol):
    """What a 1-D domain must provide to be used as a box component."""

    @property
    def is_empty(self) -> bool: ...

    def join(self: T, other: T) -> T: ...

    def includes(self: T, other: T) -> bool:
        """``other`` is a subset of ``self``."""
        ...

    def union_is_join(self: T, other: T) -> bool: ...

    def contains_value(self, v: Fraction) -> bool: ...


def _bound(v: Any) -> Fraction | float:
    if isinstance(v, float) and math.isinf(v):
        return v
    return Q(v)


# ---------------------------------------------------------------------------
# Rational intervals with open/closed ends
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class NncInterval:
    """Rational interval with independently open or closed ends.

    ``lo``/``hi`` may be -inf/+inf, in which case that end is open.  The
    empty interval is the canonical ``NncInterval.empty()``.
    """

    lo: Fraction | float
    hi: Fraction | float
    lo_closed: bool = True
    hi_closed: bool = True
    empty_: bool = False

    @classmethod
    def make(cls, lo: Any, hi: Any, lo_closed: bool = True, hi_closed: bool = True) -> "NncInterval":
        lo, hi = _bound(lo), _bound(hi)
        if lo == INF or hi == -INF:
            return cls.empty()
        lo_closed = lo_closed and lo != -INF
        hi_closed = hi_closed and hi != INF
        if lo > hi or (lo == hi and not (lo_closed and hi_closed)):
            return cls.empty()
        return cls(lo, hi, lo_closed, hi_closed)

    @classmethod
    def closed(cls, lo: Any, hi: Any) -> "NncInterval":
        return cls.make(lo, hi, True, True)

    @classmethod
    def empty(cls) -> "NncInterval":
        return cls(INF, -INF, False, False, True)

    @classmethod
    def universe(cls) -> "NncInterval":
        return cls(-INF, INF, False, False)

    @property
    def is_empty(self) -> bool:
        return self.empty_

    def contains_value(self, v: Fraction) -> bool:
        if self.empty_:
            return False
        above = v > self.lo or (self.lo_closed and v == self.lo)
        below = v < self.hi or (self.hi_closed and v == self.hi)
        return above and below

    def join(self, other: "NncInterval") -> "NncInterval":
        if self.empty_:
            return other
        if other.empty_:
            return self
        if self.lo == other.lo:
            lo, lo_closed = self.lo, self.lo_closed or other.lo_closed
        else:
            lo, lo_closed = min((self.lo, self.lo_closed), (other.lo, other.lo_closed))
        if self.hi == other.hi:
            hi, hi_closed = self.hi, self.hi_closed or other.hi_closed
        elif self.hi > other.hi:
            hi, hi_closed = self.hi, self.hi_closed
        else:
            hi, hi_closed = other.hi, other.hi_closed
        return NncInterval(lo, hi, lo_closed, hi_closed)

    def meet(self, other: "NncInterval") -> "NncInterval":
        if self.empty_ or other.empty_:
            return NncInterval.empty()
        if self.lo == other.lo:
            lo, lo_closed = self.lo, self.lo_closed and other.lo_closed
        elif self.lo > other.lo:
            lo, lo_closed = self.lo, self.lo_closed
        else:
            lo, lo_closed = other.lo, other.lo_closed
        if self.hi == other.hi:
            hi, hi_closed = self.hi, self.hi_closed and other.hi_closed
        elif self.hi < other.hi:
            hi, hi_closed = self.hi, self.hi_closed
        else:
            hi, hi_closed = other.hi, other.hi_closed
        return NncInterval.make(lo, hi, lo_closed, hi_closed)

    def includes(self, other: "NncInterval") -> bool:
        if other.empty_:
            return True
        if self.empty_:
            return False
        lo_ok = self.lo < other.lo or (self.lo == other.lo and (self.lo_closed or not other.lo_closed))
        hi_ok = self.hi > other.hi or (self.hi == other.hi and (self.hi_closed or not other.hi_closed))
        return lo_ok and hi_ok

    def union_is_join(self, other: "NncInterval") -> bool:
        if self.empty_ or other.empty_:
            return True
        a, b = (self, other) if (self.lo, not self.lo_closed) <= (other.lo, not other.lo_closed) else (other, self)
        # a starts no later than b; the union is convex iff no gap separates them
        if a.hi > b.lo:
            return True
        return a.hi == b.lo and (a.hi_closed or b.lo_closed)

    def constraints(self, index: int, dim: int) -> list[Constraint]:
        cs = []
        unit = [0] * dim
        unit[index] = 1
        if self.lo != -INF:
            cs.append(Constraint.make(unit, ">=" if self.lo_closed else ">", self.lo))
        if self.hi != INF:
            cs.append(Constraint.make(unit, "<=" if self.hi_closed else "<", self.hi))
        return cs

    def __str__(self) -> str:
        if self.empty_:
            return "empty"
        return (
            ("[" if self.lo_closed else "(")
            + f"{format_rational(self.lo)}, {format_rational(self.hi)}"
            + ("]" if self.hi_closed else ")")
        )


# ---------------------------------------------------------------------------
# Integer intervals
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class IntInterval:
    """Set of integers between ``lo`` and ``hi`` inclusive (ends may be infinite)."""

    lo: int | float
    hi: int | float
    empty_: bool = False

    @classmethod
    def make(cls, lo: Any, hi: Any) -> "IntInterval":
        lo = lo if lo == -INF else math.ceil(Q(lo)) if lo != INF else INF
        hi = hi if hi == INF else math.floor(Q(hi)) if hi != -INF else -INF
        if lo > hi:
            return cls.empty()
        return cls(lo, hi)

    @classmethod
    def empty(cls) -> "IntInterval":
        return cls(INF, -INF, True)

    @property
    def is_empty(self) -> bool:
        return self.empty_

    def contains_value(self, v: Fraction) -> bool:
        if self.empty_ or Q(v).denominator != 1:
            return False
        return self.lo <= v <= self.hi

    def join(self, other: "IntInterval") -> "IntInterval":
        if self.empty_:
            return other
        if other.empty_:
            return self
        return IntInterval(min(self.lo, other.lo), max(self.hi, other.hi))

    def meet(self, other: "IntInterval") -> "IntInterval":
        if self.empty_ or other.empty_:
            return IntInterval.empty()
        return IntInterval.make(max(self.lo, other.lo), min(self.hi, other.hi))

    def includes(self, other: "IntInterval") -> bool:
        if other.empty_:
            return True
        if self.empty_:
            return False
        return self.lo <= other.lo and other.hi <= self.hi

    def union_is_join(self, other: "IntInterval") -> bool:
        if self.empty_ or other.empty_:
            return True
        a, b = (self, other) if self.lo <= other.lo else (other, self)
        return a.hi + 1 >= b.lo

    def constraints(self, index: int, dim: int) -> list[Constraint]:
        cs = []
        unit = [0] * dim
        unit[index] = 1
        if self.lo != -INF:
            cs.append(Constraint.make(unit, ">=", self.lo))
        if self.hi != INF:
            cs.append(Constraint.make(unit, "<=", self.hi))
        return cs

    def __str__(self) -> str:
        if self.empty_:
            return "empty"
        return f"[{format_rational(self.lo)}, {format_rational(self.hi)}]"


def interval_join(a: T, b: T) -> T:
    """Least 1-D element containing both ``a`` and ``b``."""
    return a.join(b)


def interval_join_exact(a: T, b: T) -> bool:
    """True iff the 1-D join of ``a`` and ``b`` equals their union."""
    return a.union_is_join(b)


# ---------------------------------------------------------------------------
# Boxes
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Box:
    """Cartesian product of 1-D elements, all taken from one 1-D domain."""

    components: tuple

    def __init__(self, components: Iterable[Interval1D]):
        comps = tuple(components)
        if not comps:
            raise ValueError("a box needs at least one dimension")
        kinds = {type(c) for c in comps}
        if len(kinds) != 1:
            raise TypeError("box components must come from a single 1-D domain")
        if any(c.is_empty for c in comps):
            kind = comps[0]
            comps = tuple(type(kind).empty() for _ in comps)
        object.__setattr__(self, "components", comps)

    @classmethod
    def closed(cls, bounds: Sequence[tuple[Any, Any]]) -> "Box":
        return cls(NncInterval.closed(lo, hi) for lo, hi in bounds)

    @classmethod
    def integer(cls, bounds: Sequence[tuple[Any, Any]]) -> "Box":
        return cls(IntInterval.make(lo, hi) for lo, hi in bounds)

    @property
    def dim(self) -> int:
        return len(self.components)

    @property
    def is_empty(self) -> bool:
        return self.components[0].is_empty

    @property
    def is_integer(self) -> bool:
        return isinstance(self.components[0], IntInterval)

    def project(self, i: int) -> Interval1D:
        return self.components[i]

    def join(self, other: "Box") -> "Box":
        _same_domain(self, other)
        if self.is_empty:
            return other
        if other.is_empty:
            return self
        return Box(a.join(b) for a, b in zip(self.components, other.components))

    def meet(self, other: "Box") -> "Box":
        _same_domain(self, other)
        return Box(a.meet(b) for a, b in zip(self.components, other.components))

    def includes(self, other: "Box") -> bool:
        _same_domain(self, other)
        if other.is_empty:
            return True
        return all(a.includes(b) for a, b in zip(self.components, other.components))

    def contains_point(self, p: Sequence[Fraction]) -> bool:
        return all(c.contains_value(v) for c, v in zip(self.components, p))

    def constraints(self) -> list[Constraint]:
        out: list[Constraint] = []
        for i, c in enumerate(self.components):
            out.extend(c.constraints(i, self.dim))
        return out

    def __str__(self) -> str:
        head = "int_box" if self.is_integer else "box"
        return braced(head, (f"x{i + 1} in {c}" for i, c in enumerate(self.components)))


def _same_domain(b1: Box, b2: Box) -> None:
    if b1.dim != b2.dim:
        raise DimensionError(f"dimension mismatch: {b1.dim} vs {b2.dim}")
    if type(b1.components[0]) is not type(b2.components[0]):
        raise TypeError("boxes over different 1-D domains")


@dataclass(frozen=True)
class BoxWitness:
    """Which condition certified inexactness and on which indices (0-based)."""

    condition: int
    indices: tuple[int, ...]


def detect_exact_join_box(b1: Box, b2: Box) -> Decision:
    """Decide whether the box join of ``b1`` and ``b2`` equals their union.

    The join is inexact iff some dimension has a non-convex 1-D union, or
    there are two distinct dimensions i, j such that b1 sticks out of b2
    along i and b2 sticks out of b1 along j.  Uses at most n 1-D joins and
    2n 1-D inclusion tests.
    """
    _same_domain(b1, b2)
    if b1.is_empty or b2.is_empty:
        return Decision.exact_join()
    for i, (a, b) in enumerate(zip(b1.components, b2.components)):
        if not a.union_is_join(b):
            return Decision.inexact(BoxWitness(1, (i,)))
    sticks_out_1 = [i for i in range(b1.dim) if not b2.components[i].includes(b1.components[i])]
    sticks_out_2 = [j for j in range(b1.dim) if not b1.components[j].includes(b2.components[j])]
    for i in sticks_out_1:
        for j in sticks_out_2:
            if i != j:
                return Decision.inexact(BoxWitness(2, (i, j)))
    return Decision.exact_join()


def box_witness_point(b1: Box, b2: Box, witness: BoxWitness) -> tuple[Fraction, ...]:
    """A point of the join lying in neither box, built as in the proof.

    Only available for rational and integer intervals, which expose
    enough structure to pick sample values.
    """
    comps1, comps2 = b1.components, b2.components
    if witness.condition == 1:
        (i,) = witness.indices
        v = _gap_value(comps1[i], comps2[i])
        base = [_sample(c) for c in comps1]
        base[i] = v
        return tuple(base)
    i, j = witness.indices
    base = [_sample(c) for c in comps1]
    base[i] = _sample_difference(comps1[i], comps2[i])
    base[j] = _sample_difference(comps2[j], comps1[j])
    return tuple(base)


def _sample(c) -> Fraction:
    if isinstance(c, IntInterval):
        if c.lo != -INF:
            return Fraction(c.lo)
        return Fraction(c.hi) if c.hi != INF else Fraction(0)
    lo, hi = c.lo, c.hi
    if lo != -INF and hi != INF:
        if c.lo_closed:
            return lo
        if c.hi_closed:
            return hi
        return (lo + hi) / 2
    if lo != -INF:
        return lo if c.lo_closed else lo + 1
    if hi != INF:
        return hi if c.hi_closed else hi - 1
    return Fraction(0)


def _candidates(c) -> list[Fraction]:
    """A finite set of values meeting every piece of ``c`` cut at its own ends."""
    if c.is_empty:
        return []
    vals = []
    for v in (c.lo, c.hi):
        if v not in (INF, -INF):
            vals += [Fraction(v), Fraction(v) - Fraction(1, 2), Fraction(v) + Fraction(1, 2),
                     Fraction(v) - 1, Fraction(v) + 1]
    if not vals:
        vals = [Fraction(0)]
    return vals


def _sample_difference(a, b) -> Fraction:
    """A value in ``a`` but not in ``b``."""
    pool = sorted(set(_candidates(a) + _candidates(b)))
    # refine between consecutive candidates so open gaps are hit
    refined = set(pool)
    for x, y in zip(pool, pool[1:]):
        refined.add((x + y) / 2)
    for v in sorted(refined):
        if a.contains_value(v) and not b.contains_value(v):
            return v
    raise ValueError("no separating value found")


def _gap_value(a, b) -> Fraction:
    j = a.join(b)
    pool = sorted(set(_candidates(a) + _candidates(b)))
    refined = set(pool)
    for x, y in zip(pool, pool[1:]):
        refined.add((x + y) / 2)
    for v in sorted(refined):
        if j.contains_value(v) and not a.contains_value(v) and not b.contains_value(v):
            return v
    raise ValueError("no gap value found")
