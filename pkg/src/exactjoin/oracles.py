"""Brute-force oracles for the exact join predicates.

Two independent routes:

* complement inclusion: the join ``J`` of ``A`` and ``B`` is exact iff
  ``J`` minus ``A`` is inside ``B``, i.e. ``J`` meets no ``not beta and
  not gamma`` region for ``beta`` of ``A`` and ``gamma`` of ``B``.  Every
  region is a conjunction of (possibly strict) linear constraints whose
  emptiness is decided by exact Fourier-Motzkin elimination.
* grid enumeration: test every point of a regular grid inside a bounding
  box.  Exact for bounded integer shapes at step 1, a falsifier otherwise.

Neither route uses the double description code or the graph closures;
the weakly relational joins are recomputed here by maximizing each
difference or sum over the operands with Fourier-Motzkin projection.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Sequence

from .core import INF, Constraint

# A working row: (coeffs, bound, strict) meaning <coeffs, x> <= bound (or <).
_Row = tuple[tuple[Fraction, ...], Fraction, bool]


def _rows(cs: Iterable[Constraint]) -> list[_Row]:
    out = []
    for c in cs:
        for half in c.inequalities():
            out.append((half.coeffs, half.bound, half.is_strict))
    return out


def _normalize(row: _Row, k: int) -> _Row:
    a, b, s = row
    scale = abs(a[k])
    return tuple(x / scale for x in a), b / scale, s


def _add(rows: dict, row: _Row) -> bool:
    """Insert ``row`` keeping only the tightest bound per direction; False on a contradiction."""
    a, b, s = row
    if all(x == 0 for x in a):
        return b > 0 or (b == 0 and not s)
    lead = next(abs(x) for x in a if x != 0)
    a = tuple(x / lead for x in a)
    b = b / lead
    old = rows.get(a)
    if old is None or b < old[0] or (b == old[0] and s and not old[1]):
        rows[a] = (b, s)
    return True


def _eliminate(rows: dict, k: int) -> dict | None:
    pos, neg, out = [], [], {}
    for a, (b, s) in rows.items():
        if a[k] > 0:
            pos.append(_normalize((a, b, s), k))
        elif a[k] < 0:
            neg.append(_normalize((a, b, s), k))
        else:
            out[a] = (b, s)
    for (ap, bp, sp), (an, bn, sn) in itertools.product(pos, neg):
        row = (tuple(x + y for x, y in zip(ap, an)), bp + bn, sp or sn)
        if not _add(out, row):
            return None
    return out


def fm_is_empty(cs: Iterable[Constraint], dim: int) -> bool:
    """Rational emptiness of a conjunction of linear constraints."""
    rows: dict = {}
    for row in _rows(cs):
        if not _add(rows, row):
            return True
    for k in range(dim):
        rows = _eliminate(rows, k)
        if rows is None:
            return True
    return False


def fm_sup(cs: Sequence[Constraint], form: Sequence[Fraction]) -> Fraction | float | None:
    """Supremum of ``<form, x>`` over the constraints; ``None`` if empty, ``INF`` if unbounded."""
    dim = len(form)
    if fm_is_empty(cs, dim):
        return None
    rows: dict = {}
    # extra last variable t with t = <form, x>
    for a, b, s in _rows(cs):
        if not _add(rows, (tuple(a) + (Fraction(0),), b, s)):
            return None
    f = tuple(Fraction(x) for x in form)
    for sign in (1, -1):
        if not _add(rows, (tuple(-sign * x for x in f) + (Fraction(sign),), Fraction(0), False)):
            return None
    for k in range(dim):
        rows = _eliminate(rows, k)
        if rows is None:
            return None
    upper = INF
    for a, (b, s) in rows.items():
        if a[-1] > 0:
            upper = min(upper, b / a[-1])
    return upper


# ---------------------------------------------------------------------------
# Covering and complement inclusion
# ---------------------------------------------------------------------------


def covered(region: list[Constraint], pieces: Sequence[Sequence[Constraint]], dim: int) -> bool:
    """``region`` is inside the union of the polyhedra ``pieces`` (rational)."""
    if fm_is_empty(region, dim):
        return True
    if not pieces:
        return False
    first, rest = pieces[0], pieces[1:]
    for c in first:
        for half in c.inequalities():
            if not covered(region + [half.complement()], rest, dim):
                return False
    return True


def complement_inclusion(
    join_cs: Sequence[Constraint], a_cs: Sequence[Constraint], b_cs: Sequence[Constraint], dim: int
) -> bool:
    """True iff the join described by ``join_cs`` equals the union of A and B."""
    return covered(list(join_cs), [a_cs, b_cs], dim)


def _unit(dim: int, terms: dict[int, int]) -> tuple[Fraction, ...]:
    return tuple(Fraction(terms.get(k, 0)) for k in range(dim))


def weakly_relational_forms(dim: int, octagonal: bool) -> list[tuple[Fraction, ...]]:
    """The linear forms of BD (``x_i``, ``-x_i``, ``x_i - x_j``) or octagonal constraints."""
    forms = []
    for i in range(dim):
        forms.append(_unit(dim, {i: 1}))
        forms.append(_unit(dim, {i: -1}))
    for i, j in itertools.permutations(range(dim), 2):
        forms.append(_unit(dim, {i: 1, j: -1}))
    if octagonal:
        for i, j in itertools.combinations(range(dim), 2):
            forms.append(_unit(dim, {i: 1, j: 1}))
            forms.append(_unit(dim, {i: -1, j: -1}))
    return forms


def template_join(
    a_cs: Sequence[Constraint], b_cs: Sequence[Constraint], forms: Sequence[Sequence[Fraction]]
) -> list[Constraint]:
    """Least template polyhedron over ``forms`` containing A and B (both closed)."""
    out = []
    for f in forms:
        ua, ub = fm_sup(a_cs, f), fm_sup(b_cs, f)
        bounds = [u for u in (ua, ub) if u is not None]
        u = max(bounds) if bounds else None
        if u is None or u == INF:
            continue
        out.append(Constraint.make(f, "<=", u))
    return out


# ---------------------------------------------------------------------------
# Grid enumeration
# ---------------------------------------------------------------------------


def bounding_box(cs: Sequence[Constraint], dim: int) -> list[tuple[Fraction, Fraction]] | None:
    """Bounds of the closure of ``cs`` along every axis; None if empty or unbounded."""
    box = []
    for k in range(dim):
        e = [Fraction(0)] * dim
        e[k] = Fraction(1)
        hi = fm_sup(cs, e)
        e[k] = Fraction(-1)
        lo = fm_sup(cs, e)
        if hi is None or lo is None or hi == INF or lo == INF:
            return None
        box.append((-lo, hi))
    return box


def grid_points(bbox: Sequence[tuple[Fraction, Fraction]], step: Fraction):
    axes = []
    for lo, hi in bbox:
        n = int((hi - lo) / step)
        axes.append([lo + k * step for k in range(n + 1)])
    return itertools.product(*axes)


def grid_counterexample(
    in_join: Callable[[Sequence[Fraction]], bool],
    in_a: Callable[[Sequence[Fraction]], bool],
    in_b: Callable[[Sequence[Fraction]], bool],
    bbox: Sequence[tuple[Fraction, Fraction]],
    step: Fraction,
) -> tuple[Fraction, ...] | None:
    """First grid point in the join but outside both inputs, if any."""
    for p in grid_points(bbox, Fraction(step)):
        if in_join(p) and not in_a(p) and not in_b(p):
            return tuple(p)
    return None


@dataclass(frozen=True)
class OracleReport:
    instance: str
    detector: str
    oracle: str
    seconds: float = 0.0

    @property
    def agree(self) -> bool:
        return self.detector == self.oracle
