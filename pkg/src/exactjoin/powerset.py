"""Finite non-redundant powersets and merge simplification.

A powerset is an antichain of non-empty elements of one domain.  Merging
replaces groups of disjuncts by their join whenever the join adds no
points, so the denotation (the union of the disjuncts) never changes.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .core import DimensionError, braced
from .domains import Domain


class SizeCapExceeded(RuntimeError):
    """Raised by a strict :func:`full_merge` when subsets above the cap remain unchecked."""

    def __init__(self, message: str, result: "Powerset"):
        super().__init__(message)
        self.result = result


@dataclass(frozen=True)
class Powerset:
    domain: Domain
    dim: int
    disjuncts: tuple = ()

    def __len__(self) -> int:
        return len(self.disjuncts)

    def __iter__(self):
        return iter(self.disjuncts)

    def contains_point(self, p) -> bool:
        return any(d.contains_point(p) for d in self.disjuncts)

    def __str__(self) -> str:
        return braced("powerset", (self.domain.key(d) for d in self.disjuncts))


@dataclass
class MergeStats:
    before: int = 0
    after: int = 0
    detection_calls: int = 0
    oracle_calls: int = 0
    cap_hit: bool = False
    merges: list = field(default_factory=list)


def _sorted(domain: Domain, elements: Iterable) -> tuple:
    return tuple(sorted(elements, key=domain.key))


def omega_reduce(domain: Domain, elements: Sequence, dim: int | None = None) -> Powerset:
    """Drop empty elements and elements contained in another one."""
    items = [e for e in elements if not domain.is_empty(e)]
    if dim is None:
        if not elements:
            raise ValueError("dimension needed for an empty powerset")
        dim = elements[0].dim
    for e in items:
        if e.dim != dim:
            raise DimensionError(f"dimension mismatch: {e.dim} vs {dim}")
    kept: list = []
    for e in _sorted(domain, items):
        if any(domain.includes(k, e) for k in kept):
            continue
        kept = [k for k in kept if not domain.includes(e, k)]
        kept.append(e)
    return Powerset(domain, dim, _sorted(domain, kept))


def leq(q1: Powerset, q2: Powerset) -> bool:
    """Every disjunct of ``q1`` is inside some disjunct of ``q2``."""
    if q1.dim != q2.dim:
        raise DimensionError(f"dimension mismatch: {q1.dim} vs {q2.dim}")
    return all(any(q2.domain.includes(d2, d1) for d2 in q2.disjuncts) for d1 in q1.disjuncts)


def join(q1: Powerset, q2: Powerset) -> Powerset:
    if q1.dim != q2.dim:
        raise DimensionError(f"dimension mismatch: {q1.dim} vs {q2.dim}")
    return omega_reduce(q1.domain, list(q1.disjuncts) + list(q2.disjuncts), q1.dim)


def pairwise_merge(q: Powerset, stats: MergeStats | None = None) -> Powerset:
    """Merge pairs with exact joins until no pair has one.

    Pairs are scanned in lexicographic order of the disjunct text and the
    scan restarts after every merge, so the result is deterministic.
    """
    stats = stats if stats is not None else MergeStats()
    stats.before = len(q)
    dom = q.domain
    current = q
    changed = True
    while changed:
        changed = False
        ds = current.disjuncts
        for a, b in itertools.combinations(range(len(ds)), 2):
            stats.detection_calls += 1
            if dom.detect(ds[a], ds[b]).exact:
                merged = dom.join(ds[a], ds[b])
                stats.merges.append((dom.key(ds[a]), dom.key(ds[b])))
                rest = [d for k, d in enumerate(ds) if k not in (a, b)]
                current = omega_reduce(dom, rest + [merged], q.dim)
                changed = True
                break
    stats.after = len(current)
    return current


def _union_exact(dom: Domain, group: Sequence, stats: MergeStats):
    """Join of ``group`` if it adds no points, else None."""
    acc = group[0]
    for g in group[1:]:
        acc = dom.join(acc, g)
    stats.oracle_calls += 1
    return acc if dom.covered(acc, group) else None


def full_merge(q: Powerset, size_cap: int = 4, strict: bool = False,
               stats: MergeStats | None = None) -> Powerset:
    """Merge any group of disjuncts whose join is exact.

    Groups of two use the exact join test; larger groups fold the join
    and check that it is covered by the group's union.  Groups larger
    than ``size_cap`` are not examined; if such groups could exist,
    ``stats.cap_hit`` is set and, with ``strict``, :class:`SizeCapExceeded`
    is raised carrying the (still sound) result.
    """
    stats = stats if stats is not None else MergeStats()
    dom = q.domain
    current = pairwise_merge(q, stats)
    stats.before = len(q)
    restart = True
    while restart:
        restart = False
        ds = current.disjuncts
        for size in range(2, min(size_cap, len(ds)) + 1):
            for idx in itertools.combinations(range(len(ds)), size):
                group = [ds[k] for k in idx]
                if size == 2:
                    stats.detection_calls += 1
                    merged = dom.join(*group) if dom.detect(*group).exact else None
                else:
                    merged = _union_exact(dom, group, stats)
                if merged is not None:
                    stats.merges.append(tuple(dom.key(g) for g in group))
                    rest = [d for k, d in enumerate(ds) if k not in idx]
                    current = omega_reduce(dom, rest + [merged], q.dim)
                    restart = True
                    break
            if restart:
                break
    stats.after = len(current)
    if len(current) > size_cap:
        stats.cap_hit = True
        if strict:
            raise SizeCapExceeded(
                f"groups larger than {size_cap} of {len(current)} disjuncts were not examined", current
            )
    return current


def make_powerset(domain: Domain, elements: Sequence, dim: int | None = None) -> Powerset:
    return omega_reduce(domain, list(elements), dim)


def denotation_equal(q1: Powerset, q2: Powerset, points: Iterable) -> bool:
    """Same membership on every point of ``points``."""
    return all(q1.contains_point(p) == q2.contains_point(p) for p in points)


__all__ = [
    "Powerset",
    "MergeStats",
    "SizeCapExceeded",
    "omega_reduce",
    "leq",
    "join",
    "pairwise_merge",
    "full_merge",
    "make_powerset",
    "denotation_equal",
]
