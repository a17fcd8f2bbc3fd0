"""Shared builders for the test suite."""

from __future__ import annotations

import random
from fractions import Fraction

import pytest

from exactjoin.core import Constraint, parse_linear_chain
from exactjoin.domains import get_domain


def cons(*texts: str, dim: int | None = None):
    """Constraints from strings; chained relations give one constraint each."""
    out = []
    for t in texts:
        for terms, rel, bound in parse_linear_chain(t, dim):
            n = dim if dim is not None else max(terms)
            out.append(Constraint.make([terms.get(k, 0) for k in range(1, n + 1)], rel, bound))
    return out


def shape(tag: str, dim: int, *texts: str):
    """Element of domain ``tag`` described by constraint strings."""
    return get_domain(tag).from_constraints(cons(*texts, dim=dim), dim)


def F(x) -> Fraction:
    return Fraction(x)


@pytest.fixture
def rng():
    return random.Random(20240601)
