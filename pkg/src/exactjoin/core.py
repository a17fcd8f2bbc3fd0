"""Exact rational scalars, linear constraints and generators.

Everything downstream is built on ``fractions.Fraction``: coefficients,
bounds, point coordinates and finite graph weights.  The only non-rational
value that ever appears is ``INF`` (``math.inf``), used as the +infinity of
the extended rationals.  Since ``-inf`` is never produced, mixing ``INF``
with fractions is safe: ``Fraction(3) + INF == INF`` and comparisons are
exact.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Iterable, Sequence, Union

Rational = Fraction
ExtRational = Union[Fraction, float]

INF = math.inf

RELATIONS = ("<=", "<", "=")


class DimensionError(ValueError):
    """Operands live in spaces of different dimension."""


class DomainFormError(ValueError):
    """A constraint does not have the syntactic form a domain admits."""

    def __init__(self, message: str, constraint: "Constraint | None" = None):
        super().__init__(message)
        self.constraint = constraint


class ParseError(ValueError):
    """Malformed textual input; ``offset`` is the byte offset of the problem."""

    def __init__(self, message: str, offset: int = 0):
        super().__init__(f"{message} (at offset {offset})")
        self.message = message
        self.offset = offset


def Q(value: Any) -> Fraction:
    """Coerce ints, strings like ``"1/3"`` and fractions to ``Fraction``."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, float):
        if not math.isfinite(value):
            raise ValueError(f"not a finite rational: {value!r}")
        # floats are accepted only if they are exactly representable
        return Fraction(value)
    return Fraction(value)


def is_inf(value: ExtRational) -> bool:
    return value == INF


def vector(values: Iterable[Any]) -> tuple[Fraction, ...]:
    return tuple(Q(v) for v in values)


def dot(a: Sequence[Fraction], b: Sequence[Fraction]) -> Fraction:
    if len(a) != len(b):
        raise DimensionError(f"dimension mismatch: {len(a)} vs {len(b)}")
    return sum((x * y for x, y in zip(a, b)), Fraction(0))


def format_rational(value: ExtRational) -> str:
    if value == INF:
        return "inf"
    if value == -INF:
        return "-inf"
    return str(value)


def braced(head: str, items) -> str:
    """``head { a; b; c }`` (``head { }`` when there are no items)."""
    body = "; ".join(str(x) for x in items)
    return f"{head} {{ {body} }}" if body else f"{head} {{ }}"


def format_vector(values: Sequence[Fraction]) -> str:
    return "(" + ", ".join(format_rational(v) for v in values) + ")"


# ---------------------------------------------------------------------------
# Constraints
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Constraint:
    """A linear constraint ``<coeffs, x> rel bound`` with rel in <=, <, =.

    Build instances with :meth:`make`, which normalizes: ``>=``/``>`` are
    negated into ``<=``/``<`` and inequalities are divided by the absolute
    value of their first nonzero coefficient (equalities by the signed
    value), so positive scalings of one half-space compare equal.
    """

    coeffs: tuple[Fraction, ...]
    rel: str
    bound: Fraction

    @classmethod
    def make(cls, coeffs: Iterable[Any], rel: str, bound: Any) -> "Constraint":
        a = vector(coeffs)
        b = Q(bound)
        if rel in (">=", ">"):
            a = tuple(-c for c in a)
            b = -b
            rel = "<=" if rel == ">=" else "<"
        if rel not in RELATIONS:
            raise ValueError(f"unknown relation {rel!r}")
        lead = next((c for c in a if c != 0), None)
        if lead is None:
            raise ValueError("constraint with a zero linear expression")
        scale = lead if rel == "=" else abs(lead)
        return cls(tuple(c / scale for c in a), rel, b / scale)

    @property
    def dim(self) -> int:
        return len(self.coeffs)

    @property
    def is_strict(self) -> bool:
        return self.rel == "<"

    @property
    def is_equality(self) -> bool:
        return self.rel == "="

    def value(self, p: Sequence[Fraction]) -> Fraction:
        return dot(self.coeffs, p)

    def inequalities(self) -> tuple["Constraint", ...]:
        """Equalities split into their two non-strict half-spaces."""
        if self.rel != "=":
            return (self,)
        return (
            Constraint.make(self.coeffs, "<=", self.bound),
            Constraint.make(self.coeffs, ">=", self.bound),
        )

    def weakened(self) -> "Constraint":
        if self.rel != "<":
            return self
        return Constraint(self.coeffs, "<=", self.bound)

    def complement(self) -> "Constraint":
        """The constraint satisfied exactly by the points violating ``self``."""
        if self.rel == "=":
            raise ValueError("the complement of an equality is not convex")
        rel = ">" if self.rel == "<=" else ">="
        return Constraint.make(self.coeffs, rel, self.bound)

    def hyperplane(self) -> "Constraint":
        return Constraint.make(self.coeffs, "=", self.bound)

    def __str__(self) -> str:
        return f"{format_linear(self.coeffs)} {self.rel} {self.bound}"


def format_linear(coeffs: Sequence[Fraction]) -> str:
    parts: list[str] = []
    for idx, c in enumerate(coeffs, start=1):
        if c == 0:
            continue
        mag = abs(c)
        term = f"x{idx}" if mag == 1 else f"{mag}*x{idx}"
        if not parts:
            parts.append(term if c > 0 else f"-{term}")
        else:
            parts.append(("+ " if c > 0 else "- ") + term)
    return " ".join(parts) if parts else "0"


def satisfies(p: Sequence[Fraction], beta: Constraint) -> bool:
    """True iff the point ``p`` satisfies ``beta``."""
    v = dot(beta.coeffs, p)
    if beta.rel == "<=":
        return v <= beta.bound
    if beta.rel == "<":
        return v < beta.bound
    return v == beta.bound


def satisfies_all(p: Sequence[Fraction], cs: Iterable[Constraint]) -> bool:
    return all(satisfies(p, beta) for beta in cs)


# ---------------------------------------------------------------------------
# Generators
# ---------------------------------------------------------------------------

POINT = "point"
RAY = "ray"
CLOSURE_POINT = "closure_point"


@dataclass(frozen=True)
class Generator:
    """A point, ray or closure point.

    Rays are canonicalized up to positive scaling by dividing by the
    absolute value of their first nonzero coordinate.
    """

    kind: str
    coords: tuple[Fraction, ...]

    @classmethod
    def point(cls, coords: Iterable[Any]) -> "Generator":
        return cls(POINT, vector(coords))

    @classmethod
    def closure_point(cls, coords: Iterable[Any]) -> "Generator":
        return cls(CLOSURE_POINT, vector(coords))

    @classmethod
    def ray(cls, coords: Iterable[Any]) -> "Generator":
        v = vector(coords)
        lead = next((c for c in v if c != 0), None)
        if lead is None:
            raise ValueError("the zero vector is not a ray")
        return cls(RAY, tuple(c / abs(lead) for c in v))

    @property
    def dim(self) -> int:
        return len(self.coords)

    @property
    def is_ray(self) -> bool:
        return self.kind == RAY

    def __str__(self) -> str:
        return f"{self.kind}{format_vector(self.coords)}"


def saturates(g: Generator | Sequence[Fraction], beta: Constraint) -> bool:
    """A (closure) point saturates ``beta`` if it lies on its hyperplane;
    a ray saturates it if it is parallel to that hyperplane."""
    if isinstance(g, Generator):
        v = dot(beta.coeffs, g.coords)
        return v == 0 if g.is_ray else v == beta.bound
    return dot(beta.coeffs, g) == beta.bound


# ---------------------------------------------------------------------------
# Decisions
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Decision:
    """Outcome of an exact-join test; ``witness`` is set iff inexact."""

    exact: bool
    witness: Any = None

    @classmethod
    def exact_join(cls) -> "Decision":
        return cls(True, None)

    @classmethod
    def inexact(cls, witness: Any) -> "Decision":
        return cls(False, witness)

    @property
    def verdict(self) -> str:
        return "exact" if self.exact else "inexact"

    def __bool__(self) -> bool:  # pragma: no cover - guard against misuse
        raise TypeError("use Decision.exact instead of truth-testing a Decision")


@dataclass(frozen=True)
class Disjoint:
    """Witness annotation: the two operands do not intersect at all."""


# ---------------------------------------------------------------------------
# Constraint grammar
# ---------------------------------------------------------------------------

_TOKEN = re.compile(
    r"(?:(?P<num>\d+(?:/\d+)?)|(?P<var>x(?P<idx>\d+))|(?P<rel><=|>=|<|>|=)"
    r"|(?P<op>[+\-*]))"
)


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    tokens = []
    pos = 0
    while True:
        while pos < len(text) and text[pos].isspace():
            pos += 1
        if pos >= len(text):
            return tokens
        m = _TOKEN.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", _byte_offset(text, pos))
        kind = m.lastgroup if m.lastgroup != "idx" else "var"
        start = m.start(kind)
        tokens.append((kind, m.group(kind), _byte_offset(text, start)))
        pos = m.end()


def _byte_offset(text: str, pos: int) -> int:
    return len(text[:pos].encode("utf-8"))


def _parse_expression(tokens, i: int, end: int, dim: int | None):
    """``[sign] term (sign term)*`` where a term is ``q``, ``xK``, ``q*xK`` or ``q xK``."""
    terms: dict[int, Fraction] = {}
    const = Fraction(0)
    first = True
    while True:
        sign = Fraction(1)
        if i < len(tokens) and tokens[i][0] == "op" and tokens[i][1] in "+-":
            sign = Fraction(-1 if tokens[i][1] == "-" else 1)
            i += 1
        elif not first:
            return terms, const, i
        if i >= len(tokens):
            raise ParseError("expected a term", end)
        kind, val, off = tokens[i]
        coeff = None
        if kind == "num":
            coeff = Fraction(val)
            i += 1
            if i < len(tokens) and tokens[i][:2] == ("op", "*"):
                i += 1
                if i >= len(tokens) or tokens[i][0] != "var":
                    raise ParseError("expected a variable x<index>", tokens[i][2] if i < len(tokens) else end)
            if i >= len(tokens) or tokens[i][0] != "var":
                const += sign * coeff
                first = False
                continue
            kind, val, off = tokens[i]
        if kind != "var":
            raise ParseError(f"unexpected token {val!r}", off)
        idx = int(val[1:])
        if idx < 1:
            raise ParseError("variable indices start at 1", off)
        if dim is not None and idx > dim:
            raise ParseError(f"variable x{idx} exceeds dimension {dim}", off)
        terms[idx] = terms.get(idx, Fraction(0)) + sign * (coeff if coeff is not None else 1)
        i += 1
        first = False


def parse_linear_chain(text: str, dim: int | None = None) -> list[tuple[dict[int, Fraction], str, Fraction]]:
    """Parse ``expr REL expr (REL expr)*`` into one (terms, rel, bound) per relation.

    Each relation ``lhs REL rhs`` becomes ``lhs - rhs REL 0`` with the
    constant moved to the right, so ``0 <= x1 <= 3`` yields two items.
    """
    tokens = _tokenize(text)
    end = len(text.encode("utf-8"))
    if not tokens:
        raise ParseError("empty constraint", 0)
    sides, rels = [], []
    i = 0
    while True:
        terms, const, i = _parse_expression(tokens, i, end, dim)
        sides.append((terms, const))
        if i >= len(tokens):
            break
        kind, val, off = tokens[i]
        if kind != "rel":
            raise ParseError(f"unexpected token {val!r}", off)
        rels.append(val)
        i += 1
    if not rels:
        raise ParseError("expected a relation", end)
    out = []
    for (lt, lc), rel, (rt, rc) in zip(sides, rels, sides[1:]):
        terms = dict(lt)
        for k, v in rt.items():
            terms[k] = terms.get(k, Fraction(0)) - v
        out.append(({k: v for k, v in terms.items() if v != 0}, rel, rc - lc))
    return out


def parse_linear(text: str, dim: int | None = None) -> tuple[dict[int, Fraction], str, Fraction]:
    """Parse a single relation ``expr REL expr`` into (terms, rel, bound)."""
    items = parse_linear_chain(text, dim)
    if len(items) != 1:
        raise ParseError("expected exactly one relation", 0)
    return items[0]


def parse_constraint(text: str, dim: int | None = None) -> Constraint:
    """Parse a constraint such as ``"x1 - x2 < 1/3"`` and normalize it.

    >>> str(parse_constraint("2*x1 <= 4"))
    'x1 <= 2'
    """
    terms, rel, bound = parse_linear(text, dim)
    if not terms:
        raise ParseError("zero linear expression", 0)
    n = dim if dim is not None else max(terms)
    coeffs = [terms.get(k, Fraction(0)) for k in range(1, n + 1)]
    if all(c == 0 for c in coeffs):
        raise ParseError("zero linear expression", 0)
    return Constraint.make(coeffs, rel, bound)


def check_dims(*dims: int) -> int:
    first = dims[0]
    for d in dims[1:]:
        if d != first:
            raise DimensionError(f"dimension mismatch: {first} vs {d}")
    return first
