"""Text formats for shapes and powersets.

Every shape is written ``TAG { item; item; ... }``.  Constraint tags
(``bds``, ``int_bds``, ``oct``, ``int_oct``, ``cpoly``, ``nncpoly``)
take linear constraints over ``x1 .. xn``; box tags take
``xK in INTERVAL`` items; ``cpoly_gen``/``nncpoly_gen`` take
``point(..)``, ``closure_point(..)``, ``ray(..)`` and ``line(..)``.
The dimension is the largest variable index unless given explicitly as
``TAG[n]``.  Powersets are ``powerset { shape; shape; ... }``.

Parse errors carry the byte offset of the offending input.
"""

from __future__ import annotations

import re
from fractions import Fraction

from .boxes import Box, IntInterval, NncInterval
from .core import INF, Constraint, DimensionError, DomainFormError, ParseError, braced, parse_linear_chain
from .domains import DOMAINS, get_domain
from .nnc import NncPolyhedron
from .polyhedra import CPolyhedron

SHAPE_TAGS = tuple(DOMAINS) + ("cpoly_gen", "nncpoly_gen")

_HEAD = re.compile(r"\s*(?P<tag>[a-z_]+)\s*(?:\[\s*(?P<dim>\d+)\s*\])?\s*\{")
_NUM = r"[+-]?\s*(?:\d+(?:/\d+)?|inf)"
_INTERVAL = re.compile(
    rf"^(?P<lb>[\[(])\s*(?P<lo>-\s*inf|{_NUM})\s*,\s*(?P<hi>\+?\s*inf|{_NUM})\s*(?P<rb>[\])])$"
)
_GEN = re.compile(r"^(?P<kind>point|closure_point|ray|line)\s*\((?P<args>[^)]*)\)$")
_BOX_ITEM = re.compile(r"^x(?P<idx>\d+)\s+in\s+(?P<iv>.*)$")


def _boff(text: str, pos: int) -> int:
    return len(text[:pos].encode("utf-8"))


def _number(s: str) -> Fraction | float:
    s = s.replace(" ", "")
    if s in ("inf", "+inf"):
        return INF
    if s == "-inf":
        return -INF
    return Fraction(s)


def _split_items(text: str, start: int, end: int) -> list[tuple[str, int]]:
    """Split ``text[start:end]`` at top-level semicolons; returns (item, offset) pairs."""
    items, depth, cur = [], 0, start
    for pos in range(start, end):
        ch = text[pos]
        if ch in "{([":
            depth += 1
        elif ch in "})]":
            depth -= 1
        elif ch == ";" and depth == 0:
            items.append((cur, pos))
            cur = pos + 1
    items.append((cur, end))
    out = []
    for a, b in items:
        raw = text[a:b]
        stripped = raw.strip()
        if stripped:
            out.append((stripped, a + (len(raw) - len(raw.lstrip()))))
    return out


def _matching_brace(text: str, open_pos: int) -> int:
    depth = 0
    for pos in range(open_pos, len(text)):
        if text[pos] == "{":
            depth += 1
        elif text[pos] == "}":
            depth -= 1
            if depth == 0:
                return pos
    raise ParseError("unbalanced '{'", _boff(text, open_pos))


def _head(text: str, pos: int = 0):
    m = _HEAD.match(text, pos)
    if m is None:
        raise ParseError("expected 'TAG {'", _boff(text, pos))
    close = _matching_brace(text, m.end() - 1)
    dim = int(m.group("dim")) if m.group("dim") else None
    return m.group("tag"), dim, m.start("tag"), m.end(), close


def _constraints(text: str, items, dim: int | None):
    parsed = []
    for item, off in items:
        try:
            chain = parse_linear_chain(item)
        except ParseError as e:
            raise ParseError(e.message, _boff(text, off) + max(e.offset, 0)) from None
        parsed.extend((terms, rel, bound, off) for terms, rel, bound in chain)
    top = max((max(t, default=0) for t, *_ in parsed), default=0)
    if dim is None:
        dim = top
    elif top > dim:
        raise ParseError(f"variable index {top} exceeds the declared dimension {dim}", 0)
    if dim < 1:
        raise ParseError("cannot infer the dimension; write TAG[n] { ... }", 0)
    cs = []
    for terms, rel, bound, off in parsed:
        coeffs = [terms.get(k, Fraction(0)) for k in range(1, dim + 1)]
        if all(c == 0 for c in coeffs):
            raise ParseError("zero linear expression", _boff(text, off))
        cs.append(Constraint.make(coeffs, rel, bound))
    return cs, dim


def _box(text: str, items, dim: int | None, integer: bool) -> Box:
    comps: dict[int, object] = {}
    for item, off in items:
        m = _BOX_ITEM.match(item)
        if m is None:
            raise ParseError("expected 'xK in INTERVAL'", _boff(text, off))
        idx = int(m.group("idx"))
        if idx < 1:
            raise ParseError("variable indices start at 1", _boff(text, off))
        iv = m.group("iv").strip()
        if iv == "empty":
            comps[idx] = IntInterval.empty() if integer else NncInterval.empty()
            continue
        mi = _INTERVAL.match(iv)
        if mi is None:
            raise ParseError(f"malformed interval {iv!r}", _boff(text, off + m.start("iv")))
        lo, hi = _number(mi.group("lo")), _number(mi.group("hi"))
        lc, hc = mi.group("lb") == "[", mi.group("rb") == "]"
        if integer:
            if (lo != -INF and not lc) or (hi != INF and not hc):
                raise DomainFormError(f"integer intervals have closed finite ends: {iv}")
            comps[idx] = IntInterval.make(lo, hi)
        else:
            comps[idx] = NncInterval.make(lo, hi, lc, hc)
    top = max(comps, default=0)
    dim = dim if dim is not None else top
    if dim < 1 or top > dim:
        raise ParseError("bad box dimension", 0)
    universe = IntInterval.make(-INF, INF) if integer else NncInterval.universe()
    return Box(comps.get(k, universe) for k in range(1, dim + 1))


def _generators(text: str, items, dim: int | None, nnc: bool):
    groups: dict[str, list] = {"point": [], "closure_point": [], "ray": [], "line": []}
    for item, off in items:
        m = _GEN.match(item)
        if m is None:
            raise ParseError("expected point(..), closure_point(..), ray(..) or line(..)", _boff(text, off))
        kind = m.group("kind")
        if kind == "closure_point" and not nnc:
            raise DomainFormError("closure points are not allowed in a closed polyhedron")
        try:
            coords = tuple(Fraction(a.replace(" ", "")) for a in m.group("args").split(","))
        except (ValueError, ZeroDivisionError):
            raise ParseError("malformed coordinates", _boff(text, off + m.start("args"))) from None
        groups[kind].append(coords)
    dims = {len(v) for vs in groups.values() for v in vs}
    if len(dims) > 1:
        raise ParseError("generators of different dimensions", 0)
    d = dims.pop() if dims else dim
    if d is None:
        raise ParseError("cannot infer the dimension; write TAG[n] { ... }", 0)
    if dim is not None and d != dim:
        raise ParseError(f"generator dimension {d} differs from the declared {dim}", 0)
    if nnc:
        return NncPolyhedron.from_generators(d, groups["point"], groups["closure_point"], groups["ray"], groups["line"])
    return CPolyhedron.from_generators(d, groups["point"], groups["ray"], groups["line"])


def _build(text: str, tag: str, dim, items):
    """The domain tag and the shape for one parsed ``TAG { ... }`` block."""
    if tag in ("box", "int_box"):
        return tag, _box(text, items, dim, tag == "int_box")
    if tag in ("cpoly_gen", "nncpoly_gen"):
        nnc = tag == "nncpoly_gen"
        return ("nncpoly" if nnc else "cpoly"), _generators(text, items, dim, nnc)
    if tag not in DOMAINS:
        raise ParseError(f"unknown shape tag {tag!r}", 0)
    cs, dim = _constraints(text, items, dim)
    if tag == "cpoly":
        for c in cs:
            if c.is_strict:
                raise DomainFormError(f"strict constraint in a closed polyhedron: {c}", c)
    return tag, get_domain(tag).from_constraints(cs, dim)


def parse_shape_at(text: str, pos: int = 0):
    tag, dim, tag_pos, body, close = _head(text, pos)
    try:
        dom_tag, shape = _build(text, tag, dim, _split_items(text, body, close))
    except ParseError as e:
        if e.offset == 0 and tag_pos:
            raise ParseError(e.message, _boff(text, tag_pos)) from None
        raise
    return dom_tag, shape, close + 1


def parse_shape(text: str):
    """Parse one shape; returns ``(domain_tag, shape)``."""
    tag, shape, end = parse_shape_at(text)
    if text[end:].strip():
        raise ParseError("trailing input after the shape", _boff(text, end + (len(text[end:]) - len(text[end:].lstrip()))))
    return tag, shape


def parse_powerset(text: str):
    """Parse ``powerset { shape; ... }``; returns ``(domain_tag, dim, shapes)``."""
    tag, dim, _, body, close = _head(text)
    if tag != "powerset":
        raise ParseError("expected 'powerset {'", 0)
    if text[close + 1:].strip():
        raise ParseError("trailing input after the powerset", _boff(text, close + 1))
    shapes, dom_tag = [], None
    for item, off in _split_items(text, body, close):
        t, s, end = parse_shape_at(text, off)
        if text[end:off + len(item)].strip():
            raise ParseError("trailing input after a shape", _boff(text, end))
        if dom_tag is not None and t != dom_tag:
            raise DomainFormError(f"mixed domains in one powerset: {dom_tag} and {t}")
        dom_tag = t
        shapes.append(s)
    dims = {s.dim for s in shapes}
    if dim is not None:
        dims.add(dim)
    if len(dims) > 1:
        raise DimensionError(f"disjuncts of different dimensions: {sorted(dims)}")
    return dom_tag, (dims.pop() if dims else None), shapes


def format_shape(tag: str, shape) -> str:
    """Text of ``shape``; adds ``[n]`` when the constraints do not reveal the dimension."""
    text = str(shape)
    if tag in ("box", "int_box"):
        return text
    cs = shape.constraints if isinstance(shape.constraints, tuple) else shape.constraints()
    top = max((max((k + 1 for k, a in enumerate(c.coeffs) if a != 0), default=0) for c in cs), default=0)
    if top != shape.dim:
        head, rest = text.split(" ", 1)
        text = f"{head}[{shape.dim}] {rest}"
    return text


def format_powerset(tag: str, q) -> str:
    return braced("powerset", [format_shape(tag, d) for d in q.disjuncts])
