"""Exact join detection for boxes, weakly relational shapes and polyhedra.

Each domain offers a detection function returning a :class:`Decision`;
inexact decisions carry a witness from which a separating certificate
(a point or a shape inside the join but outside both operands) can be
built and checked.
"""

from .bd import BdShape, bd_from_constraints, detect_exact_join_bd, detect_exact_join_int_bd
from .boxes import Box, IntInterval, NncInterval, detect_exact_join_box
from .core import (
    INF,
    Constraint,
    Decision,
    DimensionError,
    DomainFormError,
    Generator,
    ParseError,
    parse_constraint,
)
from .domains import DOMAINS, Domain, get_domain
from .graphs import WeightedGraph, closure, reduction
from .nnc import NncPolyhedron, detect_exact_join_nnc
from .octagons import OctShape, detect_exact_join_int_oct, detect_exact_join_oct, oct_from_constraints
from .polyhedra import CPolyhedron, detect_exact_join_closed
from .powerset import Powerset, full_merge, make_powerset, pairwise_merge

__version__ = "0.1.0"

__all__ = [
    "INF",
    "Constraint",
    "Generator",
    "Decision",
    "DimensionError",
    "DomainFormError",
    "ParseError",
    "parse_constraint",
    "NncInterval",
    "IntInterval",
    "Box",
    "detect_exact_join_box",
    "WeightedGraph",
    "closure",
    "reduction",
    "BdShape",
    "bd_from_constraints",
    "detect_exact_join_bd",
    "detect_exact_join_int_bd",
    "OctShape",
    "oct_from_constraints",
    "detect_exact_join_oct",
    "detect_exact_join_int_oct",
    "CPolyhedron",
    "detect_exact_join_closed",
    "NncPolyhedron",
    "detect_exact_join_nnc",
    "Domain",
    "DOMAINS",
    "get_domain",
    "Powerset",
    "make_powerset",
    "pairwise_merge",
    "full_merge",
]
