"""Command-line front end.

Every command prints a ``format: v1`` header line first.  Exit codes are
the machine contract: 0 exact (or success), 1 inexact, 2 usage or
internal error, 3 parse error, 4 dimension mismatch, 5 domain-form
violation.
"""

from __future__ import annotations

import argparse
import math
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction

from . import bench, fuzz, oracles
from .boxes import BoxWitness
from .core import Decision, DimensionError, Disjoint, DomainFormError, ParseError, format_vector
from .domains import DOMAINS, get_domain
from .formats import format_powerset, format_shape, parse_powerset, parse_shape
from .nnc import NncPolyhedron
from .polyhedra import CPolyhedron, PolyWitness
from .powerset import MergeStats, full_merge, make_powerset, pairwise_merge

EXIT_EXACT = 0
EXIT_INEXACT = 1
EXIT_ERROR = 2
EXIT_PARSE = 3
EXIT_DIMENSION = 4
EXIT_DOMAIN_FORM = 5

FORMAT_VERSIONS = ("v1",)


class CliError(Exception):
    def __init__(self, message: str, code: int = EXIT_ERROR):
        super().__init__(message)
        self.code = code


def format_version() -> str:
    v = os.environ.get("EXACTJOIN_FORMAT_VERSION", "v1").strip()
    v = v if v.startswith("v") else f"v{v}"
    if v not in FORMAT_VERSIONS:
        raise CliError(f"unsupported output format {v!r}; supported: {', '.join(FORMAT_VERSIONS)}")
    return v


def _read(path: str) -> str:
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except (OSError, UnicodeDecodeError) as e:
        raise CliError(f"cannot read {path}: {e}") from None


def _coerce(tag: str, shape, target: str | None):
    """``shape`` as an element of ``target``; closed polyhedra embed into NNC ones."""
    if target is None or target == tag:
        return tag, shape
    if target == "nncpoly" and tag == "cpoly":
        return target, NncPolyhedron.from_closed(shape)
    src, dst = get_domain(tag), get_domain(target)
    try:
        return target, dst.from_constraints(src.constraints(shape), shape.dim)
    except DomainFormError:
        raise
    except ValueError as e:
        raise DomainFormError(f"a {tag} shape cannot be read as {target}: {e}") from None


def load_shape(path: str, domain: str | None):
    try:
        tag, shape = parse_shape(_read(path))
    except ParseError as e:
        raise CliError(f"{path}: {e}", EXIT_PARSE) from None
    return _coerce(tag, shape, domain)


def load_pair(path_a: str, path_b: str, domain: str | None):
    tag_a, a = load_shape(path_a, domain)
    tag_b, b = load_shape(path_b, domain or tag_a)
    if tag_a != tag_b:
        tag_a, a = _coerce(tag_a, a, tag_b)
    if a.dim != b.dim:
        raise DimensionError(f"operands have dimensions {a.dim} and {b.dim}")
    return get_domain(tag_b), a, b


def describe_witness(w) -> str:
    """One-line text of a detection witness."""
    if isinstance(w, BoxWitness):
        return f"condition {w.condition} on " + ", ".join(f"x{k + 1}" for k in w.indices)
    if isinstance(w, PolyWitness):
        g = "none" if w.g is None else str(w.g)
        text = f"constraint {w.beta} and generator {g} of operand {w.first + 1}"
        return text + (f", condition {w.condition}" if w.condition else "")
    if hasattr(w, "indices"):
        return "indices " + format_vector(w.indices)
    return str(w)


def _describe_certificate(dom, c) -> str:
    if isinstance(c, Disjoint):
        return "disjoint operands"
    if isinstance(c, tuple):
        return "point " + format_vector(c)
    return "shape " + format_shape(dom.tag, c)


def certify(dom, a, b, d: Decision):
    """Build and re-verify the certificate of an inexact decision."""
    try:
        c = dom.witness(a, b, d)
    except ValueError as e:
        raise CliError(f"witness construction failed: {e}") from None
    if not dom.verify_witness(a, b, c):
        raise CliError("witness verification failed")
    return c


# ---------------------------------------------------------------------------
# Commands
# ---------------------------------------------------------------------------


def cmd_exact_join(args, out) -> int:
    dom, a, b = load_pair(args.file_a, args.file_b, args.domain)
    d = dom.detect(a, b)
    print(d.verdict, file=out)
    if d.exact:
        return EXIT_EXACT
    c = certify(dom, a, b, d)
    print(f"witness: {describe_witness(d.witness)}", file=out)
    print(f"certificate: {_describe_certificate(dom, c)}", file=out)
    print("verified: yes", file=out)
    return EXIT_INEXACT


def parse_bbox(text: str) -> list[tuple[Fraction, Fraction]]:
    """``lo:hi,lo:hi,...`` with rational ends."""
    box = []
    try:
        for part in text.split(","):
            lo, hi = part.split(":")
            box.append((Fraction(lo.strip()), Fraction(hi.strip())))
    except (ValueError, ZeroDivisionError):
        raise CliError(f"malformed --bbox {text!r}; expected lo:hi,lo:hi,...") from None
    if any(lo > hi for lo, hi in box):
        raise CliError("--bbox has an interval with lo > hi")
    return box


def grid_oracle(dom, a, b, step: Fraction, bbox=None):
    """A grid point of the join outside both operands, or None."""
    join = dom.join(a, b)
    if bbox is None:
        bbox = oracles.bounding_box(dom.join_constraints(a, b), a.dim)
        if bbox is None:
            if dom.is_empty(join):
                return None
            raise CliError("the join is unbounded; pass --bbox")
        if dom.integer:
            bbox = [(Fraction(math.ceil(lo)), Fraction(math.floor(hi))) for lo, hi in bbox]
    if len(bbox) != a.dim:
        raise DimensionError(f"--bbox has {len(bbox)} intervals for dimension {a.dim}")
    return oracles.grid_counterexample(join.contains_point, a.contains_point, b.contains_point, bbox, step)


def cmd_oracle(args, out) -> int:
    dom, a, b = load_pair(args.file_a, args.file_b, args.domain)
    detected = dom.detect(a, b).verdict
    if args.mode == "grid":
        step = Fraction(args.step) if args.step else Fraction(1 if dom.integer else Fraction(1, 2))
        if step <= 0:
            raise CliError("--step must be positive")
        bbox = parse_bbox(args.bbox) if args.bbox else None
        p = grid_oracle(dom, a, b, step, bbox)
        verdict = "exact" if p is None else "inexact"
        print(f"oracle: {verdict}", file=out)
        if p is not None:
            print(f"counterexample: {format_vector(p)}", file=out)
        elif not dom.integer:
            print("note: no grid counterexample; the grid oracle only refutes rational joins", file=out)
    else:
        verdict = "exact" if dom.oracle_exact(a, b) else "inexact"
        print(f"oracle: {verdict}", file=out)
    print(f"detector: {detected}", file=out)
    print(f"agree: {'yes' if verdict == detected else 'no'}", file=out)
    return EXIT_EXACT if verdict == "exact" else EXIT_INEXACT


def cmd_merge(args, out) -> int:
    try:
        tag, dim, shapes = parse_powerset(_read(args.file))
    except ParseError as e:
        raise CliError(f"{args.file}: {e}", EXIT_PARSE) from None
    if tag is None:
        tag = args.domain
        if tag is None:
            raise CliError("empty powerset; pass --domain")
        if dim is None:
            raise CliError("empty powerset; write powerset[n] { }")
    if args.domain is not None and args.domain != tag:
        shapes = [_coerce(tag, s, args.domain)[1] for s in shapes]
        tag = args.domain
    dom = get_domain(tag)
    q = make_powerset(dom, shapes, dim)
    stats = MergeStats()
    if args.mode == "full":
        result = full_merge(q, size_cap=args.size_cap, stats=stats)
    else:
        result = pairwise_merge(q, stats)
    print(format_powerset(tag, result), file=out)
    print(
        f"stats: before={len(shapes)} after={stats.after} detection_calls={stats.detection_calls} "
        f"oracle_calls={stats.oracle_calls} cap_hit={'yes' if stats.cap_hit else 'no'}",
        file=out,
    )
    return EXIT_EXACT


def cmd_fuzz(args, out) -> int:
    report = fuzz.run_fuzz(args.trials, seed=args.seed, max_dim=args.dim, jobs=args.jobs, dump_dir=args.dump_dir)
    if args.json:
        print(fuzz.report_json(report), file=out)
    else:
        print(report.summary(), file=out)
        for r in report.disagreements:
            where = r.get("file", "(not dumped)")
            print(f"counterexample: trial {r['trial']} conjecture={r['conjecture']} oracle={r['oracle']} {where}", file=out)
    return EXIT_EXACT


def _bench_one(task):
    domain, n, seed, repeats = task
    return bench.sweep(domain, [n], seed, repeats)[0]


def cmd_bench(args, out) -> int:
    domains = list(bench.GENERATORS) if args.domain in (None, "all") else [args.domain]
    for d in domains:
        if d not in bench.GENERATORS:
            raise CliError(f"no benchmark generator for {d!r}; choose from {', '.join(bench.GENERATORS)}")
    if args.sizes:
        try:
            sizes = [int(s) for s in args.sizes.split(",")]
        except ValueError:
            raise CliError(f"malformed --sizes {args.sizes!r}") from None
    else:
        sizes = None
    tasks = [(d, n, args.seed, args.repeats) for d in domains for n in (sizes or bench.DEFAULT_SIZES[d])]
    if args.jobs > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as ex:
            rows = list(ex.map(_bench_one, tasks))
    else:
        rows = [_bench_one(t) for t in tasks]
    out.write(bench.to_csv(rows))
    return EXIT_EXACT


def generator_text(tag: str, p) -> str:
    """Generator description of a polyhedron in the ``*_gen`` grammar."""
    items = [f"point{format_vector(v)}" for v in p.points]
    items += [f"closure_point{format_vector(v)}" for v in p.closure_points]
    line_dirs = set(p.lines) | {tuple(-x for x in l) for l in p.lines}
    items += [f"ray{format_vector(v)}" for v in p.rays if v not in line_dirs]
    items += [f"line{format_vector(v)}" for v in p.lines]
    head = f"{tag}_gen[{p.dim}]"
    return f"{head} {{ {'; '.join(items)} }}" if items else f"{head} {{ }}"


def cmd_convert(args, out) -> int:
    text = _read(args.file)
    try:
        tag, p = parse_shape(text)
    except ParseError as e:
        raise CliError(f"{args.file}: {e}", EXIT_PARSE) from None
    if not isinstance(p, (CPolyhedron, NncPolyhedron)):
        raise DomainFormError(f"convert needs a cpoly or nncpoly shape, got {tag}")
    from_generators = text.lstrip().startswith(f"{tag}_gen")
    dual = format_shape(tag, p) if from_generators else generator_text(tag, p)
    print(dual, file=out)
    _, back = parse_shape(dual)
    if back != p:
        raise CliError("round-trip check failed")
    print("round-trip: ok", file=out)
    return EXIT_EXACT


# ---------------------------------------------------------------------------
# Entry point
# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="exactjoin", description="Exact join detection for numerical domains.")
    sub = parser.add_subparsers(dest="command", required=True)
    tags = sorted(DOMAINS)

    p = sub.add_parser("exact-join", help="decide whether the join of two shapes is their union")
    p.add_argument("--domain", choices=tags)
    p.add_argument("file_a")
    p.add_argument("file_b")
    p.set_defaults(func=cmd_exact_join)

    p = sub.add_parser("oracle", help="check a join with an independent oracle")
    p.add_argument("--domain", choices=tags)
    p.add_argument("--mode", choices=("complement", "grid"), default="complement")
    p.add_argument("--step", help="grid step (default 1 for integer domains, 1/2 otherwise)")
    p.add_argument("--bbox", help="grid bounds lo:hi,lo:hi,... (default: bounding box of the join)")
    p.add_argument("file_a")
    p.add_argument("file_b")
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("merge", help="merge the disjuncts of a powerset")
    p.add_argument("--domain", choices=tags)
    p.add_argument("--mode", choices=("pairwise", "full"), default="pairwise")
    p.add_argument("--size-cap", type=int, default=4)
    p.add_argument("file")
    p.set_defaults(func=cmd_merge)

    p = sub.add_parser("fuzz-conjecture", help="compare the three-shape BD conditions with an oracle")
    p.add_argument("--trials", type=int, default=1000)
    p.add_argument("--seed", type=int, default=1)
    p.add_argument("--dim", type=int, default=3, help="largest dimension drawn")
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--dump-dir", help="directory for counterexample files")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_fuzz)

    p = sub.add_parser("bench", help="time detection over a size sweep (CSV)")
    p.add_argument("--domain", choices=sorted(bench.GENERATORS) + ["all"], default="all")
    p.add_argument("--sizes", help="comma-separated sizes")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--repeats", type=int, default=5)
    p.add_argument("--jobs", type=int, default=1)
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("convert", help="print the dual description of a polyhedron")
    p.add_argument("file")
    p.set_defaults(func=cmd_convert)
    return parser


def main(argv: list[str] | None = None, out=None) -> int:
    out = out if out is not None else sys.stdout
    args = build_parser().parse_args(argv)
    try:
        print(f"format: {format_version()}", file=out)
        return args.func(args, out)
    except CliError as e:
        print(f"error: {e}", file=sys.stderr)
        return e.code
    except ParseError as e:
        print(f"parse error: {e}", file=sys.stderr)
        return EXIT_PARSE
    except DimensionError as e:
        print(f"dimension error: {e}", file=sys.stderr)
        return EXIT_DIMENSION
    except DomainFormError as e:
        print(f"domain error: {e}", file=sys.stderr)
        return EXIT_DOMAIN_FORM


if __name__ == "__main__":
    sys.exit(main())
