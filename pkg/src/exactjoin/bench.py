"""Timing sweeps of the exact join tests, emitted as CSV."""

from __future__ import annotations

import csv
import io
import math
import random
import statistics
import time
from typing import Callable, Iterable

from .bd import BdShape, detect_exact_join_bd
from .boxes import Box, NncInterval, detect_exact_join_box
from .graphs import WeightedGraph
from .instances import random_polyhedron_pair
from .nnc import detect_exact_join_nnc
from .octagons import OctShape, coherent_graph, detect_exact_join_oct
from .polyhedra import detect_exact_join_closed

DEFAULT_SIZES = {
    "box": (100, 1000, 10000),
    "bds": (8, 16, 32, 64),
    "oct": (4, 8, 16, 32),
    "cpoly": (2, 3, 4),
    "nncpoly": (2, 3, 4),
}


def _box_pair(rng: random.Random, n: int):
    # overlapping boxes differing in one coordinate: detection scans every dimension
    lo = [rng.randint(-5, 0) for _ in range(n)]
    hi = [rng.randint(1, 5) for _ in range(n)]
    b1 = Box(NncInterval.closed(a, b) for a, b in zip(lo, hi))
    comps = list(b1.components)
    k = rng.randrange(n)
    comps[k] = NncInterval.closed(lo[k] + 1, hi[k] + 1)
    return b1, Box(comps)


def _bd_pair(rng: random.Random, n: int):
    def shape():
        arcs = {}
        for i in range(n + 1):
            for j in range(n + 1):
                if i != j and rng.random() < 0.3:
                    arcs[(i, j)] = rng.randint(1, 10)
        return BdShape.from_graph(WeightedGraph.from_arcs(n + 1, arcs))

    return shape(), shape()


def _oct_pair(rng: random.Random, n: int):
    def shape():
        arcs = {}
        for i in range(2 * n):
            for j in range(2 * n):
                if i != j and rng.random() < 0.2:
                    arcs[(i, j)] = rng.randint(1, 10)
        return OctShape.from_graph(coherent_graph(2 * n, arcs))

    return shape(), shape()


GENERATORS: dict[str, tuple[Callable, Callable]] = {
    "box": (_box_pair, detect_exact_join_box),
    "bds": (_bd_pair, detect_exact_join_bd),
    "oct": (_oct_pair, detect_exact_join_oct),
    "cpoly": (lambda rng, n: random_polyhedron_pair(rng, n, False, 2 * n), detect_exact_join_closed),
    "nncpoly": (lambda rng, n: random_polyhedron_pair(rng, n, True, 2 * n), detect_exact_join_nnc),
}


def time_detection(domain: str, n: int, seed: int = 0, repeats: int = 5) -> tuple[float, str]:
    """Median detection time in seconds and the verdict of the first instance."""
    make, detect = GENERATORS[domain]
    rng = random.Random(f"{seed}:{domain}:{n}")
    times, verdict = [], ""
    for r in range(repeats):
        a, b = make(rng, n)
        t0 = time.perf_counter()
        d = detect(a, b)
        times.append(time.perf_counter() - t0)
        if r == 0:
            verdict = d.verdict
    return statistics.median(times), verdict


def sweep(domain: str, sizes: Iterable[int], seed: int = 0, repeats: int = 5) -> list[dict]:
    rows = []
    for n in sizes:
        t, verdict = time_detection(domain, n, seed, repeats)
        rows.append({"domain": domain, "n": n, "median_seconds": f"{t:.6g}", "first_verdict": verdict})
    return rows


def to_csv(rows: list[dict]) -> str:
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=["domain", "n", "median_seconds", "first_verdict"], lineterminator="\n")
    w.writeheader()
    w.writerows(rows)
    return buf.getvalue()


def loglog_slope(rows: list[dict]) -> float:
    """Least-squares slope of log(time) against log(n)."""
    xs = [math.log(r["n"]) for r in rows]
    ys = [math.log(max(float(r["median_seconds"]), 1e-9)) for r in rows]
    mx, my = statistics.fmean(xs), statistics.fmean(ys)
    num = sum((x - mx) * (y - my) for x, y in zip(xs, ys))
    den = sum((x - mx) ** 2 for x in xs)
    return num / den
