"""Randomized comparison of the three-shape BD conditions with an oracle.

The conditions below are an unproven generalization of the two-shape
rational BD test to three shapes.  This module only reports how often
they agree with the complement-inclusion oracle; disagreements are
dumped as reproducible instance files.  Nothing here is used by the
merge code.
"""

from __future__ import annotations

import itertools
import json
import os
import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field

from . import oracles
from .bd import BdShape
from .core import INF
from .graphs import graph_lub
from .instances import random_bd


def three_way_conditions(shapes: list[BdShape]) -> tuple[int, int, int, int, int, int] | None:
    """Arc indices (i1, j1, i2, j2, i3, j3) satisfying all six conditions, if any."""
    g = [s.closed.w for s in shapes]
    lub = graph_lub(graph_lub(shapes[0].closed, shapes[1].closed), shapes[2].closed)
    w = lub.w
    cands = []
    for h, s in enumerate(shapes):
        cands.append([(i, j) for i, j in s.arcs() if g[h][i][j] < w[i][j]])

    def lt(lhs, rhs):
        return lhs != INF and lhs < rhs

    for (i1, j1), (i2, j2), (i3, j3) in itertools.product(*cands):
        a, b, c = g[0][i1][j1], g[1][i2][j2], g[2][i3][j3]
        if not lt(a + b, w[i1][j2] + w[i2][j1]):
            continue
        if not lt(b + c, w[i2][j3] + w[i3][j2]):
            continue
        if not lt(c + a, w[i3][j1] + w[i1][j3]):
            continue
        if not lt(a + b + c, w[i1][j2] + w[i2][j3] + w[i3][j1]):
            continue
        if not lt(a + b + c, w[i1][j3] + w[i2][j1] + w[i3][j2]):
            continue
        return (i1, j1, i2, j2, i3, j3)
    return None


def oracle_three_way_exact(shapes: list[BdShape]) -> bool:
    dim = shapes[0].dim
    forms = oracles.weakly_relational_forms(dim, octagonal=False)
    cs = [s.constraints() for s in shapes]
    join = oracles.template_join(oracles.template_join(cs[0], cs[1], forms), cs[2], forms)
    return oracles.covered(join, cs, dim)


@dataclass
class FuzzReport:
    trials: int = 0
    skipped: int = 0
    both_exact: int = 0
    both_inexact: int = 0
    disagreements: list = field(default_factory=list)

    @property
    def agreements(self) -> int:
        return self.both_exact + self.both_inexact

    def summary(self) -> str:
        return (
            f"trials={self.trials} skipped={self.skipped} agree={self.agreements} "
            f"(exact={self.both_exact}, inexact={self.both_inexact}) "
            f"disagree={len(self.disagreements)}"
        )


def _trial(args) -> dict:
    seed, trial, max_dim, lo, hi = args
    rng = random.Random(f"{seed}:{trial}")
    dim = rng.randint(1, max_dim)
    shapes = [random_bd(rng, dim, lo=lo, hi=hi) for _ in range(3)]
    out = {"trial": trial, "dim": dim, "shapes": [str(s) for s in shapes]}
    if any(s.is_empty for s in shapes):
        out["skipped"] = True
        return out
    hit = three_way_conditions(shapes)
    out["conjecture"] = "exact" if hit is None else "inexact"
    out["arcs"] = hit
    out["oracle"] = "exact" if oracle_three_way_exact(shapes) else "inexact"
    return out


def run_fuzz(trials: int, seed: int = 1, max_dim: int = 3, lo: int = -3, hi: int = 3,
             jobs: int = 1, dump_dir: str | None = None) -> FuzzReport:
    report = FuzzReport()
    tasks = [(seed, t, max_dim, lo, hi) for t in range(trials)]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as ex:
            results = list(ex.map(_trial, tasks, chunksize=max(1, trials // (jobs * 8))))
    else:
        results = [_trial(t) for t in tasks]
    for r in results:
        report.trials += 1
        if r.get("skipped"):
            report.skipped += 1
            continue
        if r["conjecture"] != r["oracle"]:
            report.disagreements.append(r)
        elif r["oracle"] == "exact":
            report.both_exact += 1
        else:
            report.both_inexact += 1
    if dump_dir is not None and report.disagreements:
        os.makedirs(dump_dir, exist_ok=True)
        for r in report.disagreements:
            path = os.path.join(dump_dir, f"counterexample_seed{seed}_trial{r['trial']}.txt")
            with open(path, "w", encoding="utf-8") as fh:
                fh.write("# seed %d trial %d: conjecture=%s oracle=%s\n" % (seed, r["trial"], r["conjecture"], r["oracle"]))
                fh.write("powerset { " + "; ".join(r["shapes"]) + " }\n")
            r["file"] = path
    return report


def report_json(report: FuzzReport) -> str:
    d = asdict(report)
    d["agreements"] = report.agreements
    return json.dumps(d, indent=2, default=str)
