"""Online replay of a query stream with per-phase metrics.

Three modes share one answer convention (lowest closed region id, or
EXTERIOR): the self-adjusting hierarchy, the brute-force oracle and a
single worst-case locator over the canonical triangulation.
"""
from __future__ import annotations

import csv
import math
import time
from collections import Counter
from dataclasses import dataclass, field

from . import kernels
from .geometry import ComparisonCounter
from .hierarchy import Hierarchy, HierarchyParams
from .subdivision import EXTERIOR, ConvexSubdivision
from .workloads import RegionOracle

MODES = ("HIERARCHY", "ORACLE", "WORST_ONLY")
BASE_COLUMNS = ("phase", "queries", "comparisons", "cmp_per_query")
TAIL_COLUMNS = ("rebuilds", "H_regions_bits", "H_triangles_bits", "wall_ms")


def entropy_bits(counts) -> float:
    """``sum c * log2(total / c)`` over the positive counts."""
    total = sum(counts)
    return sum(c * math.log2(total / c) for c in counts if c > 0)


@dataclass
class RunReport:
    mode: str
    rows: list = field(default_factory=list)
    answers: list = field(default_factory=list)
    layers: int = 1
    max_vertices: int = 0  # largest total vertex count over live layers
    max_layers: int = 1
    cascade_rebuilds: int = 0
    hierarchy: Hierarchy | None = None

    @property
    def columns(self):
        succ = tuple(f"successes_l{i}" for i in range(1, self.layers + 1))
        return BASE_COLUMNS + succ + TAIL_COLUMNS

    @property
    def comparisons(self) -> int:
        return sum(r["comparisons"] for r in self.rows)

    @property
    def queries(self) -> int:
        return sum(r["queries"] for r in self.rows)

    def write_csv(self, path) -> None:
        with open(path, "w", newline="", encoding="utf-8") as fh:
            w = csv.DictWriter(fh, fieldnames=list(self.columns), restval=0)
            w.writeheader()
            for r in self.rows:
                w.writerow(r)


class _Phase:
    def __init__(self, index):
        self.index = index
        self.queries = 0
        self.cmp = 0
        self.succ = Counter()
        self.rebuilds = 0
        self.regions = Counter()
        self.tris = Counter()
        self.t0 = time.perf_counter()

    def row(self) -> dict:
        row = {
            "phase": self.index,
            "queries": self.queries,
            "comparisons": self.cmp,
            "cmp_per_query": round(self.cmp / self.queries, 4) if self.queries else 0.0,
            "rebuilds": self.rebuilds,
            "H_regions_bits": round(entropy_bits(self.regions.values()), 3),
            "H_triangles_bits": round(entropy_bits(self.tris.values()), 3),
            "wall_ms": round(1000 * (time.perf_counter() - self.t0), 3),
        }
        for layer, k in self.succ.items():
            row[f"successes_l{layer}"] = k
        return row


def run(S: ConvexSubdivision, queries, mode: str = "HIERARCHY",
        params: HierarchyParams | None = None, phase: int = 100_000, seed: int = 0) -> RunReport:
    """Replay ``queries`` online and collect per-phase metrics."""
    mode = mode.upper()
    if mode not in MODES:
        raise ValueError(f"unknown mode {mode!r}")
    phase = max(1, phase)
    H = Hierarchy(S, params or HierarchyParams.desk(), seed=seed)
    base = H.layers[0]  # layer 1 never changes; used for triangle entropy
    T1, D1 = base.worst.T, base.worst.D
    oracle = RegionOracle(S) if mode == "ORACLE" else None
    rep = RunReport(mode)
    rep.max_vertices = H.total_vertices()
    ph = None
    builds = H.builds
    counter = ComparisonCounter()
    for k, q in enumerate(queries):
        if k % phase == 0:
            if ph is not None:
                rep.rows.append(ph.row())
            ph = _Phase(len(rep.rows) + 1)
        inside = H.B.contains(q)
        if mode == "HIERARCHY":
            ans = H.locate(q)
            region, layer, cmp = ans.region, ans.layer, ans.comparisons
            if H.builds != builds:
                ph.rebuilds += H.builds - builds
                builds = H.builds
                rep.max_vertices = max(rep.max_vertices, H.total_vertices())
        elif mode == "ORACLE":
            counter.count = 0
            region = oracle.locate(q, counter)
            layer, cmp = (1 if inside else 0), counter.count
        else:
            cmp = 3
            region, layer = EXTERIOR, 0
            if inside:
                tid, bc, b1, b2, c, _ = kernels.locate(T1, D1, q[0], q[1])
                cmp += c
                tid = base.worst.resolve(tid, bc, b1, b2)
                region = H.region_answer(base, base.tri.region[tid], bc, b1, b2)
                layer = 1
        ph.queries += 1
        ph.cmp += cmp
        if layer:
            ph.succ[layer] += 1
            tid, bc, b1, b2, _, _ = kernels.locate(T1, D1, q[0], q[1])
            ph.tris[base.worst.resolve(tid, bc, b1, b2)] += 1
        ph.regions[region] += 1
        rep.answers.append(region)
    if ph is not None:
        rep.rows.append(ph.row())
    rep.max_layers = H.max_layers
    rep.layers = max([H.max_layers] + [int(c[len("successes_l"):]) for r in rep.rows
                                        for c in r if c.startswith("successes_l")])
    rep.cascade_rebuilds = sum(L.wt.rebuilds for L in H.layers)
    rep.hierarchy = H
    return rep


def write_answers(answers, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for a in answers:
            fh.write(f"{a}\n")
