"""Self-adjusting layered hierarchy for convex subdivisions.

Layer 1 holds the canonical triangulation of the whole subdivision.  Each
layer counts successful locates; after ``f(n_i)`` of them (and if both
promotion gates pass) the most frequently hit triangles are handed to the
layer builder, which produces a small triangulation for the layer above.
Queries start at the top layer and fall through until a triangle that
belongs to the subdivision is found.
"""
from __future__ import annotations

import csv
import math
from collections import Counter
from dataclasses import dataclass, field, replace

from . import kernels
from .builder import BuilderError, LayerRegions, convex_layer_builder
from .canonical import build_canonical
from .entropy import UnknownTriangle, WeightedTriangulation, build_cascade
from .locator import Cover, build_locator
from .subdivision import EXTERIOR, ConvexSubdivision

__all__ = [
    "HierarchyParams", "FrequencyBuckets", "LayerState", "LocateAnswer", "Hierarchy",
    "new_hierarchy", "locate", "promotion_check", "build_next_layer", "BuilderError",
    "UnknownTriangle", "log_star",
]


def log_star(x: float) -> int:
    k = 0
    while x > 1:
        x = math.log2(x)
        k += 1
    return k


# --- parameters -----------------------------------------------------------------

@dataclass(frozen=True)
class HierarchyParams:
    """Constants of the hierarchy.

    ``f(k) = f_scale * (log2 k)**f_exp``; the builder receives the
    ``f(n_i) / (log2 n_i)**topk_exp`` most frequent triangles.  ``p1_rule``
    is ``"reference"`` (``f(n_i) >= g * (log2 n_i)**(c2+2)`` with
    ``g = (log2 n_i)**2``), ``"shrinking"`` (``f(n_i) < n_i``, so each layer
    is fed fewer triangles than the one below holds vertices) or ``"always"``.
    """

    c1: int = 6
    c2: int = 2
    f_scale: float = 1.0
    f_exp: float | None = None
    topk_exp: float | None = None
    p1_rule: str = "reference"
    p2_threshold: int | None = None
    min_freq: int = 1
    level_tries: int = 8  # candidate DAGs per small cascade level, cheapest kept
    seed: int = 0

    def __post_init__(self):
        if self.c1 < self.c2 + 2:
            raise ValueError("c1 must be at least c2 + 2")
        if self.p1_rule not in ("reference", "shrinking", "always"):
            raise ValueError(f"unknown p1 rule {self.p1_rule!r}")

    @classmethod
    def reference(cls, **kw) -> "HierarchyParams":
        return cls(**kw)

    @classmethod
    def desk(cls, **kw) -> "HierarchyParams":
        base = dict(f_scale=4.0, f_exp=2.0, topk_exp=1.0, p1_rule="shrinking", p2_threshold=64)
        base.update(kw)
        return cls(**base)

    @classmethod
    def parse(cls, text: str) -> "HierarchyParams":
        """``reference`` or ``desk``, optionally followed by ``:key=value,...``."""
        name, _, rest = text.partition(":")
        make = {"reference": cls.reference, "desk": cls.desk}.get(name.strip().lower())
        if make is None:
            raise ValueError(f"unknown parameter profile {name!r}")
        kw = {}
        types = {f: t for f, t in cls.__annotations__.items()}
        for item in filter(None, (s.strip() for s in rest.split(","))):
            key, _, val = item.partition("=")
            key = key.strip()
            if key not in types:
                raise ValueError(f"unknown parameter {key!r}")
            if key == "p1_rule":
                kw[key] = val.strip()
            elif "float" in types[key]:
                kw[key] = float(val)
            else:
                kw[key] = int(val)
        return make(**kw)

    @property
    def fexp(self) -> float:
        return self.c1 if self.f_exp is None else self.f_exp

    @property
    def kexp(self) -> float:
        return self.c2 if self.topk_exp is None else self.topk_exp

    @property
    def p2_value(self) -> int:
        if self.p2_threshold is not None:
            return self.p2_threshold
        return (self.c1 * self.c1 + self.c1) ** (self.c1 - 1)

    def f(self, k: float) -> float:
        return self.f_scale * math.log2(max(k, 2)) ** self.fexp

    def g(self, n: int, i: int, n_i: int) -> float:
        return math.log2(max(n_i, 2)) ** 2

    def p1(self, n: int, i: int, n_i: int) -> bool:
        if self.p1_rule == "always":
            return True
        if self.p1_rule == "shrinking":
            return self.f(n_i) < n_i
        # compare logarithms so that the exact equality f = g * log^(c2+2) holds
        L = math.log2(max(n_i, 2))
        lhs = math.log(self.f_scale) + self.fexp * math.log(L)
        rhs = math.log(self.g(n, i, n_i)) + (self.c2 + 2) * math.log(L)
        return lhs >= rhs - 1e-9

    def p2(self, n_i: int) -> bool:
        return n_i >= self.p2_value

    def top_k(self, n_i: int) -> int:
        return max(1, int(self.f(n_i) / math.log2(max(n_i, 2)) ** self.kexp))


# --- frequency buckets ----------------------------------------------------------------

class FrequencyBuckets:
    """Buckets of equal frequency in strictly decreasing order, each a linked list.

    Incrementing moves a triangle to the tail of the preceding bucket when
    that bucket has the new frequency, or into a fresh bucket otherwise;
    emptied buckets are unlinked.  Every operation is O(1).
    """

    def __init__(self, m: int):
        self.freq_of = [0] * m
        self.bucket_of = [0] * m
        self.iprev = [t - 1 for t in range(m)]
        self.inext = [t + 1 if t + 1 < m else -1 for t in range(m)]
        # bucket 0 holds everything at frequency 0
        self.bfreq = [0]
        self.bprev = [-1]
        self.bnext = [-1]
        self.bhead = [0 if m else -1]
        self.btail = [m - 1 if m else -1]
        self.front = 0 if m else -1
        self.free = []

    def __len__(self):
        return len(self.freq_of)

    def _new_bucket(self, f, prev, nxt):
        if self.free:
            b = self.free.pop()
            self.bfreq[b], self.bprev[b], self.bnext[b] = f, prev, nxt
            self.bhead[b] = self.btail[b] = -1
        else:
            b = len(self.bfreq)
            self.bfreq.append(f)
            self.bprev.append(prev)
            self.bnext.append(nxt)
            self.bhead.append(-1)
            self.btail.append(-1)
        if prev == -1:
            self.front = b
        else:
            self.bnext[prev] = b
        if nxt != -1:
            self.bprev[nxt] = b
        return b

    def _unlink_item(self, t):
        b = self.bucket_of[t]
        p, n = self.iprev[t], self.inext[t]
        if p == -1:
            self.bhead[b] = n
        else:
            self.inext[p] = n
        if n == -1:
            self.btail[b] = p
        else:
            self.iprev[n] = p

    def _append_item(self, b, t):
        tail = self.btail[b]
        self.iprev[t] = tail
        self.inext[t] = -1
        if tail == -1:
            self.bhead[b] = t
        else:
            self.inext[tail] = t
        self.btail[b] = t
        self.bucket_of[t] = b

    def increment(self, t: int) -> None:
        if not 0 <= t < len(self.freq_of):
            raise UnknownTriangle(t)
        b = self.bucket_of[t]
        f = self.freq_of[t] + 1
        self.freq_of[t] = f
        self._unlink_item(t)
        pred = self.bprev[b]
        if pred != -1 and self.bfreq[pred] == f:
            target = pred
        else:
            target = self._new_bucket(f, pred, b)
        self._append_item(target, t)
        if self.bhead[b] == -1:
            p, n = self.bprev[b], self.bnext[b]
            if p == -1:
                self.front = n
            else:
                self.bnext[p] = n
            if n != -1:
                self.bprev[n] = p
            self.free.append(b)

    def buckets(self):
        """``[(frequency, [triangles...]), ...]`` from the front."""
        out = []
        b = self.front
        while b != -1:
            items = []
            t = self.bhead[b]
            while t != -1:
                items.append(t)
                t = self.inext[t]
            out.append((self.bfreq[b], items))
            b = self.bnext[b]
        return out

    def top_k(self, k: int, min_freq: int = 0) -> list:
        out = []
        b = self.front
        while b != -1 and len(out) < k and self.bfreq[b] >= min_freq:
            t = self.bhead[b]
            while t != -1 and len(out) < k:
                out.append(t)
                t = self.inext[t]
            b = self.bnext[b]
        return out

    def total(self) -> int:
        return sum(self.freq_of)

    def check(self) -> None:
        """Raise AssertionError if the ordering or membership invariant fails."""
        seen = 0
        last = None
        for f, items in self.buckets():
            assert items, "empty bucket"
            assert last is None or f < last, "bucket frequencies not strictly decreasing"
            last = f
            for t in items:
                assert self.freq_of[t] == f
            seen += len(items)
        assert seen == len(self.freq_of), "triangle missing from buckets"


# --- layers -------------------------------------------------------------------

@dataclass
class LocateAnswer:
    region: int
    layer: int  # 1-based; 0 when q lies outside B_S
    comparisons: int


@dataclass
class LayerState:
    index: int  # 1-based
    version: int
    tri: object  # Triangulation
    fin_trees: dict
    regions: LayerRegions | None
    n_i: int
    worst: object  # LocatorDag over the whole of B_S
    wt: WeightedTriangulation
    cascade: object
    buckets: FrequencyBuckets
    svert: list  # point index -> vertex index of S, or -1
    successes: int = 0
    hist: Counter = field(default_factory=Counter)

    @property
    def payload(self):
        return self.tri.region

    @property
    def vertex_count(self) -> int:
        return self.tri.vertex_count


def _make_layer(index, version, tri, fin_trees, regions, n_i, svert_index, seed) -> LayerState:
    worst = build_locator(tri.points, tri.tris, cover=Cover.FULL_BS, seed=seed)
    wt = WeightedTriangulation(len(tri.tris))
    cas = build_cascade(wt, worst, seed=seed)
    svert = [svert_index.get(p, -1) for p in tri.points]
    return LayerState(index, version, tri, fin_trees, regions, n_i, worst, wt, cas,
                      FrequencyBuckets(len(tri.tris)), svert)


class Hierarchy:
    def __init__(self, S: ConvexSubdivision, params: HierarchyParams | None = None,
                 builder=convex_layer_builder, seed: int | None = None):
        self.S = S
        self.params = params or HierarchyParams.reference()
        if seed is not None:
            self.params = replace(self.params, seed=seed)
        self.builder = builder
        C = build_canonical(S)
        self.canonical = C
        self.B = C.B
        self.corners = C.B.corners
        self.svert_index = {p: i for i, p in enumerate(S.vertices)}
        self.keep_points = frozenset(S.vertices)
        self.vmin_region = [None] * S.n
        for r, idx in enumerate(S.regions):
            for v in idx:
                if self.vmin_region[v] is None or r < self.vmin_region[v]:
                    self.vmin_region[v] = r
        self.layers = [
            _make_layer(1, 1, C.tri, C.fin_trees, None, S.n, self.svert_index, self.params.seed)
        ]
        self.builds = 0
        self.max_layers = 1

    @property
    def m(self) -> int:
        return len(self.layers)

    # -- querying ----------------------------------------------------------------

    def region_answer(self, L: LayerState, reg, bc, b1, b2):
        if bc == 0:
            return reg
        sv = L.svert
        if bc == 2:
            v = sv[b1]
            return self.vmin_region[v] if v >= 0 else reg
        u, v = sv[b1], sv[b2]
        if u >= 0 and v >= 0:
            adj = self.S.edge_regions(u, v)
            if adj:
                return adj[0]
        return reg

    def locate(self, q) -> LocateAnswer:
        cmp = 3
        if not self.B.contains(q):
            return LocateAnswer(EXTERIOR, 0, cmp)
        qx, qy = q
        for L in reversed(self.layers):
            _, tid, bc, b1, b2, ca, cb, _, _ = kernels.interleave(
                L.worst.T, L.cascade.D, L.worst.D, qx, qy
            )
            cmp += ca + cb
            tid = L.worst.resolve(tid, bc, b1, b2)
            reg = L.tri.region[tid]
            if reg is None:
                continue
            ans = self.region_answer(L, reg, bc, b1, b2)
            L.hist[cmp] += 1
            self._success(L, tid)
            return LocateAnswer(ans, L.index, cmp)
        raise AssertionError("layer 1 must cover B_S")  # pragma: no cover

    def _success(self, L: LayerState, tid: int) -> None:
        if L.wt.record_hit(tid):
            L.cascade = build_cascade(L.wt, L.worst, seed=self.params.seed + L.wt.rebuilds,
                                      tries=self.params.level_tries)
        L.buckets.increment(tid)
        L.successes += 1
        if self.promotion_check(L.index) == "BUILD":
            self.build_next_layer(L.index)

    # -- growth ------------------------------------------------------------------------

    def promotion_check(self, i: int) -> str:
        L = self.layers[i - 1]
        p = self.params
        if L.successes < p.f(L.n_i):
            return "NONE"
        if not (p.p1(self.S.n, i, L.n_i) and p.p2(L.n_i)):
            return "NONE"
        return "BUILD"

    def build_next_layer(self, i: int) -> LayerState | None:
        L = self.layers[i - 1]
        L.successes = 0
        p = self.params
        X = [t for t in L.buckets.top_k(p.top_k(L.n_i), p.min_freq) if L.tri.region[t] is not None]
        if not X:
            return None
        R, T, trees = self.builder(L.tri, L.fin_trees, X, self.corners, self.keep_points)
        version = self.layers[i].version + 1 if len(self.layers) > i else 1
        self.builds += 1
        new = _make_layer(i + 1, version, T, trees, R, T.vertex_count, self.svert_index,
                          p.seed + 7919 * self.builds)
        self.layers = self.layers[:i] + [new]
        self.max_layers = max(self.max_layers, len(self.layers))
        return new

    # -- reporting --------------------------------------------------------------------

    def total_vertices(self) -> int:
        return sum(L.vertex_count for L in self.layers)

    def stats_rows(self):
        rows = []
        for L in self.layers:
            hist = ";".join(f"{c}:{k}" for c, k in sorted(L.hist.items()))
            rows.append({
                "layer": L.index,
                "version": L.version,
                "n_i": L.n_i,
                "triangles": len(L.tri.tris),
                "vertices": L.vertex_count,
                "successes": L.wt.W,
                "since_promotion": L.successes,
                "cascade_rebuilds": L.wt.rebuilds,
                "cmp_hist": hist,
            })
        return rows

    def write_stats(self, path) -> None:
        rows = self.stats_rows()
        with open(path, "w", newline="", encoding="utf-8") as fh:
            w = csv.DictWriter(fh, fieldnames=list(rows[0]))
            w.writeheader()
            w.writerows(rows)


def new_hierarchy(S: ConvexSubdivision, params: HierarchyParams | None = None,
                  builder=convex_layer_builder, seed: int | None = None) -> Hierarchy:
    return Hierarchy(S, params, builder, seed)


def locate(H: Hierarchy, q) -> LocateAnswer:
    return H.locate(q)


def promotion_check(H: Hierarchy, i: int) -> str:
    return H.promotion_check(i)


def build_next_layer(H: Hierarchy, i: int):
    return H.build_next_layer(i)
