"""Distribution-sensitive locator: a weight-class cascade of subset DAGs.

Triangles are bucketed by weight class ``k(t) = ceil(log2(W / p_t))``.  The
level with threshold ``tau`` holds every triangle of class at most ``tau``;
levels are probed for ``tau = 1, 2, 4, ...`` and the full worst-case DAG
is the last resort.  A triangle of class ``k`` is therefore found after
probing levels whose sizes grow geometrically up to about ``2**(2k)``,
for ``O(k)`` comparisons.  The structure is rebuilt whenever the total
weight doubles.
"""
from __future__ import annotations

from fractions import Fraction

from . import kernels
from ._kernel_py import _leaf_check, _visit
from .geometry import ComparisonCounter, orient_sign
from .locator import NONE, LocatorDag
from .trapmap import build_dag

K_MAX = 40
TRY_LIMIT = 512  # levels larger than this are built once
TRY_MIN_WEIGHT = 1024  # short-lived cascades (few hits so far) are built once


class UnknownTriangle(KeyError):
    pass


class WeightedTriangulation:
    """Access frequencies of the triangles of one triangulation."""

    def __init__(self, m: int):
        self.p = [0] * m
        self.W = 0
        self.W_last = 0  # total weight at the last rebuild
        self.rebuilds = 0

    def __len__(self):
        return len(self.p)

    def record_hit(self, t: int) -> bool:
        """Count one hit on ``t``; True when a rebuild is due."""
        if not 0 <= t < len(self.p):
            raise UnknownTriangle(t)
        self.p[t] += 1
        self.W += 1
        return self.W >= 2 * self.W_last

    def weight_classes(self) -> list:
        """Class per triangle; zero-weight triangles get ``K_MAX + 1``."""
        return [_exact_class(self.W, p) if p > 0 else K_MAX + 1 for p in self.p]


def record_hit(wt: WeightedTriangulation, t: int) -> bool:
    return wt.record_hit(t)


def _exact_class(W: int, p: int) -> int:
    """ceil(log2(W/p)) for integers W >= p >= 1."""
    k = 0
    while p << k < W:
        k += 1
    return min(k, K_MAX)


class CascadeLocator:
    """Levels of subset DAGs plus the full DAG of ``fallback`` as the last resort."""

    def __init__(self, fallback: LocatorDag, levels, dags):
        self.fallback = fallback
        self.levels = levels  # list of (tau, sorted triangle ids)
        self.D = kernels.PackedDag(dags, rescue=False)

    @property
    def level_sizes(self):
        return [(tau, len(ids)) for tau, ids in self.levels]

    @property
    def size(self) -> int:
        return self.D.size

    def locate(self, q, counter: ComparisonCounter | None = None, backend=None):
        F = self.fallback
        tid, bc, b1, b2, cmp, _ = kernels.cascade(F.T, self.D, F.D, q[0], q[1], backend=backend)
        if counter is not None:
            counter.count += cmp
        return F.resolve(tid, bc, b1, b2)

    def query_begin(self, q) -> "CascadeCursor":
        return CascadeCursor(self, q)


class CascadeCursor:
    """Stepwise cascade walk; one step visits one DAG node."""

    def __init__(self, cas: CascadeLocator, q):
        self.cas = cas
        self.q = q
        self.roots = [(cas.D, r) for r in cas.D.roots] + [(cas.fallback.D, cas.fallback.D.roots[0])]
        self.level = 0
        self.dag, self.node = self.roots[0]
        self.resolved = False
        self.result = None
        self.counter = ComparisonCounter()
        self.steps = 0

    def step(self) -> "CascadeCursor":
        if self.resolved:
            return self
        F = self.cas.fallback
        n, lab, c = _visit(F.T.points, F.T, self.dag, self.node, self.q)
        self.counter.count += c
        self.steps += 1
        if n >= 0:
            self.node = n
        elif lab >= 0:
            bc, b1, b2 = _leaf_check(F.T.points, F.T.ta_l, F.T.tb_l, F.T.tc_l, lab, self.q)
            self.result = F.resolve(lab, bc, b1, b2)
            self.resolved = True
        elif self.level + 1 < len(self.roots):
            self.level += 1
            self.dag, self.node = self.roots[self.level]
        else:
            self.result = NONE
            self.resolved = True
        return self

    def finish(self, counter: ComparisonCounter | None = None):
        while not self.resolved:
            self.step()
        if counter is not None:
            counter.count += self.counter.count
        return self.result


def _probe(P, tri):
    """A point strictly inside the triangle: the rounded centroid when it is
    inside (so the compiled kernel can take it), else the exact centroid."""
    a, b, c = (P[i] for i in tri)
    cx, cy = Fraction(a[0] + b[0] + c[0], 3), Fraction(a[1] + b[1] + c[1], 3)
    q = (round(cx), round(cy))
    s = orient_sign(a, b, c)
    if all(orient_sign(u, v, q) == s for u, v in ((a, b), (b, c), (c, a))):
        return q, None
    return (cx, cy), "python"


def _weighted_cost(wt, fallback, ids, dag) -> int:
    """Sum over level triangles of weight times the search cost at a probe point."""
    D = kernels.PackedDag([dag], rescue=False)
    P = fallback.points
    total = 0
    for t in ids:
        (qx, qy), backend = _probe(P, fallback.tris[t])
        total += wt.p[t] * kernels.locate(fallback.T, D, qx, qy, backend=backend)[4]
    return total


def _best_level_dag(wt, fallback, ids, seed, tries):
    if len(ids) > TRY_LIMIT or wt.W < TRY_MIN_WEIGHT:
        tries = 1
    tris = [fallback.tris[t] for t in ids]
    best, best_cost = None, None
    for k in range(tries):
        dag = build_dag(fallback.points, tris, tri_ids=ids, seed=seed + 1009 * k,
                        packed=fallback.T, weights=[wt.p[t] for t in ids])
        if tries == 1:
            return dag
        cost = _weighted_cost(wt, fallback, ids, dag)
        if best is None or cost < best_cost:
            best, best_cost = dag, cost
    return best


def build_cascade(wt: WeightedTriangulation, fallback: LocatorDag, seed: int = 0,
                  max_fraction: float = 0.5, tries: int = 1) -> CascadeLocator:
    """Cascade for the current weights; resets the rebuild clock.

    Each level inserts heavy triangles first (weighted random order).
    Levels are skipped when empty or identical to the previous level.  A
    level that would hold more than ``max_fraction`` of all triangles is
    not built: the full DAG takes its place.  With ``tries > 1`` each small
    level is built from that many seeds and the DAG with the lowest
    weight-times-centroid-cost sum is kept.
    """
    m = len(wt)
    W = wt.W
    classes = {}
    if W > 0:
        for t, p in enumerate(wt.p):
            if p > 0:
                classes.setdefault(_exact_class(W, p), []).append(t)
    levels, dags = [], []
    members = []
    tau = 1
    prev = 0
    while tau <= K_MAX and classes:
        for k in sorted(c for c in classes if c <= tau):
            members.extend(classes.pop(k))
        if len(members) > max_fraction * m:
            break
        if len(members) > prev:
            ids = sorted(members)
            dags.append(_best_level_dag(wt, fallback, ids, seed + tau, tries))
            levels.append((tau, ids))
            prev = len(members)
        tau *= 2
    wt.W_last = W
    wt.rebuilds += 1
    return CascadeLocator(fallback, levels, dags)
