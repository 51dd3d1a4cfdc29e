"""Worst-case point location over a triangle set, with stepwise cursors."""
from __future__ import annotations

from enum import Enum
from fractions import Fraction

from . import kernels
from ._kernel_py import _leaf_check, _visit
from .geometry import ComparisonCounter, convex_hull, signed_area2
from .trapmap import NONE, Dag, OverlapError, build_dag

__all__ = [
    "Cover", "LocatorDag", "SearchCursor", "build_locator", "NONE", "OverlapError",
    "query_begin", "query_step", "query_finish",
]


class Cover(Enum):
    FULL_BS = "full"
    SUBSET = "subset"


class LocatorDag:
    """Search DAG answering "which input triangle contains q".

    On a shared edge or vertex the lowest triangle id among the closed
    containers wins.  In SUBSET mode a query outside the covered triangles
    gives ``NONE``.
    """

    def __init__(self, points, tris, dag: Dag, cover: Cover, packed_tris=None):
        self.points = points
        self.tris = tris
        self.dag = dag
        self.cover = cover
        self.T = packed_tris if packed_tris is not None else kernels.PackedTris(points, tris)
        self.D = kernels.PackedDag([dag])
        self._vmin = None
        self._emin = None

    @property
    def size(self) -> int:
        return self.dag.size

    @property
    def depth(self) -> int:
        return self.dag.depth

    def _tables(self):
        if self._vmin is None:
            vmin, emin = {}, {}
            for t, (a, b, c) in enumerate(self.tris):
                for v in (a, b, c):
                    if v not in vmin:
                        vmin[v] = t
                for u, v in ((a, b), (b, c), (c, a)):
                    e = (u, v) if u < v else (v, u)
                    if e not in emin:
                        emin[e] = t
            self._vmin, self._emin = vmin, emin
        return self._vmin, self._emin

    def resolve(self, tid, bcode, b1, b2):
        if tid < 0 or bcode == 0:
            return tid
        vmin, emin = self._tables()
        if bcode == 2:
            return vmin[b1]
        return emin[(b1, b2) if b1 < b2 else (b2, b1)]

    def locate(self, q, counter: ComparisonCounter | None = None, backend=None):
        tid, bc, b1, b2, cmp, _ = kernels.locate(self.T, self.D, q[0], q[1], backend=backend)
        if counter is not None:
            counter.count += cmp
        return self.resolve(tid, bc, b1, b2)

    def query_begin(self, q) -> "SearchCursor":
        return SearchCursor(self, q)


class SearchCursor:
    """Stepwise walk; one step visits one DAG node."""

    def __init__(self, loc: LocatorDag, q):
        self.loc = loc
        self.q = q
        self.node = loc.D.roots[0]
        self.resolved = False
        self.result = None
        self.counter = ComparisonCounter()
        self.steps = 0

    def step(self) -> "SearchCursor":
        if self.resolved:
            return self
        L = self.loc
        n, lab, c = _visit(L.T.points, L.T, L.D, self.node, self.q)
        self.counter.count += c
        self.steps += 1
        if n >= 0:
            self.node = n
            return self
        self.resolved = True
        if lab < 0:
            self.result = NONE
        else:
            bc, b1, b2 = _leaf_check(L.T.points, L.T.ta_l, L.T.tb_l, L.T.tc_l, lab, self.q)
            self.result = L.resolve(lab, bc, b1, b2)
        return self

    def finish(self, counter: ComparisonCounter | None = None):
        while not self.resolved:
            self.step()
        if counter is not None:
            counter.count += self.counter.count
        return self.result


def query_begin(loc: LocatorDag, q) -> SearchCursor:
    return SearchCursor(loc, q)


def query_step(cur: SearchCursor) -> SearchCursor:
    return cur.step()


def query_finish(cur: SearchCursor, counter=None):
    return cur.finish(counter)


def _centroid(P, tri):
    a, b, c = (P[i] for i in tri)
    return (Fraction(a[0] + b[0] + c[0], 3), Fraction(a[1] + b[1] + c[1], 3))


def build_locator(points, tris, cover: Cover = Cover.FULL_BS, seed: int = 0, verify=False,
                  packed_tris=None) -> LocatorDag:
    """Build over point-index triangles; ``seed`` fixes the insertion order."""
    if not tris:
        raise ValueError("no triangles")
    if cover is Cover.FULL_BS:
        total = sum(abs(signed_area2([points[i] for i in t])) for t in tris)
        hull = convex_hull([points[i] for t in tris for i in t])
        if total != signed_area2(hull):
            raise OverlapError("triangles do not tile their convex hull")
    if packed_tris is None:
        packed_tris = kernels.PackedTris(points, tris)
    dag = build_dag(points, tris, seed=seed, packed=packed_tris)
    loc = LocatorDag(points, tris, dag, cover, packed_tris)
    if verify:
        for t, tri in enumerate(tris):
            n = loc.D.roots[0]
            q = _centroid(points, tri)
            while n >= 0:
                n, lab, _ = _visit(points, loc.T, loc.D, n, q)
            if lab != t:
                raise OverlapError(f"triangle {t} overlaps triangle {lab}")
    return loc
