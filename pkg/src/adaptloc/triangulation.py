"""Indexed triangle sets with region payloads."""
from __future__ import annotations

from .geometry import orient_sign, signed_area2

NO_REGION = None


class Triangulation:
    """Triangles over a shared point table.

    ``region[t]`` is the owning region id of S_{1,1} (``EXTERIOR`` for fin
    triangles) or ``None`` for payload-free filler triangles.  ``fin_node[t]``
    is ``(corner, node_id)`` for fin triangles.
    """

    def __init__(self, points=None):
        self.points = []
        self.index = {}
        self.tris = []
        self.region = []
        self.fin_node = []
        self.level = []
        for p in points or ():
            self.add_point(p)

    def add_point(self, p) -> int:
        i = self.index.get(p)
        if i is None:
            i = len(self.points)
            self.points.append(p)
            self.index[p] = i
        return i

    def add_triangle(self, a, b, c, region=NO_REGION, fin_node=None, level=0) -> int:
        """Add by points; stored CCW.  Returns the triangle id."""
        ia, ib, ic = self.add_point(a), self.add_point(b), self.add_point(c)
        s = orient_sign(a, b, c)
        if s == 0:
            raise ValueError(f"degenerate triangle {a} {b} {c}")
        if s < 0:
            ib, ic = ic, ib
        self.tris.append((ia, ib, ic))
        self.region.append(region)
        self.fin_node.append(fin_node)
        self.level.append(level)
        return len(self.tris) - 1

    def __len__(self):
        return len(self.tris)

    def tri_points(self, t):
        a, b, c = self.tris[t]
        P = self.points
        return (P[a], P[b], P[c])

    def area2(self, t) -> int:
        return signed_area2(self.tri_points(t))

    def used_vertices(self) -> set:
        return {v for tri in self.tris for v in tri}

    @property
    def vertex_count(self) -> int:
        return len(self.used_vertices())

    def has_payload(self, t) -> bool:
        return self.region[t] is not None

    def edge_map(self):
        """Undirected edge -> list of triangle ids."""
        em = {}
        for t, (a, b, c) in enumerate(self.tris):
            for u, v in ((a, b), (b, c), (c, a)):
                em.setdefault((u, v) if u < v else (v, u), []).append(t)
        return em

    def vertex_min_tri(self):
        best = {}
        for t, tri in enumerate(self.tris):
            for v in tri:
                if v not in best:
                    best[v] = t
        return best

    def edge_min_tri(self):
        return {e: min(ts) for e, ts in self.edge_map().items()}
