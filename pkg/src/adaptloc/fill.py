"""Fill the space between regions inside B_S with triangles.

A left-to-right sweep triangulates the vertex set; region edges are then
forced in one at a time (the triangles they cross are removed and the two
holes re-triangulated by ear clipping).  Triangles that end up inside a
region are dropped; the rest are the filler.  No vertex is added.
"""
from __future__ import annotations

from fractions import Fraction

from .geometry import GeometryError, orient_sign, signed_area2


def _lt(a, b):
    return a[0] < b[0] or (a[0] == b[0] and a[1] < b[1])


class _Mesh:
    def __init__(self, points):
        self.P = points
        self.tris = []
        self.emap = {}  # directed edge -> triangle id, triangles counter-clockwise
        self.vt = [set() for _ in points]
        self.fixed = set()

    def add(self, a, b, c):
        P = self.P
        o = orient_sign(P[a], P[b], P[c])
        if o == 0:
            raise GeometryError("degenerate filler triangle")
        if o < 0:
            b, c = c, b
        t = len(self.tris)
        self.tris.append((a, b, c))
        for u, v in ((a, b), (b, c), (c, a)):
            self.emap[(u, v)] = t
        for v in (a, b, c):
            self.vt[v].add(t)
        return t

    def remove(self, t):
        a, b, c = self.tris[t]
        for u, v in ((a, b), (b, c), (c, a)):
            del self.emap[(u, v)]
        for v in (a, b, c):
            self.vt[v].discard(t)
        self.tris[t] = None

    def alive(self):
        return [t for t in self.tris if t is not None]

    # -- sweep ----------------------------------------------------------------

    def sweep(self):
        P = self.P
        order = sorted(range(len(P)), key=lambda i: P[i])
        if len(order) < 3:
            raise GeometryError("need three points")
        k = 2
        while k < len(order) and orient_sign(P[order[0]], P[order[1]], P[order[k]]) == 0:
            k += 1
        if k == len(order):
            raise GeometryError("all points collinear")
        line, pk = order[:k], order[k]
        o = orient_sign(P[line[0]], P[line[1]], P[pk])
        for u, v in zip(line, line[1:]):
            self.add(u, v, pk)
        if o > 0:
            lower, upper = line + [pk], [line[0], pk]
        else:
            lower, upper = [line[0], pk], line + [pk]
        for p in order[k + 1:]:
            while len(lower) >= 2 and orient_sign(P[lower[-2]], P[lower[-1]], P[p]) < 0:
                self.add(lower[-2], p, lower[-1])
                lower.pop()
            while len(upper) >= 2 and orient_sign(P[upper[-2]], P[upper[-1]], P[p]) > 0:
                self.add(upper[-2], upper[-1], p)
                upper.pop()
            lower.append(p)
            upper.append(p)

    # -- constraints ------------------------------------------------------------

    def _between(self, a, b, z):
        """z collinear with a-b lies strictly inside the segment."""
        P = self.P
        pa, pb, pz = P[a], P[b], P[z]
        return (min(pa, pb) < pz < max(pa, pb))

    def force(self, a, b):
        """Make a-b an edge of the mesh."""
        stack = [(a, b)]
        while stack:
            a, b = stack.pop()
            if (a, b) in self.emap or (b, a) in self.emap:
                self.fixed.add((min(a, b), max(a, b)))
                continue
            split = self._insert(a, b)
            if split is not None:
                stack.append((split, b))
                stack.append((a, split))

    def _insert(self, a, b):
        P = self.P
        pa, pb = P[a], P[b]
        start = None
        for t in self.vt[a]:
            tri = self.tris[t]
            i = tri.index(a)
            x, y = tri[(i + 1) % 3], tri[(i + 2) % 3]
            ox = orient_sign(pa, pb, P[x])
            oy = orient_sign(pa, pb, P[y])
            if ox == 0 and self._between(a, b, x):
                return x
            if oy == 0 and self._between(a, b, y):
                return y
            if ox < 0 and oy > 0:
                start = (t, x, y)
                break
        if start is None:
            raise GeometryError("constraint leaves the triangulated area")
        t, x, y = start
        crossed = [t]
        right, left = [a, x], [a, y]
        while True:
            if (min(x, y), max(x, y)) in self.fixed:
                raise GeometryError("regions overlap")
            t = self.emap.get((y, x))
            if t is None:
                raise GeometryError("constraint leaves the triangulated area")
            crossed.append(t)
            tri = self.tris[t]
            z = next(v for v in tri if v != x and v != y)
            if z == b:
                break
            oz = orient_sign(pa, pb, P[z])
            if oz == 0:
                return z
            if oz > 0:
                left.append(z)
                y = z
            else:
                right.append(z)
                x = z
        for t in crossed:
            self.remove(t)
        left.append(b)
        right.append(b)
        self._ear_clip(right)
        self._ear_clip([a, b] + left[-2:0:-1])
        self.fixed.add((min(a, b), max(a, b)))
        return None

    def _ear_clip(self, poly):
        P = self.P
        poly = list(poly)
        while len(poly) > 3:
            k = len(poly)
            for i in range(k):
                u, v, w = poly[i - 1], poly[i], poly[(i + 1) % k]
                if orient_sign(P[u], P[v], P[w]) <= 0:
                    continue
                if any(
                    z not in (u, v, w) and _in_closed(P[z], P[u], P[v], P[w])
                    for z in poly
                ):
                    continue
                self.add(u, v, w)
                del poly[i]
                break
            else:
                raise GeometryError("ear clipping failed")
        self.add(*poly)


def _in_closed(q, a, b, c):
    return orient_sign(a, b, q) >= 0 and orient_sign(b, c, q) >= 0 and orient_sign(c, a, q) >= 0


def _inside_polygon(q, poly):
    """Strict interior test for a simple polygon (q never on its boundary here)."""
    inside = False
    k = len(poly)
    for i in range(k):
        a, b = poly[i], poly[(i + 1) % k]
        if (a[1] > q[1]) != (b[1] > q[1]):
            x = a[0] + Fraction(q[1] - a[1]) * (b[0] - a[0]) / (b[1] - a[1])
            if q[0] < x:
                inside = not inside
    return inside


def fill_gaps(regions, corners):
    """Filler triangles for B_S minus the regions.

    ``regions`` is a list of ``(polygon, convex)`` pairs, polygons CCW as
    point lists; ``corners`` are the three corners of B_S.  Returns point
    triples, counter-clockwise.
    """
    index = {}
    points = []

    def pid(p):
        i = index.get(p)
        if i is None:
            i = index[p] = len(points)
            points.append(p)
        return i

    for c in corners:
        pid(c)
    polys = []
    for poly, convex in regions:
        polys.append(([pid(p) for p in poly], convex))
    mesh = _Mesh(points)
    mesh.sweep()
    for ids, _ in polys:
        for u, v in zip(ids, ids[1:] + ids[:1]):
            mesh.force(u, v)
    member = [set() for _ in points]
    for r, (ids, _) in enumerate(polys):
        for v in ids:
            member[v].add(r)
    out = []
    for a, b, c in mesh.alive():
        inside = False
        for r in member[a] & member[b] & member[c]:
            ids, convex = polys[r]
            if convex:
                inside = True
                break
            cen = tuple(Fraction(points[a][i] + points[b][i] + points[c][i], 3) for i in (0, 1))
            if _inside_polygon(cen, [points[v] for v in ids]):
                inside = True
                break
        if not inside:
            out.append((points[a], points[b], points[c]))
    total = sum(signed_area2(t) for t in out) + sum(signed_area2([points[v] for v in ids]) for ids, _ in polys)
    if total != signed_area2(list(corners)):
        raise GeometryError("regions overlap or leave B_S")
    return out
