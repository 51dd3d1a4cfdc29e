"""Exact planar primitives.

Points are plain ``(x, y)`` tuples.  Input vertices and query points have
integer coordinates; Steiner points created inside fins carry
``fractions.Fraction`` coordinates (normalised back to ``int`` whenever the
denominator is 1).  Every predicate here is exact.

The cost model is the point-line comparison: each ``orientation`` call bumps
the :class:`ComparisonCounter` handed to it, if any.
"""
from __future__ import annotations

from enum import IntEnum
from fractions import Fraction

CCW = 1
CW = -1
COLLINEAR = 0


class Orientation(IntEnum):
    CW = -1
    COLLINEAR = 0
    CCW = 1


class Containment(IntEnum):
    OUTSIDE = 0
    ON_BOUNDARY = 1
    INSIDE = 2


class GeometryError(ValueError):
    pass


class DegenerateTriangle(GeometryError):
    pass


class DegenerateSegment(GeometryError):
    pass


class ComparisonCounter:
    """Monotone count of point-line comparisons performed."""

    __slots__ = ("count",)

    def __init__(self, count: int = 0):
        self.count = count

    def add(self, k: int = 1) -> None:
        if k < 0:
            raise ValueError("counter is monotone")
        self.count += k

    def __repr__(self):
        return f"ComparisonCounter({self.count})"


def _norm(v):
    if isinstance(v, Fraction) and v.denominator == 1:
        return int(v.numerator)
    return v


def make_point(x, y):
    return (_norm(x), _norm(y))


def orient_det(p, q, r):
    """Twice the signed area of (p, q, r); no counting."""
    return (q[0] - p[0]) * (r[1] - p[1]) - (q[1] - p[1]) * (r[0] - p[0])


def orient_sign(p, q, r) -> int:
    d = (q[0] - p[0]) * (r[1] - p[1]) - (q[1] - p[1]) * (r[0] - p[0])
    return (d > 0) - (d < 0)


def orientation(p, q, r, counter: ComparisonCounter | None = None) -> Orientation:
    if counter is not None:
        counter.count += 1
    return Orientation(orient_sign(p, q, r))


def lex_less(a, b) -> bool:
    """Symbolic-shear x-order: compare x, then y."""
    return a[0] < b[0] or (a[0] == b[0] and a[1] < b[1])


def point_in_triangle(q, a, b, c, counter: ComparisonCounter | None = None) -> Containment:
    """Classify ``q`` against the closed triangle ``abc`` (either winding)."""
    s = orient_sign(a, b, c)
    if s == 0:
        raise DegenerateTriangle((a, b, c))
    on = False
    for u, v in ((a, b), (b, c), (c, a)):
        o = orientation(u, v, q, counter) * s
        if o < 0:
            return Containment.OUTSIDE
        if o == 0:
            on = True
    return Containment.ON_BOUNDARY if on else Containment.INSIDE


def segments_properly_intersect(s1, s2) -> bool:
    """True iff the relative interiors of the two segments share a point.

    Touching at a shared endpoint does not count; collinear overlap does.
    """
    a, b = s1
    c, d = s2
    if a == b or c == d:
        raise DegenerateSegment(s1 if a == b else s2)
    o1 = orient_sign(a, b, c)
    o2 = orient_sign(a, b, d)
    o3 = orient_sign(c, d, a)
    o4 = orient_sign(c, d, b)
    if o1 * o2 < 0 and o3 * o4 < 0:
        return True
    if o1 == 0 and o2 == 0:
        # collinear: overlap of positive length
        key = 0 if a[0] != b[0] else 1
        lo1, hi1 = sorted((a[key], b[key]))
        lo2, hi2 = sorted((c[key], d[key]))
        return min(hi1, hi2) > max(lo1, lo2)
    # an endpoint of one lying strictly inside the other
    if o1 == 0 and _strictly_between(a, b, c):
        return True
    if o2 == 0 and _strictly_between(a, b, d):
        return True
    if o3 == 0 and _strictly_between(c, d, a):
        return True
    if o4 == 0 and _strictly_between(c, d, b):
        return True
    return False


def _strictly_between(a, b, p) -> bool:
    # p assumed collinear with ab
    if p == a or p == b:
        return False
    return min(a, b) < p < max(a, b)


def on_segment(a, b, p) -> bool:
    """p lies on the closed segment ab."""
    if orient_sign(a, b, p) != 0:
        return False
    return min(a, b) <= p <= max(a, b)


def segment_meets_open_triangle(s, t) -> bool:
    """Does segment ``s`` intersect the interior of the triangle ``t``?

    Separating-axis test over the three triangle edges and the segment's
    supporting line.
    """
    a, b, c = t
    if orient_sign(a, b, c) < 0:
        b, c = c, b
    p, q = s
    for u, v in ((a, b), (b, c), (c, a)):
        if orient_sign(u, v, p) <= 0 and orient_sign(u, v, q) <= 0:
            return False
    if p != q:
        sa, sb, sc = orient_sign(p, q, a), orient_sign(p, q, b), orient_sign(p, q, c)
        if (sa >= 0 and sb >= 0 and sc >= 0) or (sa <= 0 and sb <= 0 and sc <= 0):
            return False
    return True


def triangles_interiors_meet(t1, t2) -> bool:
    """Exact open-triangle intersection test (separating axis)."""
    for tri, other in ((t1, t2), (t2, t1)):
        a, b, c = tri
        if orient_sign(a, b, c) < 0:
            b, c = c, b
        for u, v in ((a, b), (b, c), (c, a)):
            if all(orient_sign(u, v, w) <= 0 for w in other):
                return False
    return True


def convex_polygons_interiors_meet(P, Q) -> bool:
    """Both polygons CCW and convex."""
    for poly, other in ((P, Q), (Q, P)):
        k = len(poly)
        for i in range(k):
            u, v = poly[i], poly[(i + 1) % k]
            if all(orient_sign(u, v, w) <= 0 for w in other):
                return False
    return True


def line_through(p, q):
    """Coefficients (A, B, C) with A*x + B*y = C."""
    A = q[1] - p[1]
    B = p[0] - q[0]
    return A, B, A * p[0] + B * p[1]


def line_intersection(l1, l2):
    A1, B1, C1 = l1
    A2, B2, C2 = l2
    det = A1 * B2 - A2 * B1
    if det == 0:
        raise GeometryError("parallel lines")
    x = Fraction(C1 * B2 - C2 * B1) / det
    y = Fraction(A1 * C2 - A2 * C1) / det
    return make_point(x, y)


def signed_area2(poly) -> int:
    """Twice the signed shoelace area."""
    s = 0
    k = len(poly)
    for i in range(k):
        x1, y1 = poly[i]
        x2, y2 = poly[(i + 1) % k]
        s += x1 * y2 - x2 * y1
    return s


def convex_hull(points):
    """Andrew's monotone chain; CCW, collinear points dropped."""
    pts = sorted(set(points))
    if len(pts) <= 2:
        return pts
    lower = []
    for p in pts:
        while len(lower) >= 2 and orient_sign(lower[-2], lower[-1], p) <= 0:
            lower.pop()
        lower.append(p)
    upper = []
    for p in reversed(pts):
        while len(upper) >= 2 and orient_sign(upper[-2], upper[-1], p) <= 0:
            upper.pop()
        upper.append(p)
    return lower[:-1] + upper[:-1]


def is_strictly_convex_ccw(poly) -> bool:
    return is_convex_ccw(poly, strict=True)


def is_convex_ccw(poly, strict=False) -> bool:
    """CCW convex polygon; with ``strict=False`` straight angles are allowed."""
    k = len(poly)
    if k < 3 or signed_area2(poly) <= 0:
        return False
    for i in range(k):
        o = orient_sign(poly[i - 1], poly[i], poly[(i + 1) % k])
        if o < 0 or (strict and o == 0):
            return False
    # all left turns; reject polygons that wind more than once
    changes = 0
    prev = 0
    for i in range(k):
        dx = poly[(i + 1) % k][0] - poly[i][0]
        s = (dx > 0) - (dx < 0)
        if s != 0:
            if prev != 0 and s != prev:
                changes += 1
            prev = s
    first = 0
    for i in range(k):
        dx = poly[(i + 1) % k][0] - poly[i][0]
        if dx != 0:
            first = (dx > 0) - (dx < 0)
            break
    if prev != 0 and first != prev:
        changes += 1
    return changes <= 2
