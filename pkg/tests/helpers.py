"""Exhaustive counters and samplers shared by unit and acceptance tests."""
import math
import random
from fractions import Fraction

from adaptloc.geometry import (
    convex_hull,
    is_strictly_convex_ccw,
    segment_meets_open_triangle,
    segments_properly_intersect,
    signed_area2,
)
from adaptloc.subdivision import compute_fins, enclosing_triangle, validate


def regular_polygon_sub(k, radius=1 << 12):
    """Single strictly convex region with k vertices near a circle (doubled coords)."""
    pts = []
    for t in range(k):
        a = 2 * math.pi * t / k + 0.1
        pts.append((round(radius * math.cos(a)) * 2, round(radius * math.sin(a)) * 2))
    hull = convex_hull(pts)
    assert len(hull) == k and is_strictly_convex_ccw(hull)
    return validate(hull, [list(range(k))])


def fin_with_edges(m):
    """A real fin (tangent head sides) whose tail has exactly m edges."""
    for k in range(3, 200):
        S = regular_polygon_sub(k)
        for f in compute_fins(S, enclosing_triangle(S)):
            if f.tail_edges == m:
                return f
    raise LookupError(m)


def point_in_triangle_random(rng, tri):
    a, b, c = tri
    u, v = rng.random(), rng.random()
    if u + v > 1:
        u, v = 1 - u, 1 - v
    u, v = Fraction(u), Fraction(v)
    return (a[0] + u * (b[0] - a[0]) + v * (c[0] - a[0]),
            a[1] + u * (b[1] - a[1]) + v * (c[1] - a[1]))


def random_point_in(rng, tris):
    """Area-weighted uniform point in a union of triangles (exact rationals)."""
    w = [abs(signed_area2(t)) for t in tris]
    t = rng.choices(tris, weights=w)[0]
    return point_in_triangle_random(rng, t)


def crossings(seg, tris):
    """Number of triangles whose interior meets the segment."""
    return sum(1 for t in tris if segment_meets_open_triangle(seg, t))


def segment_inside_chain(seg, chain):
    """True when seg does not cross any edge of the chain."""
    return not any(segments_properly_intersect(seg, e) for e in zip(chain, chain[1:]))


def region_segments(rng, poly, count):
    tris = [(poly[0], poly[i], poly[i + 1]) for i in range(1, len(poly) - 1)]
    return [(random_point_in(rng, tris), random_point_in(rng, tris)) for _ in range(count)]


def fin_segments(rng, fin_tris, tail, count, tries=100):
    out = []
    for _ in range(count * tries):
        s = (random_point_in(rng, fin_tris), random_point_in(rng, fin_tris))
        if s[0] != s[1] and segment_inside_chain(s, tail):
            out.append(s)
            if len(out) == count:
                break
    return out


def make_rng(seed):
    return random.Random(seed)
