"""Convex subdivisions: file format, validation, enclosing triangle and fins."""
from __future__ import annotations

from dataclasses import dataclass, field

from .geometry import (
    is_convex_ccw,
    is_strictly_convex_ccw,
    orient_sign,
    segments_properly_intersect,
    signed_area2,
    on_segment,
)

EXTERIOR = -1
HEADER = "pointloc-subdivision v1"
COORD_LIMIT = 1 << 29  # pre-scale; becomes 2**30 after doubling


class ParseError(ValueError):
    def __init__(self, msg, line=None):
        self.line = line
        super().__init__(f"line {line}: {msg}" if line is not None else msg)


class ValidationError(ValueError):
    CATEGORIES = (
        "NONCONVEX_REGION",
        "INCOMPATIBLE_EDGES",
        "SELF_INTERSECTION",
        "DISCONNECTED",
        "NONCONVEX_OUTER",
    )

    def __init__(self, category, msg=""):
        assert category in self.CATEGORIES
        self.category = category
        super().__init__(f"{category}: {msg}" if msg else category)


@dataclass
class ConvexSubdivision:
    """Validated subdivision in doubled integer coordinates."""

    vertices: list
    regions: list
    edges: dict = field(default_factory=dict)  # (i, j), i < j -> [region ids]
    outer: list = field(default_factory=list)  # CCW vertex indices

    @property
    def n(self) -> int:
        return len(self.vertices)

    def region_polygon(self, r):
        return [self.vertices[i] for i in self.regions[r]]

    def outer_polygon(self):
        return [self.vertices[i] for i in self.outer]

    def edge_regions(self, i, j):
        return self.edges.get((i, j) if i < j else (j, i), [])


def _ints(tokens, lineno, count=None):
    try:
        vals = [int(t) for t in tokens]
    except ValueError:
        raise ParseError(f"expected integers, got {' '.join(tokens)!r}", lineno) from None
    if count is not None and len(vals) != count:
        raise ParseError(f"expected {count} integers", lineno)
    return vals


def parse_subdivision(text: str) -> ConvexSubdivision:
    lines = text.splitlines()
    pos = 0

    def nxt():
        nonlocal pos
        while pos < len(lines) and not lines[pos].strip():
            pos += 1
        if pos >= len(lines):
            raise ParseError("unexpected end of file", pos + 1)
        pos += 1
        return pos, lines[pos - 1].split()

    ln, tok = nxt()
    if " ".join(tok) != HEADER:
        raise ParseError(f"bad header, expected {HEADER!r}", ln)
    ln, tok = nxt()
    if len(tok) != 2 or tok[0] != "vertices":
        raise ParseError("expected 'vertices <count>'", ln)
    (nv,) = _ints(tok[1:], ln, 1)
    verts = []
    for _ in range(nv):
        ln, tok = nxt()
        x, y = _ints(tok, ln, 2)
        if abs(x) > COORD_LIMIT or abs(y) > COORD_LIMIT:
            raise ParseError("coordinate out of range", ln)
        verts.append((2 * x, 2 * y))
    ln, tok = nxt()
    if len(tok) != 2 or tok[0] != "regions":
        raise ParseError("expected 'regions <count>'", ln)
    (nr,) = _ints(tok[1:], ln, 1)
    regions = []
    for _ in range(nr):
        ln, tok = nxt()
        vals = _ints(tok, ln)
        if not vals or vals[0] != len(vals) - 1:
            raise ParseError("region vertex count mismatch", ln)
        if vals[0] < 3:
            raise ParseError("region needs at least 3 vertices", ln)
        idx = vals[1:]
        if any(i < 0 or i >= nv for i in idx):
            raise ParseError("vertex index out of range", ln)
        regions.append(idx)
    while pos < len(lines):
        if lines[pos].strip():
            raise ParseError("trailing content", pos + 1)
        pos += 1
    return validate(verts, regions)


def serialize_subdivision(S: ConvexSubdivision) -> str:
    out = [HEADER, f"vertices {len(S.vertices)}"]
    out += [f"{x // 2} {y // 2}" for x, y in S.vertices]
    out.append(f"regions {len(S.regions)}")
    out += [" ".join(map(str, [len(r)] + list(r))) for r in S.regions]
    return "\n".join(out) + "\n"


def validate(verts, regions) -> ConvexSubdivision:
    """Check the convex-subdivision invariants; raise ValidationError."""
    if not regions:
        raise ValidationError("DISCONNECTED", "no regions")
    if len(set(verts)) != len(verts):
        raise ValidationError("SELF_INTERSECTION", "duplicate vertex coordinates")
    for r, idx in enumerate(regions):
        if len(set(idx)) != len(idx):
            raise ValidationError("NONCONVEX_REGION", f"region {r} repeats a vertex")
        if not is_strictly_convex_ccw([verts[i] for i in idx]):
            raise ValidationError("NONCONVEX_REGION", f"region {r}")

    directed = {}
    for r, idx in enumerate(regions):
        k = len(idx)
        for t in range(k):
            a, b = idx[t], idx[(t + 1) % k]
            if (a, b) in directed:
                raise ValidationError(
                    "SELF_INTERSECTION", f"regions {directed[(a, b)]} and {r} overlap along {a}-{b}"
                )
            directed[(a, b)] = r
    edges = {}
    for (a, b), r in directed.items():
        edges.setdefault((min(a, b), max(a, b)), []).append(r)
    for e in edges.values():
        e.sort()

    used = {i for idx in regions for i in idx}
    if len(used) != len(verts):
        raise ValidationError("DISCONNECTED", "isolated vertex")

    boundary = [(a, b) for (a, b) in directed if (b, a) not in directed]
    segs = [(verts[a], verts[b]) for a, b in boundary]
    bverts = {v for e in boundary for v in e}
    for a, b in boundary:
        for v in bverts:
            if v != a and v != b and on_segment(verts[a], verts[b], verts[v]):
                raise ValidationError("INCOMPATIBLE_EDGES", f"vertex {v} inside edge {a}-{b}")

    for i in range(len(segs)):
        for j in range(i + 1, len(segs)):
            if set(boundary[i]) & set(boundary[j]):
                if segments_properly_intersect(segs[i], segs[j]):
                    raise ValidationError("SELF_INTERSECTION", "overlapping boundary edges")
                continue
            if segments_properly_intersect(segs[i], segs[j]):
                raise ValidationError(
                    "SELF_INTERSECTION", f"edges {boundary[i]} and {boundary[j]} cross"
                )
    succ = {}
    for a, b in boundary:
        if a in succ:
            raise ValidationError("DISCONNECTED", f"boundary pinches at vertex {a}")
        succ[a] = b
    start = boundary[0][0]
    cycle = [start]
    v = succ[start]
    while v != start:
        cycle.append(v)
        v = succ[v]
    if len(cycle) != len(boundary):
        raise ValidationError("DISCONNECTED", "more than one boundary cycle")
    outer_poly = [verts[i] for i in cycle]
    if not is_convex_ccw(outer_poly):
        raise ValidationError("NONCONVEX_OUTER")
    total = sum(signed_area2([verts[i] for i in idx]) for idx in regions)
    if total != signed_area2(outer_poly):
        raise ValidationError("SELF_INTERSECTION", "region areas do not add up")
    return ConvexSubdivision(list(verts), [list(r) for r in regions], edges, cycle)


# --- enclosing triangle and fins -------------------------------------------

# corner order (CCW): bottom-left, bottom-right, top
# side s runs from corner s to corner s+1: 0 bottom, 1 right (x+y=c), 2 upper-left (y-x=c)


@dataclass
class EnclosingTriangle:
    corners: tuple
    touch: list  # per side: outer-boundary vertex indices on that side, CCW order
    ymin: int
    smax: int
    dmax: int

    def polygon(self):
        return list(self.corners)

    def contains(self, q, counter=None) -> bool:
        """Closed containment, three side tests."""
        c = self.corners
        for i in range(3):
            if counter is not None:
                counter.count += 1
            if orient_sign(c[i], c[(i + 1) % 3], q) < 0:
                return False
        return True


@dataclass
class Fin:
    """Region between a corner of B_S and the outer boundary of S.

    ``tail`` runs from the vertex on the first head side (the side entering
    the corner in CCW order) to the vertex on the second head side.
    """

    corner: int
    apex: tuple
    tail: list
    tail_ids: list = field(default_factory=list)

    def polygon(self):
        """CCW boundary."""
        return [self.apex] + list(reversed(self.tail))

    @property
    def tail_edges(self) -> int:
        return len(self.tail) - 1


def enclosing_triangle(S: ConvexSubdivision) -> EnclosingTriangle:
    pts = S.vertices
    ymin = min(pts[i][1] for i in S.outer)
    smax = max(pts[i][0] + pts[i][1] for i in S.outer)
    dmax = max(pts[i][1] - pts[i][0] for i in S.outer)
    bl = (ymin - dmax, ymin)
    br = (smax - ymin, ymin)
    top = ((smax - dmax) // 2, (smax + dmax) // 2)
    keys = (
        lambda p: p[1] == ymin,
        lambda p: p[0] + p[1] == smax,
        lambda p: p[1] - p[0] == dmax,
    )
    k = len(S.outer)
    touch = []
    for key in keys:
        on = {t for t in range(k) if key(pts[S.outer[t]])}
        # the run is contiguous along the cycle; start where the predecessor is off the line
        first = next(t for t in on if (t - 1) % k not in on)
        run = [first]
        while (run[-1] + 1) % k in on:
            run.append((run[-1] + 1) % k)
        touch.append([S.outer[t] for t in run])
    return EnclosingTriangle((bl, br, top), touch, ymin, smax, dmax)


def compute_fins(S: ConvexSubdivision, B: EnclosingTriangle) -> list:
    """Non-empty fins, one per B_S corner at most."""
    pos = {v: t for t, v in enumerate(S.outer)}
    k = len(S.outer)
    fins = []
    for corner in (1, 2, 0):
        before, after = (corner - 1) % 3, corner
        start = pos[B.touch[before][-1]]
        end = pos[B.touch[after][0]]
        ids = [S.outer[start]]
        t = start
        while t != end:
            t = (t + 1) % k
            ids.append(S.outer[t])
        if len(ids) < 2:
            continue
        fins.append(Fin(corner, B.corners[corner], [S.vertices[i] for i in ids], ids))
    return fins
