"""Random convex subdivisions, query workloads and the brute-force oracle."""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from scipy.spatial import Delaunay

from .geometry import convex_hull, orient_sign, signed_area2
from .subdivision import (
    EXTERIOR,
    ConvexSubdivision,
    enclosing_triangle,
    serialize_subdivision,
    validate,
)

RADIUS = 1 << 20  # pre-scale radius of generated subdivisions


# --- subdivision generator ---------------------------------------------------

def _ring(m, rng):
    """At least m integer points in strictly convex position on a circle."""
    while True:
        ang = np.sort(rng.uniform(0.0, 2 * math.pi, m))
        pts = {(int(round(RADIUS * math.cos(a))), int(round(RADIUS * math.sin(a)))) for a in ang}
        hull = convex_hull(list(pts))
        if len(hull) == m:
            return hull


def _try_merge(poly_a, poly_b, a, b):
    """Glue two CCW polygons along the shared edge a->b (of poly_a)."""
    ia = poly_a.index(a)
    ib = poly_b.index(b)
    # poly_a walks a -> b, poly_b walks b -> a; splice them
    ka, kb = len(poly_a), len(poly_b)
    rot_a = [poly_a[(ia + 1 + t) % ka] for t in range(ka)]  # starts at b, ends at a
    rot_b = [poly_b[(ib + 1 + t) % kb] for t in range(kb)]  # starts at a, ends at b
    return rot_a[:-1] + rot_b[:-1]


def generate_subdivision(n_target: int, seed: int = 0) -> ConvexSubdivision:
    """Random convex subdivision with about ``n_target`` vertices.

    Points are a strictly convex ring plus random interior points; their
    Delaunay triangulation is coarsened by merging neighbouring cells while
    the union stays strictly convex.
    """
    if n_target < 3:
        raise ValueError("n_target must be at least 3")
    rng = np.random.default_rng(seed)
    m = n_target if n_target <= 6 else min(n_target, max(6, int(round(2 * math.sqrt(n_target)))))
    pts = _ring(m, rng)
    seen = set(pts)
    inner = n_target - m
    while inner > 0:
        r = 0.95 * RADIUS * np.sqrt(rng.uniform(0, 1, inner))
        th = rng.uniform(0, 2 * math.pi, inner)
        for x, y in zip(r * np.cos(th), r * np.sin(th)):
            p = (int(round(x)), int(round(y)))
            if p not in seen and len(pts) < n_target:
                seen.add(p)
                pts.append(p)
        inner = n_target - len(pts)
    tri = Delaunay(np.array(pts, dtype=float))
    cells = []
    for s in tri.simplices:
        c = [int(i) for i in s]
        area = signed_area2([pts[i] for i in c])
        if area == 0:
            return generate_subdivision(n_target, seed + 7919)
        if area < 0:
            c = [c[0], c[2], c[1]]
        cells.append(c)

    # union-find free merging: region polygons keyed by id, edge owner map
    polys = dict(enumerate(cells))
    owner = {}
    for r, c in polys.items():
        for t in range(len(c)):
            owner[(c[t], c[(t + 1) % len(c)])] = r
    edges = [e for e in owner if e[0] < e[1] and (e[1], e[0]) in owner]
    order = rng.permutation(len(edges))
    for k in order:
        a, b = edges[k]
        ra, rb = owner.get((a, b)), owner.get((b, a))
        if ra is None or rb is None or ra == rb:
            continue
        merged = _try_merge(polys[ra], polys[rb], a, b)
        if not _strictly_convex_at(merged, pts):
            continue
        del polys[rb]
        del owner[(a, b)], owner[(b, a)]
        polys[ra] = merged
        for t in range(len(merged)):
            owner[(merged[t], merged[(t + 1) % len(merged)])] = ra
    regions = [polys[r] for r in sorted(polys)]
    return validate([(2 * x, 2 * y) for x, y in pts], regions)


def _strictly_convex_at(idx, pts):
    k = len(idx)
    for t in range(k):
        if orient_sign(pts[idx[t - 1]], pts[idx[t]], pts[idx[(t + 1) % k]]) <= 0:
            return False
    return True


def write_subdivision(S: ConvexSubdivision, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(serialize_subdivision(S))


# --- query streams -----------------------------------------------------------

def format_coord(v: int) -> str:
    """Doubled integer coordinate back to file units (halves allowed)."""
    if v % 2 == 0:
        return str(v // 2)
    return ("-" if v < 0 else "") + f"{abs(v) // 2}.5"


def parse_coord(tok: str, lineno=None) -> int:
    v = Fraction(tok) * 2
    if v.denominator != 1:
        raise ValueError(f"line {lineno}: coordinate {tok!r} is not a multiple of 1/2")
    return int(v)


def write_queries(queries, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for x, y in queries:
            fh.write(f"{format_coord(x)} {format_coord(y)}\n")


def read_queries(path) -> list:
    out = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            parts = line.split()
            if not parts:
                continue
            if len(parts) != 2:
                raise ValueError(f"line {lineno}: expected two coordinates")
            out.append((parse_coord(parts[0], lineno), parse_coord(parts[1], lineno)))
    return out


# --- workloads ---------------------------------------------------------------

KINDS = ("UNIFORM", "ZIPF", "HOTSPOT", "DRIFT")


@dataclass
class WorkloadSpec:
    kind: str = "UNIFORM"
    length: int = 1000
    seed: int = 0
    zipf_s: float = 1.0
    hot: int = 0  # ZIPF: ranked regions (0 = all); HOTSPOT/DRIFT: hot region count
    mass: float = 0.99
    phase: int = 1000

    def __post_init__(self):
        self.kind = self.kind.upper()
        if self.kind not in KINDS:
            raise ValueError(f"unknown workload kind {self.kind!r}")
        if self.kind in ("HOTSPOT", "DRIFT") and self.hot == 0:
            self.hot = 8 if self.kind == "HOTSPOT" else 1


class _Sampler:
    """Vectorised uniform sampling inside regions and inside B_S."""

    def __init__(self, S: ConvexSubdivision):
        V = np.array(S.vertices, dtype=np.float64)
        a, b, c, owner = [], [], [], []
        for r, idx in enumerate(S.regions):
            for t in range(1, len(idx) - 1):
                a.append(idx[0])
                b.append(idx[t])
                c.append(idx[t + 1])
                owner.append(r)
        self.A, self.B, self.C = V[a], V[b], V[c]
        u, v = self.B - self.A, self.C - self.A
        area = 0.5 * np.abs(u[:, 0] * v[:, 1] - u[:, 1] * v[:, 0])
        self.cum = np.cumsum(area)
        owner = np.array(owner)
        self.start = np.searchsorted(owner, np.arange(len(S.regions)), side="left")
        self.before = np.concatenate(([0.0], self.cum))[self.start]
        self.region_area = np.bincount(owner, weights=area, minlength=len(S.regions))
        self.bs = enclosing_triangle(S)

    @staticmethod
    def _in_triangle(rng, A, B, C):
        u = rng.uniform(0, 1, len(A))
        v = rng.uniform(0, 1, len(A))
        flip = u + v > 1
        u[flip], v[flip] = 1 - u[flip], 1 - v[flip]
        P = A + u[:, None] * (B - A) + v[:, None] * (C - A)
        return np.rint(P).astype(np.int64)

    def in_regions(self, rng, regions):
        regions = np.asarray(regions, dtype=np.int64)
        target = self.before[regions] + rng.uniform(0, 1, len(regions)) * self.region_area[regions]
        k = np.minimum(np.searchsorted(self.cum, target), len(self.cum) - 1)
        return self._in_triangle(rng, self.A[k], self.B[k], self.C[k])

    def in_bs(self, rng, count):
        out = np.empty((0, 2), dtype=np.int64)
        A, B, C = (np.array([float(v) for v in p]) for p in self.bs.corners)
        while len(out) < count:
            need = count - len(out)
            P = self._in_triangle(rng, np.tile(A, (need, 1)), np.tile(B, (need, 1)), np.tile(C, (need, 1)))
            ok = np.array([self.bs.contains((int(x), int(y))) for x, y in P], dtype=bool)
            out = np.concatenate((out, P[ok]))
        return out


def _generate(S: ConvexSubdivision, spec: WorkloadSpec):
    rng = np.random.default_rng(spec.seed)
    smp = _Sampler(S)
    R = len(S.regions)
    n = spec.length
    hot_sets = []
    if spec.kind == "UNIFORM":
        P = smp.in_bs(rng, n)
    elif spec.kind == "ZIPF":
        ranked = rng.permutation(R)[: (spec.hot or R)]
        w = 1.0 / np.arange(1, len(ranked) + 1) ** spec.zipf_s
        pick = ranked[rng.choice(len(ranked), size=n, p=w / w.sum())]
        P = smp.in_regions(rng, pick)
        hot_sets.append(sorted(int(r) for r in ranked))
    else:
        P = np.empty((n, 2), dtype=np.int64)
        phase = spec.phase if spec.kind == "DRIFT" else n
        k = min(spec.hot, R)
        for lo in range(0, n, max(phase, 1)):
            hi = min(n, lo + phase)
            hot = rng.choice(R, size=k, replace=False)
            hot_sets.append(sorted(int(h) for h in hot))
            m = hi - lo
            is_hot = rng.uniform(0, 1, m) < spec.mass
            block = np.empty((m, 2), dtype=np.int64)
            nh = int(is_hot.sum())
            if nh:
                block[is_hot] = smp.in_regions(rng, hot[rng.integers(0, k, nh)])
            if m - nh:
                block[~is_hot] = smp.in_bs(rng, m - nh)
            P[lo:hi] = block
    return [(int(x), int(y)) for x, y in P], hot_sets


def generate_workload(S: ConvexSubdivision, spec: WorkloadSpec) -> list:
    """Query points (doubled coordinates) for ``spec``; deterministic per seed."""
    return _generate(S, spec)[0]


def hot_regions(S: ConvexSubdivision, spec: WorkloadSpec) -> list:
    """Per phase, the region ids the workload concentrates on."""
    return _generate(S, spec)[1]


# --- oracle ------------------------------------------------------------------

class RegionOracle:
    """Linear-scan semantics: the lowest region id whose closure holds q.

    Regions are bucketed by bounding box so that the scan only visits
    candidates; the answer is the same as scanning every region.
    """

    def __init__(self, S: ConvexSubdivision, cells: int | None = None):
        self.S = S
        self.polys = [S.region_polygon(r) for r in range(len(S.regions))]
        xs = [p[0] for p in S.vertices]
        ys = [p[1] for p in S.vertices]
        self.x0, self.y0 = min(xs), min(ys)
        g = cells or max(1, int(math.sqrt(len(self.polys))))
        self.g = g
        self.wx = (max(xs) - self.x0) / g or 1
        self.wy = (max(ys) - self.y0) / g or 1
        self.grid = [[] for _ in range(g * g)]
        for r, poly in enumerate(self.polys):
            bx = [p[0] for p in poly]
            by = [p[1] for p in poly]
            i0, i1 = self._cx(min(bx)), self._cx(max(bx))
            j0, j1 = self._cy(min(by)), self._cy(max(by))
            for i in range(i0, i1 + 1):
                for j in range(j0, j1 + 1):
                    self.grid[j * g + i].append(r)

    def _cx(self, x):
        return min(self.g - 1, max(0, int((x - self.x0) / self.wx)))

    def _cy(self, y):
        return min(self.g - 1, max(0, int((y - self.y0) / self.wy)))

    def locate(self, q, counter=None) -> int:
        """Region id or EXTERIOR; ``counter`` collects the side tests made."""
        x, y = q
        tests = 2
        ans = EXTERIOR
        if x >= self.x0 and y >= self.y0:
            for r in self.grid[self._cy(y) * self.g + self._cx(x)]:
                poly = self.polys[r]
                k = len(poly)
                for t in range(k):
                    a, b = poly[t], poly[(t + 1) % k]
                    tests += 1
                    if (b[0] - a[0]) * (y - a[1]) - (b[1] - a[1]) * (x - a[0]) < 0:
                        break
                else:
                    ans = r
                    break
        if counter is not None:
            counter.count += tests
        return ans


def region_oracle_scan(S: ConvexSubdivision, q) -> int:
    """Unaccelerated reference scan, used to cross-check the oracle."""
    for r in range(len(S.regions)):
        poly = S.region_polygon(r)
        k = len(poly)
        if all(orient_sign(poly[t], poly[(t + 1) % k], q) >= 0 for t in range(k)):
            return r
    return EXTERIOR
