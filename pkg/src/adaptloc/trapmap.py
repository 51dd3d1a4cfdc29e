"""Randomised incremental trapezoidal map (search DAG builder).

Degenerate x-coordinates are handled by the usual symbolic shear: points are
ordered lexicographically.  The trapezoids crossed by a new segment are found
by re-querying the DAG with a probe that sits on the segment just to the
right of a given point, so no neighbour pointers are kept.
"""
from __future__ import annotations

import math
import random

import numpy as np

from .geometry import orient_sign
from .kernels import _kernel_c

XNODE, YNODE, LEAF = 0, 1, 2
NONE = -1


class OverlapError(ValueError):
    pass


def _lt(a, b):
    return a[0] < b[0] or (a[0] == b[0] and a[1] < b[1])


class _Builder:
    def __init__(self, pts, segs):
        self.P = pts
        self.S = segs  # list of (p, q) point indices, p <lex q
        self.kind = [LEAF]
        self.a = [0]
        self.c0 = [-1]
        self.c1 = [-1]
        # trapezoid 0: everything
        self.top = [-1]
        self.bot = [-1]
        self.lp = [-1]
        self.rp = [-1]
        self.node_of = [0]

    def _new_trap(self, top, bot, lp, rp):
        d = len(self.top)
        self.top.append(top)
        self.bot.append(bot)
        self.lp.append(lp)
        self.rp.append(rp)
        n = len(self.kind)
        self.kind.append(LEAF)
        self.a.append(d)
        self.c0.append(-1)
        self.c1.append(-1)
        self.node_of.append(n)
        return d

    def _above(self, s, t):
        """Is segment s above segment t on their common x-range?"""
        P, S = self.P, self.S
        sp, sq = S[s]
        tp, tq = S[t]
        if sp == tp:
            o = orient_sign(P[tp], P[tq], P[sq])
        elif _lt(P[tp], P[sp]):
            o = orient_sign(P[tp], P[tq], P[sp])
            if o == 0:
                o = orient_sign(P[tp], P[tq], P[sq])
        else:
            o = -orient_sign(P[sp], P[sq], P[tp])
            if o == 0:
                o = -orient_sign(P[sp], P[sq], P[tq])
        if o == 0:
            raise OverlapError(f"collinear overlapping segments {S[s]} {S[t]}")
        return o > 0

    def _locate(self, s, pi):
        P = self.P
        kind, a, c0, c1 = self.kind, self.a, self.c0, self.c1
        pt = P[pi]
        n = 0
        while kind[n] != LEAF:
            if kind[n] == XNODE:
                n = c0[n] if _lt(pt, P[a[n]]) else c1[n]
            else:
                n = c1[n] if self._above(s, a[n]) else c0[n]
        return a[n]

    def _set(self, n, k, a, c0, c1):
        self.kind[n] = k
        self.a[n] = a
        self.c0[n] = c0
        self.c1[n] = c1

    def _new_node(self, k, a, c0, c1):
        self.kind.append(k)
        self.a.append(a)
        self.c0.append(c0)
        self.c1.append(c1)
        return len(self.kind) - 1

    def insert(self, s):
        P, S = self.P, self.S
        p, q = S[s]
        seq = [self._locate(s, p)]
        while True:
            r = self.rp[seq[-1]]
            if r == -1 or not _lt(P[r], P[q]):
                break
            seq.append(self._locate(s, r))
        d0, dk = seq[0], seq[-1]
        for d in seq:
            if self.top[d] == s or self.bot[d] == s:
                raise OverlapError("duplicate segment")
        # upper / lower pieces
        up_of, lo_of = [], []
        cu = self._new_trap(self.top[d0], s, p, -1)
        cl = self._new_trap(s, self.bot[d0], p, -1)
        for j, d in enumerate(seq):
            up_of.append(cu)
            lo_of.append(cl)
            if j < len(seq) - 1:
                r = self.rp[d]
                nxt = seq[j + 1]
                if orient_sign(P[p], P[q], P[r]) > 0:
                    self.rp[cu] = r
                    cu = self._new_trap(self.top[nxt], s, r, -1)
                else:
                    self.rp[cl] = r
                    cl = self._new_trap(s, self.bot[nxt], r, -1)
        self.rp[cu] = q
        self.rp[cl] = q
        A = B = None
        if self.lp[d0] == -1 or _lt(P[self.lp[d0]], P[p]):
            A = self._new_trap(self.top[d0], self.bot[d0], self.lp[d0], p)
        if self.rp[dk] == -1 or _lt(P[q], P[self.rp[dk]]):
            B = self._new_trap(self.top[dk], self.bot[dk], q, self.rp[dk])
        no = self.node_of
        for j, d in enumerate(seq):
            n = no[d]
            ynode_children = (no[lo_of[j]], no[up_of[j]])
            first, last = j == 0, j == len(seq) - 1
            if first and A is not None and last and B is not None:
                y = self._new_node(YNODE, s, *ynode_children)
                xq = self._new_node(XNODE, q, y, no[B])
                self._set(n, XNODE, p, no[A], xq)
            elif first and A is not None:
                if last and B is None:
                    y = self._new_node(YNODE, s, *ynode_children)
                    self._set(n, XNODE, p, no[A], y)
                else:
                    y = self._new_node(YNODE, s, *ynode_children)
                    self._set(n, XNODE, p, no[A], y)
            elif last and B is not None:
                y = self._new_node(YNODE, s, *ynode_children)
                self._set(n, XNODE, q, y, no[B])
            else:
                self._set(n, YNODE, s, *ynode_children)
            no[d] = -1


class Dag:
    """Flat search DAG: node kind / payload / two children.

    Leaves carry a triangle id or ``NONE``.  For x-nodes ``c0`` is the left
    child; for y-nodes ``c0`` is the child below the segment.  An empty leaf
    keeps its trapezoid's bottom segment in ``c0``, its left vertex in ``c1``
    and a covered triangle incident to that vertex in ``aux``, so that a query
    lying on the boundary of the covered area still finds a closed container.
    """

    def __init__(self, kind, a, c0, c1, aux, seg_p, seg_q, seg_below, n_tris):
        self.kind = np.asarray(kind, dtype=np.int8)
        self.a = np.asarray(a, dtype=np.int32)
        self.c0 = np.asarray(c0, dtype=np.int32)
        self.c1 = np.asarray(c1, dtype=np.int32)
        self.aux = np.asarray(aux, dtype=np.int32)
        self.seg_p = np.asarray(seg_p, dtype=np.int32)
        self.seg_q = np.asarray(seg_q, dtype=np.int32)
        self.seg_below = np.asarray(seg_below, dtype=np.int32)
        self.n_tris = n_tris
        self.root = 0
        self._depth = None

    @property
    def size(self) -> int:
        return len(self.kind)

    @property
    def depth(self) -> int:
        """Longest root-to-leaf path, counted in nodes."""
        if self._depth is None:
            kind, c0, c1 = self.kind.tolist(), self.c0.tolist(), self.c1.tolist()
            memo = [0] * len(kind)
            order = []
            stack = [0]
            seen = [False] * len(kind)
            while stack:
                n = stack.pop()
                if n >= 0:
                    if seen[n]:
                        continue
                    seen[n] = True
                    stack.append(~n)
                    if kind[n] != LEAF:
                        stack.append(c0[n])
                        stack.append(c1[n])
                else:
                    order.append(~n)
            for n in order:
                memo[n] = 1 if kind[n] == LEAF else 1 + max(memo[c0[n]], memo[c1[n]])
            self._depth = memo[0]
        return self._depth


def build_dag(points, tris, tri_ids=None, seed=0, packed=None, pure=False, weights=None) -> Dag:
    """Search DAG over the given triangles (point-index triples, any winding).

    ``tri_ids`` are the labels stored at leaves (default ``range(len(tris))``).
    With a ``packed`` triangle table the compiled builder is used unless
    ``pure`` is set; both give the same DAG for the same seed.
    Triangles must not overlap; segments are shared edges of adjacent
    triangles.  With ``weights`` (one per triangle) the insertion order is a
    weighted random permutation: a segment's weight is the larger weight of
    its two triangles, and heavy segments tend to go in first, which keeps
    heavy triangles near the root.
    """
    if tri_ids is None:
        tri_ids = range(len(tris))
    P = points
    edges = {}
    for tid, (a, b, c) in zip(tri_ids, tris):
        o = orient_sign(P[a], P[b], P[c])
        if o == 0:
            raise OverlapError("degenerate triangle")
        if o < 0:
            b, c = c, b
        # counter-clockwise: the triangle lies left of each directed edge,
        # i.e. above it when the edge runs left to right
        for u, v in ((a, b), (b, c), (c, a)):
            if _lt(P[v], P[u]):
                u, v, side = v, u, 0
            else:
                side = 1
            slot = edges.setdefault((u, v), [NONE, NONE])
            if slot[side] != NONE:
                raise OverlapError(f"triangles {slot[side]} and {tid} overlap along an edge")
            slot[side] = tid
    segs = list(edges)
    below = np.array([edges[e][0] for e in segs], dtype=np.int32)
    above = np.array([edges[e][1] for e in segs], dtype=np.int32)
    seg_p = np.array([s[0] for s in segs], dtype=np.int32)
    seg_q = np.array([s[1] for s in segs], dtype=np.int32)
    rng = random.Random(seed)
    order = list(range(len(segs)))
    if weights is None:
        rng.shuffle(order)
    else:
        wmap = dict(zip(tri_ids, weights))
        key = []
        for e in segs:
            w = max(wmap.get(t, 0) for t in edges[e] if t != NONE)
            # exponential race: smaller key goes first, rate w
            key.append((rng.expovariate(w), 0.0) if w > 0 else (math.inf, rng.random()))
        order.sort(key=key.__getitem__)
    if packed is not None and packed.c is not None and not pure:
        tb = _kernel_c.TrapBuilder(packed.c, seg_p, seg_q)
        if tb.run(np.asarray(order, dtype=np.int32)):
            raise OverlapError("segments overlap")
        kind, a, c0, c1, top, bot, lp, rp = tb.arrays()
    else:
        b = _Builder(P, segs)
        for s in order:
            b.insert(s)
        kind, a, c0, c1, top, bot, lp, rp = (
            np.asarray(v, dtype=np.int32) for v in (b.kind, b.a, b.c0, b.c1, b.top, b.bot, b.lp, b.rp)
        )
    vmin = np.full(len(P), NONE, dtype=np.int32)
    for tid, tri in sorted(zip(tri_ids, tris), reverse=True):
        vmin[list(tri)] = tid
    leaf = kind == LEAF
    d = a[leaf]
    lab = np.full(len(d), NONE, dtype=np.int32)
    has_top = top[d] != -1
    lab[has_top] = below[top[d][has_top]]
    use_bot = ~has_top & (bot[d] != -1)
    lab[use_bot] = above[bot[d][use_bot]]
    a = a.copy()
    a[leaf] = lab
    aux = np.full(len(a), NONE, dtype=np.int32)
    empty = np.flatnonzero(leaf)[lab == NONE]
    de = d[lab == NONE]
    c0 = c0.copy()
    c1 = c1.copy()
    c0[empty] = bot[de]
    c1[empty] = lp[de]
    has_lp = lp[de] != -1
    aux[empty[has_lp]] = vmin[lp[de][has_lp]]
    return Dag(kind, a, c0, c1, aux, seg_p, seg_q, below, len(tris))
