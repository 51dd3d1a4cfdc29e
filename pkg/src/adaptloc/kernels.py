"""Kernel selection and packed array layouts shared by both kernels.

The compiled extension is used when importable; set ``ADAPTLOC_PURE=1`` to
force the pure-Python path.
"""
from __future__ import annotations

import os

import numpy as np

from . import _kernel_py

try:
    if os.environ.get("ADAPTLOC_PURE"):
        raise ImportError
    from . import _kernel as _kernel_c
except ImportError:  # pragma: no cover - depends on build
    _kernel_c = None

BACKEND = "cython" if _kernel_c is not None else "python"


class PackedTris:
    """Point table and triangle vertex arrays for one triangulation."""

    def __init__(self, points, tris):
        self.points = list(points)
        self.ta_l = [t[0] for t in tris]
        self.tb_l = [t[1] for t in tris]
        self.tc_l = [t[2] for t in tris]
        self.c = None
        if _kernel_c is not None:
            n = len(self.points)
            ix = np.zeros(n, dtype=np.int64)
            iy = np.zeros(n, dtype=np.int64)
            fx = np.zeros(n, dtype=np.float64)
            fy = np.zeros(n, dtype=np.float64)
            isint = np.zeros(n, dtype=np.uint8)
            for i, (x, y) in enumerate(self.points):
                fx[i] = float(x)
                fy[i] = float(y)
                if isinstance(x, int) and isinstance(y, int):
                    ix[i] = x
                    iy[i] = y
                    isint[i] = 1
            as32 = lambda v: np.asarray(v, dtype=np.int32)  # noqa: E731
            self.c = _kernel_c.CTris(
                self.points, ix, iy, fx, fy, isint, as32(self.ta_l), as32(self.tb_l), as32(self.tc_l)
            )


class PackedDag:
    """One or more search DAGs concatenated into flat arrays, one root each.

    With ``rescue=False`` empty leaves never test whether q lies on a
    neighbouring triangle's boundary; used for cascade levels, where a miss
    simply moves on to the next level.
    """

    def __init__(self, dags, rescue: bool = True):
        kinds, aa, c0s, c1s, auxs, sps, sqs, sbs, roots = [], [], [], [], [], [], [], [], []
        node_off = seg_off = 0
        for d in dags:
            kind = d.kind.astype(np.int8)
            a = d.a.astype(np.int32).copy()
            inner = kind != 2
            c0 = d.c0.astype(np.int32).copy()
            c1 = d.c1.astype(np.int32).copy()
            c0[inner] += node_off
            c1[inner] += node_off
            a[kind == 1] += seg_off
            c0[(~inner) & (c0 >= 0)] += seg_off
            kinds.append(kind)
            aa.append(a)
            c0s.append(c0)
            c1s.append(c1)
            auxs.append(d.aux.astype(np.int32) if rescue else np.full(len(kind), -1, np.int32))
            sps.append(d.seg_p.astype(np.int32))
            sqs.append(d.seg_q.astype(np.int32))
            sbs.append(d.seg_below.astype(np.int32) if rescue else np.full(len(d.seg_p), -1, np.int32))
            roots.append(node_off + d.root)
            node_off += len(kind)
            seg_off += len(d.seg_p)
        cat = lambda xs, dt: np.concatenate(xs).astype(dt) if xs else np.zeros(0, dtype=dt)  # noqa: E731
        self.kind = cat(kinds, np.int8)
        self.a = cat(aa, np.int32)
        self.c0 = cat(c0s, np.int32)
        self.c1 = cat(c1s, np.int32)
        self.aux = cat(auxs, np.int32)
        self.sp = cat(sps, np.int32)
        self.sq = cat(sqs, np.int32)
        self.sb = cat(sbs, np.int32)
        self.roots = roots
        self.c = None
        if _kernel_c is not None:
            self.c = _kernel_c.CDag(
                self.kind, self.a, self.c0, self.c1, self.aux, self.sp, self.sq, self.sb,
                np.asarray(roots, dtype=np.int32),
            )

    def __getattr__(self, name):
        # list mirrors for the Python kernel, built on first use
        if name.endswith("_l") and name[:-2] in ("kind", "a", "c0", "c1", "sp", "sq", "aux", "sb"):
            val = getattr(self, name[:-2]).tolist()
            setattr(self, name, val)
            return val
        raise AttributeError(name)

    @property
    def size(self) -> int:
        return len(self.kind)


def locate(T: PackedTris, D: PackedDag, qx: int, qy: int, root_index: int = 0, backend=None):
    b = backend or BACKEND
    if b == "cython":
        return _kernel_c.locate(T.c, D.c, D.roots[root_index], qx, qy)
    return _kernel_py.locate(T, D, D.roots[root_index], qx, qy)


def cascade(T: PackedTris, A: PackedDag, B: PackedDag, qx: int, qy: int, backend=None):
    b = backend or BACKEND
    if b == "cython":
        return _kernel_c.cascade(T.c, A.c, B.c, qx, qy)
    return _kernel_py.cascade(T, A, B, qx, qy)


def interleave(T: PackedTris, A: PackedDag, B: PackedDag, qx: int, qy: int, backend=None):
    b = backend or BACKEND
    if b == "cython":
        return _kernel_c.interleave(T.c, A.c, B.c, qx, qy)
    return _kernel_py.interleave(T, A, B, qx, qy)
