# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
# distutils: language = c++
"""Compiled query kernels and DAG builder; mirror the Python versions exactly."""
from libc.math cimport fabs
from libcpp.vector cimport vector

import numpy as np

from .geometry import orient_sign

cdef extern from *:
    """
    static inline int orient128(long long ax, long long ay, long long bx, long long by,
                                long long cx, long long cy) {
        __int128 d = (__int128)(bx - ax) * (__int128)(cy - ay)
                   - (__int128)(by - ay) * (__int128)(cx - ax);
        return (d > 0) - (d < 0);
    }
    """
    int orient128(long long ax, long long ay, long long bx, long long by,
                  long long cx, long long cy) nogil

cdef double U = 1.1102230246251565e-16  # 2**-53


cdef class CTris:
    cdef public object points
    cdef long long[:] ix
    cdef long long[:] iy
    cdef double[:] fx
    cdef double[:] fy
    cdef unsigned char[:] isint
    cdef int[:] ta
    cdef int[:] tb
    cdef int[:] tc

    def __init__(self, points, ix, iy, fx, fy, isint, ta, tb, tc):
        self.points = points
        self.ix = ix
        self.iy = iy
        self.fx = fx
        self.fy = fy
        self.isint = isint
        self.ta = ta
        self.tb = tb
        self.tc = tc


cdef class CDag:
    cdef signed char[:] kind
    cdef int[:] a
    cdef int[:] c0
    cdef int[:] c1
    cdef int[:] aux
    cdef int[:] sp
    cdef int[:] sq
    cdef int[:] sb
    cdef int[:] roots
    cdef public int nroots

    def __init__(self, kind, a, c0, c1, aux, sp, sq, sb, roots):
        self.kind = kind
        self.a = a
        self.c0 = c0
        self.c1 = c1
        self.aux = aux
        self.sp = sp
        self.sq = sq
        self.sb = sb
        self.roots = roots
        self.nroots = len(roots)


cdef int _orient_q(CTris T, int i, int j, long long qx, long long qy):
    """Sign of orient(P[i], P[j], q)."""
    cdef double ax, ay, bx, by, d, m, bound, dx1, dy1, dx2, dy2
    if T.isint[i] and T.isint[j]:
        return orient128(T.ix[i], T.iy[i], T.ix[j], T.iy[j], qx, qy)
    ax = T.fx[i]; ay = T.fy[i]; bx = T.fx[j]; by = T.fy[j]
    dx1 = bx - ax; dy1 = by - ay
    dx2 = <double>qx - ax; dy2 = <double>qy - ay
    d = dx1 * dy2 - dy1 * dx2
    m = fabs(ax)
    if fabs(ay) > m: m = fabs(ay)
    if fabs(bx) > m: m = fabs(bx)
    if fabs(by) > m: m = fabs(by)
    if fabs(<double>qx) > m: m = fabs(<double>qx)
    if fabs(<double>qy) > m: m = fabs(<double>qy)
    bound = 8.0 * U * (m * (fabs(dx1) + fabs(dy1) + fabs(dx2) + fabs(dy2))
                       + fabs(dx1 * dy2) + fabs(dy1 * dx2)) + 1e-300
    if d > bound:
        return 1
    if d < -bound:
        return -1
    P = T.points
    return orient_sign(P[i], P[j], (qx, qy))


cdef int _q_left_of(CTris T, int i, long long qx, long long qy):
    cdef double px, tol
    if T.isint[i]:
        return qx < T.ix[i] or (qx == T.ix[i] and qy < T.iy[i])
    px = T.fx[i]
    tol = 4.0 * U * fabs(px) + 1e-300
    if <double>qx < px - tol:
        return 1
    if <double>qx > px + tol:
        return 0
    p = T.points[i]
    return qx < p[0] or (qx == p[0] and qy < p[1])


cdef int _point_eq(CTris T, int i, long long qx, long long qy):
    if T.isint[i]:
        return T.ix[i] == qx and T.iy[i] == qy
    return 0


cdef inline int _visit(CTris T, CDag D, int n, long long qx, long long qy, int* lab, int* cmp):
    cdef int k = D.kind[n]
    cdef int s
    if k == 0:
        cmp[0] += 1
        if _q_left_of(T, D.a[n], qx, qy):
            return D.c0[n]
        return D.c1[n]
    if k == 1:
        cmp[0] += 1
        s = D.a[n]
        if _orient_q(T, D.sp[s], D.sq[s], qx, qy) < 0:
            return D.c0[n]
        return D.c1[n]
    cdef int b, r
    lab[0] = D.a[n]
    if lab[0] >= 0:
        cmp[0] += 3
        return -1
    b = D.c0[n]
    if b >= 0 and D.sb[b] >= 0:
        cmp[0] += 1
        if _orient_q(T, D.sp[b], D.sq[b], qx, qy) == 0:
            lab[0] = D.sb[b]
            cmp[0] += 3
            return -1
    r = D.c1[n]
    if r >= 0 and D.aux[n] >= 0:
        cmp[0] += 1
        if _point_eq(T, r, qx, qy):
            lab[0] = D.aux[n]
            cmp[0] += 3
            return -1
    return -1


cdef tuple _leaf_check(CTris T, int t, long long qx, long long qy):
    cdef int ia = T.ta[t], ib = T.tb[t], ic = T.tc[t]
    cdef int oab = _orient_q(T, ia, ib, qx, qy)
    cdef int obc = _orient_q(T, ib, ic, qx, qy)
    cdef int oca = _orient_q(T, ic, ia, qx, qy)
    cdef int z = (oab == 0) + (obc == 0) + (oca == 0)
    if z == 0:
        return (0, -1, -1)
    if z == 1:
        if oab == 0:
            return (1, ia, ib)
        if obc == 0:
            return (1, ib, ic)
        return (1, ic, ia)
    if oab == 0 and obc == 0:
        return (2, ib, -1)
    if obc == 0 and oca == 0:
        return (2, ic, -1)
    return (2, ia, -1)


def locate(CTris T, CDag D, int root, long long qx, long long qy):
    cdef int n = root, lab = -1, cmp = 0, steps = 0
    while True:
        n = _visit(T, D, n, qx, qy, &lab, &cmp)
        steps += 1
        if n < 0:
            break
    if lab < 0:
        return (-1, 0, -1, -1, cmp, steps)
    bc, b1, b2 = _leaf_check(T, lab, qx, qy)
    return (lab, bc, b1, b2, cmp, steps)


def cascade(CTris T, CDag A, CDag B, long long qx, long long qy):
    cdef int lvl, n, lab = -1, cmp = 0, steps = 0
    for lvl in range(A.nroots + 1):
        if lvl < A.nroots:
            n = A.roots[lvl]
            while True:
                n = _visit(T, A, n, qx, qy, &lab, &cmp)
                steps += 1
                if n < 0:
                    break
        else:
            n = B.roots[0]
            while True:
                n = _visit(T, B, n, qx, qy, &lab, &cmp)
                steps += 1
                if n < 0:
                    break
        if lab >= 0:
            break
    if lab < 0:
        return (-1, 0, -1, -1, cmp, steps)
    bc, b1, b2 = _leaf_check(T, lab, qx, qy)
    return (lab, bc, b1, b2, cmp, steps)


def interleave(CTris T, CDag A, CDag B, long long qx, long long qy):
    cdef int lvl = 0, na = -1, nb, n, lab = -1, cmpa = 0, cmpb = 0, sa = 0, sb = 0
    cdef int winner = 0, tid = -1
    cdef bint live = A.nroots > 0
    if live:
        na = A.roots[0]
    nb = B.roots[0]
    while True:
        if live:
            lab = -1
            n = _visit(T, A, na, qx, qy, &lab, &cmpa)
            sa += 1
            if n >= 0:
                na = n
            elif lab >= 0:
                winner = 0
                tid = lab
                break
            elif lvl + 1 < A.nroots:
                lvl += 1
                na = A.roots[lvl]
            else:
                live = False
        lab = -1
        n = _visit(T, B, nb, qx, qy, &lab, &cmpb)
        sb += 1
        if n >= 0:
            nb = n
        else:
            winner = 1
            tid = lab
            break
    if tid < 0:
        return (winner, -1, 0, -1, -1, cmpa, cmpb, sa, sb)
    bc, b1, b2 = _leaf_check(T, tid, qx, qy)
    return (winner, tid, bc, b1, b2, cmpa, cmpb, sa, sb)


# --- trapezoidal map construction -------------------------------------------

cdef int _lt(CTris T, int i, int j):
    """Point i before point j in lexicographic order."""
    cdef double tol
    if T.isint[i] and T.isint[j]:
        return T.ix[i] < T.ix[j] or (T.ix[i] == T.ix[j] and T.iy[i] < T.iy[j])
    tol = 4.0 * U * (fabs(T.fx[i]) + fabs(T.fx[j])) + 1e-300
    if T.fx[i] < T.fx[j] - tol:
        return 1
    if T.fx[i] > T.fx[j] + tol:
        return 0
    a = T.points[i]
    b = T.points[j]
    return a[0] < b[0] or (a[0] == b[0] and a[1] < b[1])


cdef int _orient3(CTris T, int i, int j, int k):
    cdef double ax, ay, dx1, dy1, dx2, dy2, d, m, bound
    if T.isint[i] and T.isint[j] and T.isint[k]:
        return orient128(T.ix[i], T.iy[i], T.ix[j], T.iy[j], T.ix[k], T.iy[k])
    ax = T.fx[i]; ay = T.fy[i]
    dx1 = T.fx[j] - ax; dy1 = T.fy[j] - ay
    dx2 = T.fx[k] - ax; dy2 = T.fy[k] - ay
    d = dx1 * dy2 - dy1 * dx2
    m = fabs(ax)
    if fabs(ay) > m: m = fabs(ay)
    if fabs(T.fx[j]) > m: m = fabs(T.fx[j])
    if fabs(T.fy[j]) > m: m = fabs(T.fy[j])
    if fabs(T.fx[k]) > m: m = fabs(T.fx[k])
    if fabs(T.fy[k]) > m: m = fabs(T.fy[k])
    bound = 8.0 * U * (m * (fabs(dx1) + fabs(dy1) + fabs(dx2) + fabs(dy2))
                       + fabs(dx1 * dy2) + fabs(dy1 * dx2)) + 1e-300
    if d > bound:
        return 1
    if d < -bound:
        return -1
    P = T.points
    return orient_sign(P[i], P[j], P[k])


cdef object _vec(vector[int]& v):
    out = np.empty(v.size(), dtype=np.int32)
    cdef int[:] o = out
    cdef size_t i
    for i in range(v.size()):
        o[i] = v[i]
    return out


cdef class TrapBuilder:
    """Randomised incremental trapezoidal map; see ``trapmap._Builder``."""
    cdef CTris T
    cdef int[:] sp
    cdef int[:] sq
    cdef vector[int] kind, a, c0, c1, top, bot, lp, rp, node_of
    cdef vector[int] seq, up_of, lo_of
    cdef public int error

    def __init__(self, CTris T, sp, sq):
        self.T = T
        self.sp = sp
        self.sq = sq
        self.error = 0
        self.kind.push_back(2); self.a.push_back(0); self.c0.push_back(-1); self.c1.push_back(-1)
        self.top.push_back(-1); self.bot.push_back(-1); self.lp.push_back(-1); self.rp.push_back(-1)
        self.node_of.push_back(0)

    cdef int _new_trap(self, int top, int bot, int lp, int rp):
        cdef int d = self.top.size()
        self.top.push_back(top); self.bot.push_back(bot); self.lp.push_back(lp); self.rp.push_back(rp)
        cdef int n = self.kind.size()
        self.kind.push_back(2); self.a.push_back(d); self.c0.push_back(-1); self.c1.push_back(-1)
        self.node_of.push_back(n)
        return d

    cdef int _new_node(self, int k, int a, int c0, int c1):
        self.kind.push_back(k); self.a.push_back(a); self.c0.push_back(c0); self.c1.push_back(c1)
        return self.kind.size() - 1

    cdef void _set(self, int n, int k, int a, int c0, int c1):
        self.kind[n] = k; self.a[n] = a; self.c0[n] = c0; self.c1[n] = c1

    cdef int _above(self, int s, int t):
        cdef int sp = self.sp[s], sq = self.sq[s], tp = self.sp[t], tq = self.sq[t], o
        if sp == tp:
            o = _orient3(self.T, tp, tq, sq)
        elif _lt(self.T, tp, sp):
            o = _orient3(self.T, tp, tq, sp)
            if o == 0:
                o = _orient3(self.T, tp, tq, sq)
        else:
            o = -_orient3(self.T, sp, sq, tp)
            if o == 0:
                o = -_orient3(self.T, sp, sq, tq)
        if o == 0:
            self.error = 2
        return o > 0

    cdef int _locate(self, int s, int pi):
        cdef int n = 0
        while self.kind[n] != 2:
            if self.kind[n] == 0:
                if _lt(self.T, pi, self.a[n]):
                    n = self.c0[n]
                else:
                    n = self.c1[n]
            else:
                if self._above(s, self.a[n]):
                    n = self.c1[n]
                else:
                    n = self.c0[n]
        return self.a[n]

    cdef int _insert(self, int s):
        cdef int p = self.sp[s], q = self.sq[s], r, j, d, d0, dk, cu, cl, A, B, n, y, xq, m
        cdef int lo_n, up_n
        self.seq.clear(); self.up_of.clear(); self.lo_of.clear()
        self.seq.push_back(self._locate(s, p))
        while True:
            r = self.rp[self.seq.back()]
            if r == -1 or not _lt(self.T, r, q):
                break
            self.seq.push_back(self._locate(s, r))
        if self.error:
            return self.error
        m = self.seq.size()
        d0 = self.seq[0]
        dk = self.seq[m - 1]
        for j in range(m):
            d = self.seq[j]
            if self.top[d] == s or self.bot[d] == s:
                return 1
        cu = self._new_trap(self.top[d0], s, p, -1)
        cl = self._new_trap(s, self.bot[d0], p, -1)
        for j in range(m):
            d = self.seq[j]
            self.up_of.push_back(cu)
            self.lo_of.push_back(cl)
            if j < m - 1:
                r = self.rp[d]
                if _orient3(self.T, p, q, r) > 0:
                    self.rp[cu] = r
                    cu = self._new_trap(self.top[self.seq[j + 1]], s, r, -1)
                else:
                    self.rp[cl] = r
                    cl = self._new_trap(s, self.bot[self.seq[j + 1]], r, -1)
        self.rp[cu] = q
        self.rp[cl] = q
        A = -1
        B = -1
        if self.lp[d0] == -1 or _lt(self.T, self.lp[d0], p):
            A = self._new_trap(self.top[d0], self.bot[d0], self.lp[d0], p)
        if self.rp[dk] == -1 or _lt(self.T, q, self.rp[dk]):
            B = self._new_trap(self.top[dk], self.bot[dk], q, self.rp[dk])
        for j in range(m):
            d = self.seq[j]
            n = self.node_of[d]
            lo_n = self.node_of[self.lo_of[j]]
            up_n = self.node_of[self.up_of[j]]
            if j == 0 and A != -1:
                y = self._new_node(1, s, lo_n, up_n)
                if j == m - 1 and B != -1:
                    xq = self._new_node(0, q, y, self.node_of[B])
                    self._set(n, 0, p, self.node_of[A], xq)
                else:
                    self._set(n, 0, p, self.node_of[A], y)
            elif j == m - 1 and B != -1:
                y = self._new_node(1, s, lo_n, up_n)
                self._set(n, 0, q, y, self.node_of[B])
            else:
                self._set(n, 1, s, lo_n, up_n)
            self.node_of[d] = -1
        return 0

    def run(self, order):
        """Insert segments in ``order``; return 0, or 1/2 on overlap."""
        cdef int s, rc
        for s in order:
            rc = self._insert(s)
            if rc:
                self.error = rc
                return rc
        return 0

    def arrays(self):
        return (_vec(self.kind), _vec(self.a), _vec(self.c0), _vec(self.c1),
                _vec(self.top), _vec(self.bot), _vec(self.lp), _vec(self.rp))
