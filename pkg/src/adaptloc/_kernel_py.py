"""Pure-Python query kernels (fallback for the compiled ``_kernel`` module).

Both implementations must agree exactly, answers and comparison counts.

Cost accounting: one comparison per internal DAG node, three for the
closed-triangle boundary check at a labelled leaf, two at an empty leaf
(is q on the trapezoid's bottom segment / at its left vertex), plus three
if that rescues a closed container.  One step is one node visit.
"""

XNODE, YNODE, LEAF = 0, 1, 2


def _leaf_check(P, ta, tb, tc, t, q):
    a, b, c = P[ta[t]], P[tb[t]], P[tc[t]]
    zeros = []
    for u, v, iu, iv in ((a, b, ta[t], tb[t]), (b, c, tb[t], tc[t]), (c, a, tc[t], ta[t])):
        d = (v[0] - u[0]) * (q[1] - u[1]) - (v[1] - u[1]) * (q[0] - u[0])
        if d == 0:
            zeros.append((iu, iv))
    if not zeros:
        return 0, -1, -1
    if len(zeros) == 1:
        return 1, zeros[0][0], zeros[0][1]
    e1, e2 = zeros[0], zeros[1]
    v = e1[0] if e1[0] in e2 else e1[1]
    return 2, v, -1


def _visit(P, T, D, n, q):
    """Visit node n; return (next_node or -1, leaf_label, comparisons)."""
    kind = D.kind_l[n]
    if kind == XNODE:
        p = P[D.a_l[n]]
        left = q[0] < p[0] or (q[0] == p[0] and q[1] < p[1])
        return (D.c0_l[n] if left else D.c1_l[n]), None, 1
    if kind == YNODE:
        s = D.a_l[n]
        u, v = P[D.sp_l[s]], P[D.sq_l[s]]
        d = (v[0] - u[0]) * (q[1] - u[1]) - (v[1] - u[1]) * (q[0] - u[0])
        return (D.c0_l[n] if d < 0 else D.c1_l[n]), None, 1
    t = D.a_l[n]
    if t >= 0:
        return -1, t, 3
    # empty leaf: q may still lie on the bottom segment or the left point
    c = 0
    b = D.c0_l[n]
    if b >= 0 and D.sb_l[b] >= 0:
        c += 1
        u, v = P[D.sp_l[b]], P[D.sq_l[b]]
        if (v[0] - u[0]) * (q[1] - u[1]) - (v[1] - u[1]) * (q[0] - u[0]) == 0:
            return -1, D.sb_l[b], c + 3
    r = D.c1_l[n]
    if r >= 0 and D.aux_l[n] >= 0:
        c += 1
        if P[r][0] == q[0] and P[r][1] == q[1]:
            return -1, D.aux_l[n], c + 3
    return -1, -1, c


def locate(T, D, root, qx, qy):
    """Run one DAG to completion: (tid, bcode, b1, b2, comparisons, steps)."""
    P = T.points
    q = (qx, qy)
    n = root
    cmp = steps = 0
    while True:
        n, lab, c = _visit(P, T, D, n, q)
        cmp += c
        steps += 1
        if n < 0:
            break
    if lab < 0:
        return -1, 0, -1, -1, cmp, steps
    bc, b1, b2 = _leaf_check(P, T.ta_l, T.tb_l, T.tc_l, lab, q)
    return lab, bc, b1, b2, cmp, steps


def cascade(T, A, B, qx, qy):
    """Probe A's roots in order, then B's DAG, until a triangle is found."""
    P = T.points
    q = (qx, qy)
    cmp = steps = 0
    lab = -1
    for D, root in [(A, r) for r in A.roots] + [(B, B.roots[0])]:
        n = root
        while n >= 0:
            n, lab, c = _visit(P, T, D, n, q)
            cmp += c
            steps += 1
        if lab >= 0:
            break
    if lab < 0:
        return -1, 0, -1, -1, cmp, steps
    bc, b1, b2 = _leaf_check(P, T.ta_l, T.tb_l, T.tc_l, lab, q)
    return lab, bc, b1, b2, cmp, steps


def interleave(T, A, B, qx, qy):
    """Alternate single steps of the cascade levels of A and the worst-case
    DAG B, starting with A.  Once A runs out of levels its remaining walk
    would repeat B's, so B continues alone.

    Returns (winner, tid, bcode, b1, b2, cmpA, cmpB, stepsA, stepsB);
    winner 0 is A, 1 is B.
    """
    P = T.points
    q = (qx, qy)
    lvl = 0
    live = len(A.roots) > 0
    na = A.roots[0] if live else -1
    nb = B.roots[0]
    cmpa = cmpb = sa = sb = 0
    while True:
        if live:
            n, lab, c = _visit(P, T, A, na, q)
            cmpa += c
            sa += 1
            if n >= 0:
                na = n
            elif lab >= 0:
                winner, tid = 0, lab
                break
            elif lvl + 1 < len(A.roots):
                lvl += 1
                na = A.roots[lvl]
            else:
                live = False
        n, lab, c = _visit(P, T, B, nb, q)
        cmpb += c
        sb += 1
        if n >= 0:
            nb = n
        else:
            winner, tid = 1, lab
            break
    if tid < 0:
        return winner, -1, 0, -1, -1, cmpa, cmpb, sa, sb
    bc, b1, b2 = _leaf_check(P, T.ta_l, T.tb_l, T.tc_l, tid, q)
    return winner, tid, bc, b1, b2, cmpa, cmpb, sa, sb
