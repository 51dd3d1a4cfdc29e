"""Frequency-independent canonical triangulation.

Bounded regions are triangulated by alternate-vertex peeling; each fin is cut
recursively along the supporting line of its middle tail edge and every
resulting triangular piece is fanned from its apex.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from .geometry import line_intersection, line_through, orient_sign, signed_area2
from .subdivision import EXTERIOR, ConvexSubdivision, Fin, compute_fins, enclosing_triangle
from .triangulation import Triangulation


@dataclass
class RegionTriangulation:
    triangles: list  # vertex triples, as given in the input polygon
    levels: list

    @property
    def depth(self) -> int:
        return max(self.levels, default=0)


def tri_reg(poly) -> RegionTriangulation:
    """Peel every other vertex until a triangle or segment remains."""
    cur = list(poly)
    if len(cur) < 3:
        raise ValueError("need at least 3 vertices")
    tris, levels = [], []
    level = 1
    while len(cur) > 3:
        k = len(cur)
        keep = list(range(0, k, 2))
        for a in keep:
            if a + 1 < k:
                tris.append((cur[a], cur[a + 1], cur[(a + 2) % k]))
                levels.append(level)
        cur = [cur[i] for i in keep]
        level += 1
    if len(cur) == 3:
        tris.append(tuple(cur))
        levels.append(level)
    return RegionTriangulation(tris, levels)


# --- fins -------------------------------------------------------------------


@dataclass
class FinNode:
    id: int
    apex: tuple
    p1: tuple
    p2: tuple
    edge: list  # vertices of the middle tail edge (collinear run)
    base: list = field(default_factory=list)  # p1 .. p2, every vertex on that side
    left: int | None = None
    right: int | None = None
    parent: int | None = None
    depth: int = 0

    def region(self):
        return (self.apex, self.p1, self.p2)


@dataclass
class FinTree:
    corner: int
    apex: tuple
    tail: list
    nodes: list = field(default_factory=list)

    @property
    def root(self) -> FinNode:
        return self.nodes[0]

    @property
    def height(self) -> int:
        return 1 + max(n.depth for n in self.nodes)

    def ancestors(self, nid):
        out = []
        while nid is not None:
            out.append(nid)
            nid = self.nodes[nid].parent
        return out

    def path_to(self, nid):
        return list(reversed(self.ancestors(nid)))


def straight_runs(chain):
    """Group a chain into maximal collinear runs (consecutive runs share ends)."""
    runs = [[chain[0], chain[1]]]
    for v in chain[2:]:
        run = runs[-1]
        if orient_sign(run[-2], run[-1], v) == 0:
            run.append(v)
        else:
            runs.append([run[-1], v])
    return runs


def split_fin(fin: Fin) -> FinTree:
    """Middle-edge recursion; node ids are assigned in preorder."""
    tree = FinTree(fin.corner, fin.apex, list(fin.tail))
    runs = straight_runs(fin.tail)
    _split(tree, fin.apex, runs, None, 0)
    return tree


def _split(tree, apex, runs, parent, depth):
    m = len(runs)
    j = m // 2
    E = runs[j]
    V0, Vk = runs[0][0], runs[-1][-1]
    L = line_through(E[0], E[-1])
    p1 = V0 if j == 0 else line_intersection(L, line_through(apex, V0))
    p2 = Vk if j == m - 1 else line_intersection(L, line_through(apex, Vk))
    node = FinNode(len(tree.nodes), apex, p1, p2, list(E), parent=parent, depth=depth)
    tree.nodes.append(node)
    head1, head2 = [], []
    lh2, rh1 = [], []
    if j > 0:
        node.left, lh1, lh2 = _split(tree, p1, runs[:j], node.id, depth + 1)
        head1 = [p1] + lh1
    if j < m - 1:
        node.right, rh1, rh2 = _split(tree, p2, runs[j + 1 :], node.id, depth + 1)
        head2 = [p2] + rh2
    base = ([p1] + lh2 if j > 0 else []) + list(E) + (list(reversed(rh1)) + [p2] if j < m - 1 else [])
    node.base = base
    return node.id, head1, head2


def tri_fin(tree: FinTree):
    """Fan every triangular piece from its apex: list of (triangle, node id)."""
    out = []
    for node in tree.nodes:
        b = node.base
        for u, v in zip(b, b[1:]):
            out.append(((node.apex, u, v), node.id))
    return out


# --- whole subdivision --------------------------------------------------------


@dataclass
class CanonicalTriangulation:
    S: ConvexSubdivision
    B: object
    fins: list
    fin_trees: dict  # corner -> FinTree
    tri: Triangulation


def build_canonical(S: ConvexSubdivision) -> CanonicalTriangulation:
    B = enclosing_triangle(S)
    fins = compute_fins(S, B)
    T = Triangulation(S.vertices)
    for c in B.corners:
        T.add_point(c)
    for r, idx in enumerate(S.regions):
        rt = tri_reg([S.vertices[i] for i in idx])
        for tri, lev in zip(rt.triangles, rt.levels):
            T.add_triangle(*tri, region=r, level=lev)
    trees = {}
    for fin in fins:
        tree = split_fin(fin)
        trees[fin.corner] = tree
        for tri, nid in tri_fin(tree):
            T.add_triangle(*tri, region=EXTERIOR, fin_node=(fin.corner, nid))
    return CanonicalTriangulation(S, B, fins, trees, T)


def fin_area2(fin: Fin) -> int:
    return signed_area2(fin.polygon())
