"""Layer builder for convex subdivisions.

From the hot triangles of one layer, build the next layer's regions (the
convex hull of the hot triangles of each region, and each fin shrunk to
the pieces holding hot triangles), fill the rest of B_S with filler
triangles and triangulate everything.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from .canonical import FinTree, split_fin, tri_fin, tri_reg
from .fill import fill_gaps
from .geometry import GeometryError, convex_hull, orient_sign
from .subdivision import EXTERIOR, Fin
from .triangulation import Triangulation


class BuilderError(RuntimeError):
    pass


@dataclass
class HotSet:
    by_region: dict = field(default_factory=dict)  # region id -> triangle ids
    by_fin: dict = field(default_factory=dict)  # corner -> [(triangle id, node id)]

    def __len__(self):
        return sum(map(len, self.by_region.values())) + sum(map(len, self.by_fin.values()))


def group_hot(tri: Triangulation, X) -> HotSet:
    """Split the selected triangles by owning region; filler triangles are ignored."""
    hs = HotSet()
    for t in X:
        r = tri.region[t]
        if r is None:
            continue
        if r == EXTERIOR:
            corner, nid = tri.fin_node[t]
            hs.by_fin.setdefault(corner, []).append((t, nid))
        else:
            hs.by_region.setdefault(r, []).append(t)
    return hs


@dataclass
class LayerRegions:
    hulls: dict  # region id -> CCW polygon
    fins: dict  # corner -> shrunk Fin
    marks: dict = field(default_factory=dict)  # corner -> marked node ids

    @property
    def vertex_count(self) -> int:
        pts = {p for poly in self.hulls.values() for p in poly}
        for f in self.fins.values():
            pts.update(f.polygon())
        return len(pts)


def mark_nodes(tree: FinTree, nodes) -> set:
    """The given nodes and all their ancestors."""
    marked = set()
    for nid in nodes:
        while nid is not None and nid not in marked:
            marked.add(nid)
            nid = tree.nodes[nid].parent
    return marked


def _chain(tree: FinTree, nid, marked):
    node = tree.nodes[nid]
    base = node.base
    left = _chain(tree, node.left, marked) if node.left in marked else [node.p1]
    right = _chain(tree, node.right, marked) if node.right in marked else [node.p2]
    i = base.index(left[-1])
    j = base.index(right[0])
    return left[:-1] + base[i:j + 1] + right[1:]


def shrink_fin(tree: FinTree, marked, keep_points=frozenset()) -> Fin:
    """Union of the marked pieces (ancestor-closed, root included) as a fin.

    Tail vertices in ``keep_points`` survive even where the tail is straight;
    other straight-through vertices are dropped.
    """
    if 0 not in marked:
        raise BuilderError("marked set must contain the root")
    chain = _chain(tree, 0, marked)
    out = [chain[0]]
    for k in range(1, len(chain) - 1):
        v = chain[k]
        if v in keep_points or orient_sign(out[-1], v, chain[k + 1]) != 0:
            out.append(v)
    out.append(chain[-1])
    return Fin(tree.corner, tree.apex, out, [])


def build_regions(tri: Triangulation, fin_trees: dict, X, keep_points=frozenset()) -> LayerRegions:
    hs = group_hot(tri, X)
    hulls = {}
    for r, ts in hs.by_region.items():
        pts = [p for t in ts for p in tri.tri_points(t)]
        hull = convex_hull(pts)
        if len(hull) < 3:
            raise GeometryError(f"degenerate hull in region {r}")
        hulls[r] = hull
    fins, marks = {}, {}
    for corner, items in hs.by_fin.items():
        tree = fin_trees[corner]
        marked = mark_nodes(tree, [nid for _, nid in items])
        marks[corner] = marked
        fins[corner] = shrink_fin(tree, marked, keep_points)
    return LayerRegions(hulls, fins, marks)


def triangulate_layer(R: LayerRegions, corners):
    """Triangulation of B_S: hulls, shrunk fins and filler.

    Returns ``(Triangulation, fin_trees)``; filler triangles carry no payload.
    """
    T = Triangulation()
    for c in corners:
        T.add_point(c)
    for r in sorted(R.hulls):
        rt = tri_reg(R.hulls[r])
        for t, lev in zip(rt.triangles, rt.levels):
            T.add_triangle(*t, region=r, level=lev)
    trees = {}
    for corner in sorted(R.fins):
        tree = split_fin(R.fins[corner])
        trees[corner] = tree
        for t, nid in tri_fin(tree):
            T.add_triangle(*t, region=EXTERIOR, fin_node=(corner, nid))
    polys = [(R.hulls[r], True) for r in sorted(R.hulls)]
    polys += [(R.fins[c].polygon(), False) for c in sorted(R.fins)]
    for t in fill_gaps(polys, corners):
        T.add_triangle(*t)
    return T, trees


def convex_layer_builder(tri: Triangulation, fin_trees: dict, X, corners, keep_points=frozenset()):
    """Full builder step: regions, filler, triangulation."""
    R = build_regions(tri, fin_trees, X, keep_points)
    T, trees = triangulate_layer(R, corners)
    return R, T, trees
