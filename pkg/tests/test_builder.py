import random
from fractions import Fraction

import pytest

from adaptloc.builder import build_regions, convex_layer_builder, mark_nodes, shrink_fin
from adaptloc.canonical import build_canonical, fin_area2, split_fin, tri_reg
from adaptloc.fill import fill_gaps
from adaptloc.geometry import GeometryError, convex_hull, orient_sign, signed_area2
from adaptloc.locator import build_locator
from adaptloc.subdivision import EXTERIOR
from adaptloc.workloads import region_oracle_scan
from conftest import generated
from helpers import fin_with_edges

CORNERS = ((-64, 0), (64, 0), (0, 64))


@pytest.fixture(scope="module")
def canon():
    return build_canonical(generated(300, 8))


def _centroid(t):
    a, b, c = t
    return (Fraction(a[0] + b[0] + c[0], 3), Fraction(a[1] + b[1] + c[1], 3))


def test_single_hot_triangle_hull(canon):
    T = canon.tri
    t = next(t for t in range(len(T)) if T.region[t] == 5)
    R = build_regions(T, canon.fin_trees, [t])
    assert set(R.hulls[5]) == set(T.tri_points(t))
    assert R.fins == {}


def test_two_triangles_hull(canon):
    T = canon.tri
    ts = [t for t in range(len(T)) if T.region[t] == 3][:2]
    R = build_regions(T, canon.fin_trees, ts)
    pts = [p for t in ts for p in T.tri_points(t)]
    assert R.hulls[3] == convex_hull(pts)
    assert 3 <= len(R.hulls[3]) <= 6


def test_shrink_deep_node():
    fin = fin_with_edges(7)
    tree = split_fin(fin)
    leaf = max(tree.nodes, key=lambda n: n.depth)
    marked = mark_nodes(tree, [leaf.id])
    assert marked == set(tree.ancestors(leaf.id))
    assert len(marked) == leaf.depth + 1
    shrunk = shrink_fin(tree, marked)
    assert 0 < fin_area2(shrunk) <= fin_area2(fin)
    # each shrunk tail edge lies on the support line of an original tail edge
    orig = list(zip(fin.tail, fin.tail[1:]))
    for u, v in zip(shrunk.tail, shrunk.tail[1:]):
        assert any(orient_sign(a, b, u) == 0 and orient_sign(a, b, v) == 0 for a, b in orig)
    # the full mark gives back the original fin
    assert fin_area2(shrink_fin(tree, set(range(len(tree.nodes))))) == fin_area2(fin)


def test_fill_one_triangle():
    hull = [(-8, 8), (8, 8), (0, 24)]
    tris = fill_gaps([(hull, True)], CORNERS)
    total = sum(signed_area2(t) for t in tris)
    assert total == signed_area2(list(CORNERS)) - signed_area2(hull)
    assert all(signed_area2(t) > 0 for t in tris)
    assert len(tris) <= 3 * 6


def test_fill_empty():
    tris = fill_gaps([], CORNERS)
    assert len(tris) == 1 and signed_area2(tris[0]) == signed_area2(list(CORNERS))


def test_fill_overlap_rejected():
    a = [(-8, 8), (8, 8), (0, 24)]
    b = [(-4, 10), (12, 10), (4, 26)]
    with pytest.raises(GeometryError):
        fill_gaps([(a, True), (b, True)], CORNERS)


def test_hexagon_hull_layer():
    hexa = [(4, 8), (8, 8), (12, 12), (8, 16), (4, 16), (0, 12)]
    assert len(tri_reg(hexa).triangles) == 4


@pytest.mark.parametrize("seed", range(6))
def test_layer_tiles_and_payloads(canon, seed):
    T = canon.tri
    rng = random.Random(seed)
    X = rng.sample(range(len(T)), 40)
    # make sure fins are exercised
    X += [t for t in range(len(T)) if T.region[t] == EXTERIOR][seed::17]
    keep = frozenset(canon.S.vertices)
    R, L, trees = convex_layer_builder(T, canon.fin_trees, X, canon.B.corners, keep)
    assert sum(L.area2(t) for t in range(len(L))) == signed_area2(canon.B.polygon())
    assert all(L.area2(t) > 0 for t in range(len(L)))
    build_locator(L.points, L.tris, verify=True)
    S = canon.S
    for t in range(len(L)):
        r = L.region[t]
        if r is None:
            continue
        want = region_oracle_scan(S, _centroid(L.tri_points(t)))
        assert want == r
    # no filler vertex is new: every vertex belongs to a hull, a shrunk fin
    # (including its own cut points) or B_S
    allowed = set(canon.B.corners)
    for tree in trees.values():
        for node in tree.nodes:
            allowed.update((node.p1, node.p2))
    for poly in R.hulls.values():
        allowed.update(poly)
    for f in R.fins.values():
        allowed.update(f.polygon())
    assert {L.points[v] for v in L.used_vertices()} <= allowed
    assert R.vertex_count <= 3 * len(X)
