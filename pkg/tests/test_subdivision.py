import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from adaptloc.geometry import signed_area2
from adaptloc.subdivision import (
    ParseError,
    ValidationError,
    compute_fins,
    enclosing_triangle,
    parse_subdivision,
    serialize_subdivision,
)
from conftest import HEXAGON, SQUARE, TWO_SQUARES, generated, make_sub, sub_text

POINTY_HEXAGON = [(2, 0), (4, 1), (4, 3), (2, 4), (0, 3), (0, 1)]


def test_single_square(square):
    assert square.n == 4 and len(square.regions) == 1
    assert square.vertices[1] == (2, 0)  # doubled


def test_two_squares_share_one_edge(two_squares):
    S = two_squares
    assert S.n == 6 and len(S.regions) == 2
    shared = [e for e, rs in S.edges.items() if len(rs) == 2]
    assert len(shared) == 1 and S.edges[shared[0]] == [0, 1]


@pytest.mark.parametrize("polys, category", [
    ([[(0, 0), (2, 0), (2, 2), (0, 2)], [(1, 1), (4, 1), (1, 5)]], "SELF_INTERSECTION"),
    ([[(0, 0), (2, 0), (1, 1), (2, 2), (0, 2)]], "NONCONVEX_REGION"),
    ([[(0, 0), (1, 0), (0, 1)], [(5, 5), (6, 5), (5, 6)]], "DISCONNECTED"),
    ([[(0, 0), (2, 0), (2, 2), (0, 2)], [(2, 0), (4, 0), (4, 1), (2, 1)]], "INCOMPATIBLE_EDGES"),
])
def test_validation_categories(polys, category):
    with pytest.raises(ValidationError) as e:
        make_sub(polys)
    assert e.value.category == category


def test_nonconvex_outer():
    # an L made of three squares
    polys = [SQUARE, [(1, 0), (2, 0), (2, 1), (1, 1)], [(0, 1), (1, 1), (1, 2), (0, 2)]]
    with pytest.raises(ValidationError) as e:
        make_sub(polys)
    assert e.value.category == "NONCONVEX_OUTER"


@pytest.mark.parametrize("text, line", [
    ("nope\n", 1),
    ("pointloc-subdivision v1\nvertices 1\n0 x\n", 3),
    ("pointloc-subdivision v1\nvertices 3\n0 0\n1 0\n0 1\nregions 1\n3 0 1 5\n", 7),
    ("pointloc-subdivision v1\nvertices 3\n0 0\n1 0\n0 1\nregions 1\n4 0 1 2\n", 7),
])
def test_parse_errors_carry_line(text, line):
    with pytest.raises(ParseError) as e:
        parse_subdivision(text)
    assert e.value.line == line


def test_round_trip():
    for S in (make_sub(TWO_SQUARES), generated(64, 1)):
        again = parse_subdivision(serialize_subdivision(S))
        assert again.vertices == S.vertices and again.regions == S.regions
        assert again.edges == S.edges


def test_enclosing_triangle_of_triangle():
    S = make_sub([[(0, 0), (4, 0), (0, 4)]])
    B = enclosing_triangle(S)
    # tangents y=0, x+y=8, y-x=8 (doubled units)
    assert B.corners == ((-8, 0), (8, 0), (0, 8))
    fins = compute_fins(S, B)
    assert [f.apex for f in fins] == [(-8, 0)]


def test_enclosing_triangle_of_square(square):
    B = enclosing_triangle(square)
    assert B.corners == ((-2, 0), (4, 0), (1, 3))
    B2 = enclosing_triangle(make_sub([[(0, 0), (2, 0), (2, 2), (0, 2)]]))
    assert B2.corners == ((-4, 0), (8, 0), (2, 6))


def test_square_has_three_fins(square):
    fins = compute_fins(square, enclosing_triangle(square))
    assert len(fins) == 3
    # bottom side touches the whole bottom edge
    assert enclosing_triangle(square).touch[0] == [0, 1]


def test_single_vertex_tangency_drops_a_fin():
    S = make_sub([[(0, 0), (4, 0), (0, 4)]])
    assert len(compute_fins(S, enclosing_triangle(S))) < 3


def test_hexagons():
    S = make_sub([POINTY_HEXAGON])
    fins = compute_fins(S, enclosing_triangle(S))
    assert sorted(f.tail_edges for f in fins) == [2, 2, 2]
    S = make_sub([HEXAGON])
    fins = compute_fins(S, enclosing_triangle(S))
    assert sorted(f.tail_edges for f in fins) == [1, 1, 1]


def _check_partition(S):
    B = enclosing_triangle(S)
    fins = compute_fins(S, B)
    fin_area = sum(signed_area2(f.polygon()) for f in fins)
    assert all(signed_area2(f.polygon()) > 0 for f in fins)
    assert signed_area2(B.polygon()) == signed_area2(S.outer_polygon()) + fin_area
    # every outer edge on exactly one fin tail or one touch chain
    k = len(S.outer)
    cover = {}
    for f in fins:
        for e in zip(f.tail_ids, f.tail_ids[1:]):
            cover[e] = cover.get(e, 0) + 1
    for chain in B.touch:
        for e in zip(chain, chain[1:]):
            cover[e] = cover.get(e, 0) + 1
    for t in range(k):
        assert cover.get((S.outer[t], S.outer[(t + 1) % k]), 0) == 1


@pytest.mark.parametrize("polys", [[SQUARE], TWO_SQUARES, [HEXAGON], [POINTY_HEXAGON]])
def test_area_partition_small(polys):
    _check_partition(make_sub(polys))


@settings(max_examples=15, deadline=None)
@given(st.integers(4, 300), st.integers(0, 10_000))
def test_area_partition_generated(n, seed):
    _check_partition(generated(n, seed))


def test_sub_text_helper_parses():
    assert parse_subdivision(sub_text([SQUARE])).n == 4
