"""Shared fixtures: small hand-made subdivisions and cached generated ones."""
from functools import lru_cache

import pytest

from adaptloc.subdivision import parse_subdivision
from adaptloc.workloads import generate_subdivision


def sub_text(polys):
    """Subdivision file text from CCW polygons given in file units."""
    index, verts = {}, []
    regions = []
    for poly in polys:
        ids = []
        for p in poly:
            if p not in index:
                index[p] = len(verts)
                verts.append(p)
            ids.append(index[p])
        regions.append(ids)
    lines = ["pointloc-subdivision v1", f"vertices {len(verts)}"]
    lines += [f"{x} {y}" for x, y in verts]
    lines.append(f"regions {len(regions)}")
    lines += [" ".join(map(str, [len(r)] + r)) for r in regions]
    return "\n".join(lines) + "\n"


def make_sub(polys):
    return parse_subdivision(sub_text(polys))


SQUARE = [(0, 0), (1, 0), (1, 1), (0, 1)]
TWO_SQUARES = [SQUARE, [(1, 0), (2, 0), (2, 1), (1, 1)]]
HEXAGON = [(2, 0), (4, 0), (6, 2), (4, 4), (2, 4), (0, 2)]


@lru_cache(maxsize=None)
def generated(n, seed=0):
    return generate_subdivision(n, seed)


@pytest.fixture
def square():
    return make_sub([SQUARE])


@pytest.fixture
def two_squares():
    return make_sub(TWO_SQUARES)


# --- acceptance report -------------------------------------------------------------

ACCEPTANCE_LINES = []


def report_criterion(number, ok, detail):
    line = f"criterion {number}: {'PASS' if ok else 'FAIL'}  {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)
    return ok


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
