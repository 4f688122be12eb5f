from fractions import Fraction
from itertools import combinations, permutations

import pytest
from hypothesis import given
from hypothesis import strategies as st

from cyclictri import PolytopeParams, cells, geometric_oracle_validate
from cyclictri.geometry import det, facets, moment_point, polytope_volume, validate_cells

from conftest import all_triangulations


def leibniz(matrix):
    n = len(matrix)
    total = 0
    for perm in permutations(range(n)):
        inv = sum(1 for i in range(n) for j in range(i + 1, n) if perm[i] > perm[j])
        prod = 1
        for i in range(n):
            prod *= matrix[i][perm[i]]
        total += -prod if inv % 2 else prod
    return total


def gale_facets(m, k):
    """Gale's evenness condition."""
    out = []
    for s in combinations(range(1, m + 1), k):
        ok = True
        for i in range(1, m + 1):
            for j in range(i + 1, m + 1):
                if i in s or j in s:
                    continue
                if sum(1 for x in s if i < x < j) % 2:
                    ok = False
        if ok:
            out.append(s)
    return out


@given(st.integers(1, 5).flatmap(lambda n: st.lists(
    st.lists(st.integers(-9, 9), min_size=n, max_size=n), min_size=n, max_size=n)))
def test_det_matches_leibniz(matrix):
    assert det(matrix) == leibniz(matrix)


def test_moment_point():
    assert moment_point(3, 4) == (3, 9, 27, 81)


@pytest.mark.parametrize("m,d", [(5, 1), (6, 1), (7, 2), (8, 2), (9, 2), (9, 3)])
def test_facets_match_gale(m, d):
    assert facets(PolytopeParams(m, d)) == gale_facets(m, 2 * d)


def test_hexagon_area_matches_shoelace():
    pts = [(t, t * t) for t in range(1, 7)]
    twice = sum(pts[i][0] * pts[(i + 1) % 6][1] - pts[(i + 1) % 6][0] * pts[i][1] for i in range(6))
    assert polytope_volume(PolytopeParams(6, 1)) == Fraction(abs(twice), 2)


def test_fan_tiles_hexagon(hexagon_fan):
    assert geometric_oracle_validate(hexagon_fan, expected_count=4)


def test_c84_figure_tiles(c84):
    report = geometric_oracle_validate(c84, expected_count=10)
    assert report.ok and report.cell_volume == report.hull_volume


def test_missing_cell_detected(c84):
    cs = sorted(c.values for c in cells(c84))
    report = validate_cells(c84.params, cs[1:])
    assert not report and "volume" in report.reason


def test_extra_cell_detected(c84):
    cs = [c.values for c in cells(c84)] + [(1, 3, 5, 7, 8)]
    assert not validate_cells(c84.params, cs)


def test_swapped_cell_detected(c84):
    # same count, wrong cell
    cs = sorted(c.values for c in cells(c84))
    cs[0] = (1, 2, 4, 5, 6)
    assert not validate_cells(c84.params, cs)


def test_wrong_count_detected(c84):
    assert not geometric_oracle_validate(c84, expected_count=9)


def test_hull_volume_independent_of_triangulation():
    p = PolytopeParams(8, 2)
    hull = polytope_volume(p)
    for t in all_triangulations(8, 2)[:10]:
        total = sum(
            Fraction(abs(det([(1,) + moment_point(x, 4) for x in c.values])), 24) for c in cells(t)
        )
        assert total == hull
