"""Exact geometric realisation on the moment curve, used as an oracle.

Points are ``p_i = (i, i^2, ..., i^{2d})``.  Everything is integer
arithmetic; volumes are reported as exact fractions.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from math import factorial
from typing import Iterable, Optional, Sequence

from .arcs import PolytopeParams

__all__ = ["moment_point", "orientation", "facets", "polytope_volume", "simplex_volume", "validate_cells", "OracleReport"]


def moment_point(t: int, dim: int) -> tuple[int, ...]:
    return tuple(t**k for k in range(1, dim + 1))


def det(matrix: Sequence[Sequence[int]]) -> int:
    """Bareiss fraction-free determinant of an integer matrix."""
    a = [list(row) for row in matrix]
    n = len(a)
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for r in range(k + 1, n):
                if a[r][k] != 0:
                    a[k], a[r] = a[r], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def orientation(labels: Iterable[int], dim: int) -> int:
    """Determinant of the homogeneous matrix ``[1, p_t]`` over ``labels``;
    ``dim! * signed volume`` of the simplex."""
    return det([(1,) + moment_point(t, dim) for t in labels])


def facets(params: PolytopeParams) -> list[tuple[int, ...]]:
    """Facets of C(m, 2d) found by brute force: 2d-subsets with all other
    points strictly on one side."""
    m, dim = params.m, 2 * params.d
    out = []
    for f in combinations(range(1, m + 1), dim):
        signs = {(orientation(f + (x,), dim) > 0) for x in range(1, m + 1) if x not in f}
        if len(signs) <= 1:
            out.append(f)
    return out


def simplex_volume(labels: Sequence[int], dim: int) -> Fraction:
    return Fraction(abs(orientation(labels, dim)), factorial(dim))


def polytope_volume(params: PolytopeParams) -> Fraction:
    """Volume as a cone from vertex 1 over the facets missing it."""
    dim = 2 * params.d
    return sum(
        (simplex_volume((1,) + f, dim) for f in facets(params) if 1 not in f),
        Fraction(0),
    )


@dataclass
class OracleReport:
    ok: bool
    reason: str
    cell_volume: Fraction
    hull_volume: Fraction

    def __bool__(self):
        return self.ok


def validate_cells(
    params: PolytopeParams,
    cells: Iterable[Sequence[int]],
    expected_count: Optional[int] = None,
) -> OracleReport:
    """Check that ``cells`` tile C(m, 2d).

    Tiling is certified by three checks: the volumes add up to the hull
    volume; each interior ridge is shared by exactly two cells lying on
    opposite sides of it; each ridge in a boundary facet lies in one cell.
    """
    dim = 2 * params.d
    cells = [tuple(sorted(c)) for c in cells]
    hull = polytope_volume(params)
    total = sum((simplex_volume(c, dim) for c in cells), Fraction(0))

    def fail(reason):
        return OracleReport(False, reason, total, hull)

    if len(set(cells)) != len(cells):
        return fail("duplicate cells")
    if any(len(c) != dim + 1 for c in cells):
        return fail("cell of wrong size")
    if expected_count is not None and len(cells) != expected_count:
        return fail(f"{len(cells)} cells, expected {expected_count}")
    if total != hull:
        return fail(f"cell volume {total} != hull volume {hull}")
    boundary = {f for f in facets(params)}
    ridges = defaultdict(list)
    for c in cells:
        for i in range(len(c)):
            ridges[c[:i] + c[i + 1:]].append(c[i])
    for ridge, apexes in ridges.items():
        on_boundary = any(set(ridge) <= set(f) for f in boundary)
        if on_boundary:
            if len(apexes) != 1:
                return fail(f"boundary ridge {ridge} in {len(apexes)} cells")
            continue
        if len(apexes) != 2:
            return fail(f"interior ridge {ridge} in {len(apexes)} cells")
        s0 = orientation(ridge + (apexes[0],), dim)
        s1 = orientation(ridge + (apexes[1],), dim)
        if (s0 > 0) == (s1 > 0):
            return fail(f"cells over ridge {ridge} overlap")
    return OracleReport(True, "ok", total, hull)
