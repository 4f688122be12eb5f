"""Maximal retrograde paths, mutability and bistellar flips."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .arcs import DArc, Triangulation, intertwining_tuples, nonconsec, reduce_mod
from .errors import (
    ArcNotInTriangulation,
    ArrowNotInQuiver,
    InternalConsistencyError,
    NotMutable,
)
from .quiver import Arrow, Quiver, build_quiver

__all__ = [
    "RetrogradePath",
    "retrograde_successor",
    "maximal_retrograde_paths",
    "mutable_arcs",
    "blocking_path",
    "flip",
    "flip_neighbors",
    "brute_force_mutable",
    "format_paths",
]


@dataclass(frozen=True)
class RetrogradePath:
    arrows: tuple[Arrow, ...]

    @property
    def vertices(self) -> list[DArc]:
        return [self.arrows[0].source] + [a.target for a in self.arrows]

    @property
    def interior_vertices(self) -> list[DArc]:
        return [a.target for a in self.arrows[:-1]]

    def __len__(self):
        return len(self.arrows)

    def __str__(self):
        return " -> ".join(str(v) for v in self.vertices)


def _is_retrograde(m: int, alpha: Arrow, beta: Arrow) -> bool:
    # beta must advance the entry p just before alpha.added, landing strictly
    # before alpha.removed when read from p.
    p = beta.removed
    return (beta.added - p) % m < (alpha.removed - p) % m


def retrograde_successor(q: Quiver, alpha: Arrow) -> Optional[Arrow]:
    """The arrow continuing ``alpha`` retrogradely, or ``None``."""
    if alpha not in q:
        raise ArrowNotInQuiver(str(alpha))
    x = alpha.target
    p = x.predecessor(alpha.added)
    beta = q.out_arrow_removing(x, p)
    if beta is not None and _is_retrograde(q.params.m, alpha, beta):
        return beta
    return None


def maximal_retrograde_paths(q: Quiver) -> list[RetrogradePath]:
    """Partition of the arrows of ``q`` into maximal retrograde paths,
    ordered by first arrow."""
    succ = {}
    has_pred = set()
    for a in q.arrows:
        b = retrograde_successor(q, a)
        if b is not None:
            if b in has_pred:
                raise InternalConsistencyError(f"arrow {b} has two retrograde predecessors")
            succ[a] = b
            has_pred.add(b)
    paths = []
    used = set()
    for a in q.arrows:
        if a in has_pred:
            continue
        chain = [a]
        while chain[-1] in succ:
            chain.append(succ[chain[-1]])
        used.update(chain)
        paths.append(RetrogradePath(tuple(chain)))
    if len(used) != len(q.arrows):
        raise InternalConsistencyError("closed retrograde cycle found")
    return paths


def mutable_arcs(tri: Triangulation, q: Optional[Quiver] = None) -> set[DArc]:
    """Arcs not in the middle of any maximal retrograde path."""
    q = q if q is not None else build_quiver(tri)
    middle = set()
    for path in maximal_retrograde_paths(q):
        middle.update(path.interior_vertices)
    return set(tri.arcs) - middle


def blocking_path(tri: Triangulation, arc: DArc, q: Optional[Quiver] = None) -> Optional[RetrogradePath]:
    """A maximal retrograde path with ``arc`` in its middle, if any."""
    q = q if q is not None else build_quiver(tri)
    for path in maximal_retrograde_paths(q):
        if arc in path.interior_vertices:
            return path
    return None


def flip(tri: Triangulation, arc: DArc, q: Optional[Quiver] = None) -> tuple[Triangulation, DArc]:
    """Bistellar flip at ``arc``; returns the new triangulation and the arc
    that replaces ``arc``.

    Between consecutive entries ``a_i < a_{i+1}`` the new arc takes the value
    added by the arrow out of ``arc`` advancing ``a_i`` (default
    ``a_{i+1} - 1``); this must agree with the value removed by the arrow into
    ``arc`` that produced ``a_{i+1}`` (default ``a_i + 1``).
    """
    if arc not in tri:
        raise ArcNotInTriangulation(f"{arc!r} is not an arc of {tri!r}")
    q = q if q is not None else build_quiver(tri)
    path = blocking_path(tri, arc, q)
    if path is not None:
        raise NotMutable(arc, path)
    m = tri.params.m
    vals = arc.values
    k = len(vals)
    new = []
    for i, a in enumerate(vals):
        nxt = vals[(i + 1) % k]
        out = q.out_arrow_removing(arc, a)
        b = out.added if out is not None else reduce_mod(nxt - 1, m)
        inc = q.in_arrow_adding(arc, nxt)
        z = inc.removed if inc is not None else reduce_mod(a + 1, m)
        if z != b:
            raise InternalConsistencyError(
                f"flip at {arc!r}: lower bound {z} != upper bound {b} between {a} and {nxt}"
            )
        new.append(b)
    replacement = DArc(tuple(sorted(new)), tri.params)
    if not intertwining_tuples(replacement.values, vals) or replacement in tri:
        raise InternalConsistencyError(f"bad replacement {replacement!r} for {arc!r}")
    return tri.replace(arc, replacement), replacement


def flip_neighbors(tri: Triangulation) -> list[tuple[DArc, Triangulation]]:
    """``(flipped arc, resulting triangulation)`` for every mutable arc."""
    q = build_quiver(tri)
    return [(a, flip(tri, a, q)[0]) for a in sorted(mutable_arcs(tri, q))]


def brute_force_mutable(tri: Triangulation, arc: DArc) -> Optional[DArc]:
    """Replacement arc found by scanning every d-arc (test oracle).

    Returns the unique arc that intertwines ``arc`` and no other arc of the
    triangulation, or ``None``.
    """
    if arc not in tri:
        raise ArcNotInTriangulation(f"{arc!r} is not an arc of {tri!r}")
    others = [a.values for a in tri.arcs if a != arc]
    found = [
        b
        for b in nonconsec(tri.params)
        if intertwining_tuples(b.values, arc.values)
        and not any(intertwining_tuples(b.values, o) for o in others)
    ]
    if len(found) > 1:
        raise InternalConsistencyError(f"{arc!r} has several replacements: {found}")
    return found[0] if found else None


def format_paths(paths: list[RetrogradePath]) -> str:
    lines = [str(p) for p in paths]
    middle = sorted({v for p in paths for v in p.interior_vertices})
    lines.append("middle: " + " ".join(str(v) for v in middle))
    return "\n".join(lines)
