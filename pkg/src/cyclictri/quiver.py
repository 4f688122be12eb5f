"""The quiver Q(T) of a triangulation and directed-cycle detection."""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass
from typing import Iterable, Optional

from .arcs import DArc, PolytopeParams, Triangulation, intertwining_tuples, reduce_mod
from .errors import ArcInTriangulation, InternalConsistencyError

__all__ = [
    "Arrow",
    "Quiver",
    "build_quiver",
    "arrow_via_definition",
    "is_acyclic",
    "find_cycle",
    "intertwining_subquiver",
    "is_weakly_connected",
]


@dataclass(frozen=True, order=True)
class Arrow:
    """``source -> target`` where ``target`` is ``source`` with ``removed``
    replaced by ``added``.

    The advanced position depends on the chosen cyclic frame, so only the
    values are stored.
    """

    source: DArc
    removed: int
    added: int
    target: DArc

    @property
    def step(self) -> int:
        return (self.added - self.removed) % self.source.params.m

    def position(self, anchor: int = 1) -> int:
        """Index of the advanced entry when ``source`` is read in ``<_anchor``."""
        return self.source.anchored(anchor).index(self.removed)

    def __str__(self):
        return f"{self.source} -> {self.target}"


class Quiver:
    """Finite directed graph on d-arcs; arrows sorted by ``(source, removed)``."""

    def __init__(self, vertices: Iterable[DArc], arrows: Iterable[Arrow], params: PolytopeParams):
        self.params = params
        self.vertices: tuple[DArc, ...] = tuple(sorted(set(vertices)))
        self.arrows: tuple[Arrow, ...] = tuple(sorted(set(arrows)))
        self._out: dict[DArc, list[Arrow]] = defaultdict(list)
        self._in: dict[DArc, list[Arrow]] = defaultdict(list)
        for a in self.arrows:
            self._out[a.source].append(a)
            self._in[a.target].append(a)

    def __len__(self):
        return len(self.vertices)

    def __contains__(self, arrow):
        return arrow in self._out.get(arrow.source, ())

    def __repr__(self):
        return f"Quiver({len(self.vertices)} vertices, {len(self.arrows)} arrows)"

    def out_arrows(self, v: DArc) -> list[Arrow]:
        return self._out.get(v, [])

    def in_arrows(self, v: DArc) -> list[Arrow]:
        return self._in.get(v, [])

    def out_arrow_removing(self, v: DArc, value: int) -> Optional[Arrow]:
        """The arrow out of ``v`` that advances entry ``value``, if any."""
        for a in self.out_arrows(v):
            if a.removed == value:
                return a
        return None

    def in_arrow_adding(self, v: DArc, value: int) -> Optional[Arrow]:
        """The arrow into ``v`` whose new entry is ``value``, if any."""
        for a in self.in_arrows(v):
            if a.added == value:
                return a
        return None

    def is_source(self, v: DArc) -> bool:
        return not self.in_arrows(v)

    def is_sink(self, v: DArc) -> bool:
        return not self.out_arrows(v)

    def edge_pairs(self) -> set[tuple[tuple[int, ...], tuple[int, ...]]]:
        return {(a.source.values, a.target.values) for a in self.arrows}


def build_quiver(tri: Triangulation) -> Quiver:
    """Arrows A -> A + r E_i with no arc A + s E_i (0 < s < r) in between.

    For each entry ``u`` of each arc the replacement value walks forward from
    ``u + 1`` while the replaced tuple stays an arc (that is, up to two below
    the cyclically next entry); the first hit in the triangulation wins.
    """
    m = tri.params.m
    arcs = tri.value_set
    arrows = []
    for a in tri.arcs:
        vals = a.values
        k = len(vals)
        for i, u in enumerate(vals):
            w = vals[(i + 1) % k]
            gap = (w - u) % m
            for r in range(1, gap - 1):
                v = reduce_mod(u + r, m)
                cand = tuple(sorted(vals[:i] + (v,) + vals[i + 1:]))
                if cand in arcs:
                    arrows.append(Arrow(a, u, v, DArc(cand, tri.params)))
                    break
    q = Quiver(tri.arcs, arrows, tri.params)
    for v in q.vertices:
        outs = [a.removed for a in q.out_arrows(v)]
        ins = [a.added for a in q.in_arrows(v)]
        if len(set(outs)) != len(outs) or len(set(ins)) != len(ins):
            raise InternalConsistencyError(f"two arrows advance the same entry at {v!r}")
    return q


def arrow_via_definition(tri: Triangulation, a: DArc, b: DArc) -> bool:
    """Arrow test straight from the intertwining definition (test oracle).

    ``A -> B`` iff ``(A - 1)`` intertwines ``B`` and no third arc ``A'`` of
    the triangulation has ``(A - 1) ≀ A'`` and ``(A' - 1) ≀ B``.
    """
    if a == b:
        return False
    am1 = a.shifted(-1)
    if not intertwining_tuples(am1, b.values):
        return False
    for c in tri.arcs:
        if c == a or c == b:
            continue
        if intertwining_tuples(am1, c.values) and intertwining_tuples(c.shifted(-1), b.values):
            return False
    return True


def find_cycle(q: Quiver) -> Optional[list[DArc]]:
    """One directed cycle as a vertex list (closing vertex not repeated),
    rotated so the lexicographically least vertex comes first; ``None`` if
    the quiver is acyclic."""
    WHITE, GREY, BLACK = 0, 1, 2
    colour = {v: WHITE for v in q.vertices}
    succ = {v: sorted(a.target for a in q.out_arrows(v)) for v in q.vertices}
    for root in q.vertices:
        if colour[root] != WHITE:
            continue
        stack = [(root, iter(succ[root]))]
        path = [root]
        colour[root] = GREY
        while stack:
            v, it = stack[-1]
            nxt = next(it, None)
            if nxt is None:
                colour[v] = BLACK
                stack.pop()
                path.pop()
                continue
            if colour[nxt] == GREY:
                cycle = path[path.index(nxt):]
                j = cycle.index(min(cycle))
                return cycle[j:] + cycle[:j]
            if colour[nxt] == WHITE:
                colour[nxt] = GREY
                stack.append((nxt, iter(succ[nxt])))
                path.append(nxt)
    return None


def is_acyclic(q: Quiver) -> bool:
    return find_cycle(q) is None


def intertwining_subquiver(tri: Triangulation, b: DArc) -> Quiver:
    """Full subquiver of Q(T) on the arcs intertwining ``b``."""
    if b in tri:
        raise ArcInTriangulation(f"{b!r} is an arc of the triangulation")
    q = build_quiver(tri)
    verts = {a for a in tri.arcs if intertwining_tuples(a.values, b.values)}
    arrows = [x for x in q.arrows if x.source in verts and x.target in verts]
    return Quiver(verts, arrows, tri.params)


def is_weakly_connected(q: Quiver) -> bool:
    if not q.vertices:
        return True
    adj = defaultdict(set)
    for a in q.arrows:
        adj[a.source].add(a.target)
        adj[a.target].add(a.source)
    seen = {q.vertices[0]}
    todo = [q.vertices[0]]
    while todo:
        v = todo.pop()
        for w in adj[v]:
            if w not in seen:
                seen.add(w)
                todo.append(w)
    return len(seen) == len(q.vertices)
