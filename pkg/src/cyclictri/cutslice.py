"""The finite quivers Q^(d,n) with their cuts and the covering quiver
~Q^(d,n) with its slices.

Vertices of ~Q^(d,n) (``TildeVertex``) are plain integer tuples
``(a_0, ..., a_d)`` with ``a_{i+1} >= a_i + 2`` and ``a_d + 2 <= a_0 + m``.
A vertex is identified with its nu-orbit through the reversed cyclic gap
vector, which lands in the compositions of ``n - 1`` labelling Q^(d,n).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import product
from typing import Iterable, Optional, Sequence

from .arcs import DArc, PolytopeParams, Triangulation, make_triangulation, reduce_mod
from .errors import (
    CyclicQuiver,
    InternalConsistencyError,
    InvalidTildeVertex,
    NotACut,
    NotACutQuiver,
    NotASlice,
    NotMutable,
    NotSourceOrSink,
)
from .quiver import Quiver, build_quiver, find_cycle
from .retrograde import blocking_path, flip

Composition = tuple[int, ...]
TildeVertex = tuple[int, ...]

__all__ = [
    "QdnArrow",
    "Qdn",
    "Cut",
    "Slice",
    "SliceCheck",
    "build_qdn",
    "compositions",
    "enumerate_dplus1_cycles",
    "is_distinguished",
    "distinguished_cycles",
    "is_cut",
    "check_cut",
    "distinguished_cut_paths",
    "cut_middle_vertices",
    "nu",
    "project_pi",
    "orbit_label",
    "is_tilde_vertex",
    "is_slice",
    "slice_to_triangulation",
    "slice_lift",
    "lift_map",
    "cut_from_slice",
    "mutate_slice",
    "mutate_cut",
    "mutate_cut_general",
    "CutMutation",
    "cut_mutation_replacement",
    "labelled_quiver_arrows",
    "slice_labels",
    "cut_to_json",
    "cut_from_json",
]


# ---------------------------------------------------------------------------
# Q^(d,n)


def compositions(total: int, parts: int) -> list[Composition]:
    """Weak compositions of ``total`` into ``parts`` parts, lexicographically
    descending (so ``(total, 0, ..., 0)`` comes first)."""
    if parts == 1:
        return [(total,)] if total >= 0 else []
    out = []
    for first in range(total, -1, -1):
        out.extend((first,) + rest for rest in compositions(total - first, parts - 1))
    return out


def apply_f(x: Composition, i: int) -> Composition:
    """``x + f_i``: move one unit from coordinate ``i`` to ``i + 1`` (mod d+1)."""
    k = len(x)
    y = list(x)
    y[i] -= 1
    y[(i + 1) % k] += 1
    return tuple(y)


@dataclass(frozen=True, order=True)
class QdnArrow:
    source: Composition
    type: int

    @property
    def target(self) -> Composition:
        return apply_f(self.source, self.type)

    def __str__(self):
        return f"{_fmt(self.source)}->{_fmt(self.target)}"


def _fmt(x: Sequence[int]) -> str:
    return "".join(str(v) for v in x) if all(0 <= v < 10 for v in x) else ",".join(map(str, x))


class Qdn:
    """The quiver Q^(d,n)."""

    def __init__(self, d: int, n: int):
        if d < 1 or n < 1:
            raise ValueError(f"Q^(d,n) needs d >= 1 and n >= 1, got d={d}, n={n}")
        self.d = d
        self.n = n
        self.vertices: tuple[Composition, ...] = tuple(compositions(n - 1, d + 1))
        arrows = []
        for x in self.vertices:
            for i in range(d + 1):
                if x[i] > 0:
                    arrows.append(QdnArrow(x, i))
        self.arrows: tuple[QdnArrow, ...] = tuple(sorted(arrows))
        self._cycles = None

    @property
    def params(self) -> PolytopeParams:
        return PolytopeParams.from_dn(self.d, self.n)

    def arrows_from(self, x: Composition) -> list[QdnArrow]:
        return [a for a in self.arrows if a.source == x]

    def arrows_to(self, x: Composition) -> list[QdnArrow]:
        return [a for a in self.arrows if a.target == x]

    def arrow_between(self, x: Composition, y: Composition) -> Optional[QdnArrow]:
        for i in range(self.d + 1):
            if x[i] > 0 and apply_f(x, i) == y:
                return QdnArrow(x, i)
        return None

    @property
    def cycles(self) -> list[tuple[QdnArrow, ...]]:
        if self._cycles is None:
            self._cycles = enumerate_dplus1_cycles(self)
        return self._cycles

    def __repr__(self):
        return f"Qdn(d={self.d}, n={self.n}: {len(self.vertices)} vertices, {len(self.arrows)} arrows)"


@lru_cache(maxsize=None)
def build_qdn(d: int, n: int) -> Qdn:
    """Shared, cached instance; treat it as read-only."""
    return Qdn(d, n)


def enumerate_dplus1_cycles(qdn: Qdn) -> list[tuple[QdnArrow, ...]]:
    """All directed cycles of length d+1, each listed once starting from its
    least arrow."""
    length = qdn.d + 1
    out_by = {}
    for a in qdn.arrows:
        out_by.setdefault(a.source, []).append(a)
    found = set()

    def extend(path):
        if len(path) == length:
            if path[-1].target == path[0].source:
                verts = [a.source for a in path]
                if len(set(verts)) == length:
                    j = path.index(min(path))
                    found.add(tuple(path[j:] + path[:j]))
            return
        for a in out_by.get(path[-1].target, ()):
            extend(path + [a])

    for a in qdn.arrows:
        extend([a])
    return sorted(found)


def is_distinguished(cycle: Sequence[QdnArrow]) -> bool:
    """Types increase by one (mod d+1) along the cycle.

    Under the reversed-gap orbit labelling these are exactly the cycles that
    close maximal retrograde paths.
    """
    k = len(cycle)
    return all(cycle[(j + 1) % k].type == (cycle[j].type + 1) % k for j in range(k))


def distinguished_cycles(qdn: Qdn) -> list[tuple[QdnArrow, ...]]:
    return [c for c in qdn.cycles if is_distinguished(c)]


@dataclass(frozen=True)
class Cut:
    d: int
    n: int
    arrows: frozenset = field(default_factory=frozenset)

    def __contains__(self, arrow):
        return arrow in self.arrows

    def __iter__(self):
        return iter(sorted(self.arrows))

    def __len__(self):
        return len(self.arrows)

    def __str__(self):
        return "{" + ", ".join(str(a) for a in sorted(self.arrows)) + "}"


def check_cut(qdn: Qdn, cut: Cut | Iterable[QdnArrow]) -> None:
    arrows = cut.arrows if isinstance(cut, Cut) else frozenset(cut)
    for cyc in qdn.cycles:
        hits = sum(1 for a in cyc if a in arrows)
        if hits != 1:
            raise NotACut(tuple(str(a) for a in cyc), hits)


def is_cut(qdn: Qdn, cut: Cut | Iterable[QdnArrow]) -> bool:
    try:
        check_cut(qdn, cut)
    except NotACut:
        return False
    return True


def distinguished_cut_paths(qdn: Qdn, cut: Cut) -> list[tuple[QdnArrow, tuple[QdnArrow, ...]]]:
    """``(cut arrow, remaining path)`` for each distinguished cycle; the path
    has d arrows and starts at the head of the cut arrow."""
    check_cut(qdn, cut)
    out = []
    for cyc in distinguished_cycles(qdn):
        j = next(k for k, a in enumerate(cyc) if a in cut)
        out.append((cyc[j], cyc[j + 1:] + cyc[:j]))
    return out


def cut_middle_vertices(qdn: Qdn, cut: Cut) -> set[Composition]:
    """Vertices lying in the middle of some distinguished cut path."""
    middle = set()
    for _, path in distinguished_cut_paths(qdn, cut):
        middle.update(a.target for a in path[:-1])
    return middle


def cut_to_json(cut: Cut) -> str:
    return json.dumps(
        {"d": cut.d, "n": cut.n, "cut": [[list(a.source), a.type] for a in sorted(cut.arrows)]}
    )


def cut_from_json(text: str) -> Cut:
    data = json.loads(text)
    arrows = frozenset(QdnArrow(tuple(src), int(t)) for src, t in data["cut"])
    return Cut(int(data["d"]), int(data["n"]), arrows)


# ---------------------------------------------------------------------------
# ~Q^(d,n)


def is_tilde_vertex(a: Sequence[int], params: PolytopeParams) -> bool:
    if len(a) != params.d + 1:
        return False
    for i in range(len(a) - 1):
        if a[i + 1] < a[i] + 2:
            return False
    return a[-1] + 2 <= a[0] + params.m


def _check(a: Sequence[int], params: PolytopeParams) -> TildeVertex:
    a = tuple(int(x) for x in a)
    if not is_tilde_vertex(a, params):
        raise InvalidTildeVertex(f"{a} is not a vertex of ~Q for {params}")
    return a


def nu(a: Sequence[int], params: PolytopeParams, k: int = 1) -> TildeVertex:
    """``nu_d^k``: subtract ``k`` from every entry."""
    a = _check(a, params)
    return tuple(x - k for x in a)


def project_pi(a: Sequence[int], params: PolytopeParams) -> DArc:
    a = _check(a, params)
    return DArc(tuple(sorted(reduce_mod(x, params.m) for x in a)), params)


def orbit_label(a: Sequence[int], params: PolytopeParams) -> Composition:
    """Reversed cyclic gap vector ``(g_d, ..., g_0)`` with
    ``g_i = a_{i+1} - a_i - 2`` and ``g_d = a_0 + m - a_d - 2``."""
    a = _check(a, params)
    gaps = [a[i + 1] - a[i] - 2 for i in range(len(a) - 1)]
    gaps.append(a[0] + params.m - a[-1] - 2)
    return tuple(reversed(gaps))


def _unit(d: int, i: int) -> tuple[int, ...]:
    return tuple(1 if j == i else 0 for j in range(d + 1))


def _add(a, b):
    return tuple(x + y for x, y in zip(a, b))


def _sub(a, b):
    return tuple(x - y for x, y in zip(a, b))


@dataclass(frozen=True)
class Slice:
    """A finite full subquiver of ~Q^(d,n) (validity checked by ``is_slice``)."""

    vertices: frozenset
    params: PolytopeParams

    @classmethod
    def of(cls, vertices: Iterable[Sequence[int]], params: PolytopeParams) -> "Slice":
        return cls(frozenset(_check(v, params) for v in vertices), params)

    def __iter__(self):
        return iter(sorted(self.vertices))

    def __len__(self):
        return len(self.vertices)

    def __contains__(self, v):
        return tuple(v) in self.vertices

    def arrows(self) -> list[tuple[TildeVertex, int]]:
        """Induced arrows ``(A, i)`` meaning ``A -> A + E_i``."""
        d = self.params.d
        out = []
        for a in sorted(self.vertices):
            for i in range(d + 1):
                if _add(a, _unit(d, i)) in self.vertices:
                    out.append((a, i))
        return out

    def is_source(self, v: TildeVertex) -> bool:
        d = self.params.d
        return not any(_sub(v, _unit(d, i)) in self.vertices for i in range(d + 1))

    def is_sink(self, v: TildeVertex) -> bool:
        d = self.params.d
        return not any(_add(v, _unit(d, i)) in self.vertices for i in range(d + 1))

    def to_json(self) -> str:
        return json.dumps([list(v) for v in sorted(self.vertices)])


@dataclass
class SliceCheck:
    ok: bool
    reason: str = "ok"
    witness: tuple = ()

    def __bool__(self):
        return self.ok


def is_slice(s: Slice | Iterable[Sequence[int]], params: Optional[PolytopeParams] = None) -> SliceCheck:
    """One vertex per nu-orbit and convex (checked on boxes ``A <= X <= B``)."""
    if not isinstance(s, Slice):
        s = Slice.of(s, params)
    p = s.params
    seen = {}
    for v in sorted(s.vertices):
        lab = orbit_label(v, p)
        if lab in seen:
            return SliceCheck(False, "DuplicateOrbit", (seen[lab], v))
        seen[lab] = v
    if p.n >= 1:
        missing = [c for c in compositions(p.n - 1, p.d + 1) if c not in seen]
        if missing:
            return SliceCheck(False, "MissingOrbit", tuple(missing))
    verts = sorted(s.vertices)
    for a in verts:
        for b in verts:
            if a == b or any(x > y for x, y in zip(a, b)):
                continue
            for x in product(*(range(lo, hi + 1) for lo, hi in zip(a, b))):
                if x not in s.vertices and is_tilde_vertex(x, p):
                    return SliceCheck(False, "NotConvex", (a, b, x))
    return SliceCheck(True)


def slice_to_triangulation(s: Slice) -> Triangulation:
    check = is_slice(s)
    if not check:
        raise NotASlice(f"{check.reason}: {check.witness}")
    return make_triangulation([project_pi(v, s.params) for v in s.vertices], s.params)


def slice_lift(tri: Triangulation) -> Slice:
    """A connected component of the preimage of ``tri`` in ~Q^(d,n) that
    contains one vertex per nu-orbit.

    The component is grown from the canonical tuple of the least arc along
    single-step arrows in both directions.  It stops as soon as two of its
    vertices share an orbit, which is what happens when the preimage
    component winds around (a cyclic quiver), so no explicit window bound is
    needed.
    """
    p = tri.params
    if not tri.arcs:
        return Slice(frozenset(), p)
    arcs = tri.value_set
    d = p.d
    units = [_unit(d, i) for i in range(d + 1)]
    start = tri.arcs[0].values
    labels = {orbit_label(start, p): start}
    comp = {start}
    todo = [start]
    while todo:
        v = todo.pop()
        for e in units:
            for w in (_add(v, e), _sub(v, e)):
                if w in comp or not is_tilde_vertex(w, p):
                    continue
                if project_pi(w, p).values not in arcs:
                    continue
                lab = orbit_label(w, p)
                if lab in labels:
                    raise CyclicQuiver(
                        f"preimage component of {tri!r} winds around: {labels[lab]} and {w} share an orbit"
                    )
                labels[lab] = w
                comp.add(w)
                todo.append(w)
    s = Slice(frozenset(comp), p)
    if {project_pi(v, p).values for v in comp} != set(arcs):
        raise CyclicQuiver(f"preimage component of {tri!r} misses arcs")
    check = is_slice(s)
    if not check:
        raise CyclicQuiver(f"lift of {tri!r} is not a slice: {check.reason} {check.witness}")
    return s


def lift_map(s: Slice) -> dict[DArc, TildeVertex]:
    return {project_pi(v, s.params): v for v in s.vertices}


def cut_from_slice(s: Slice) -> Cut:
    """Complement in Q^(d,n) of the labelled image of the slice's arrows."""
    check = is_slice(s)
    if not check:
        raise NotASlice(f"{check.reason}: {check.witness}")
    p = s.params
    qdn = build_qdn(p.d, p.n)
    image = set()
    for a, i in s.arrows():
        src = orbit_label(a, p)
        tgt = orbit_label(_add(a, _unit(p.d, i)), p)
        arrow = qdn.arrow_between(src, tgt)
        if arrow is None:
            raise InternalConsistencyError(f"slice arrow {a} +E_{i} has no image in Q^(d,n)")
        image.add(arrow)
    cut = Cut(p.d, p.n, frozenset(qdn.arrows) - image)
    check_cut(qdn, cut)
    return cut


def slice_labels(s: Slice) -> dict[DArc, Composition]:
    """Arc -> Q^(d,n) vertex, through the slice's lift of each arc."""
    return {project_pi(v, s.params): orbit_label(v, s.params) for v in s.vertices}


def labelled_quiver_arrows(q: Quiver, labels: dict[DArc, Composition]) -> set[QdnArrow]:
    """Arrows of Q(T) carried to Q^(d,n) by an arc labelling; raises if some
    arrow does not land on an arrow of Q^(d,n)."""
    p = q.params
    qdn = build_qdn(p.d, p.n)
    out = set()
    for a in q.arrows:
        arrow = qdn.arrow_between(labels[a.source], labels[a.target])
        if arrow is None:
            raise InternalConsistencyError(f"arrow {a} is not an arrow of Q^(d,n) after labelling")
        out.add(arrow)
    return out


def mutate_slice(s: Slice, x: Sequence[int], direction: str) -> Slice:
    """``+``: replace the source ``x`` by ``x + 1``; ``-``: replace the sink
    ``x`` by ``x - 1``."""
    x = tuple(x)
    if x not in s.vertices:
        raise NotSourceOrSink(f"{x} is not in the slice")
    if direction == "+":
        if not s.is_source(x):
            raise NotSourceOrSink(f"{x} is not a source of the slice")
        new = nu(x, s.params, -1)
    elif direction == "-":
        if not s.is_sink(x):
            raise NotSourceOrSink(f"{x} is not a sink of the slice")
        new = nu(x, s.params, 1)
    else:
        raise ValueError(f"direction must be '+' or '-', got {direction!r}")
    return Slice((s.vertices - {x}) | {new}, s.params)


def mutate_cut(qdn: Qdn, cut: Cut, x: Composition, direction: str) -> Cut:
    x = tuple(x)
    kept = [a for a in qdn.arrows if a not in cut]
    if direction == "+":
        if any(a.target == x for a in kept):
            raise NotSourceOrSink(f"{_fmt(x)} is not a source of the cut quiver")
        arrows = {a for a in cut.arrows if a.target != x} | set(qdn.arrows_from(x))
    elif direction == "-":
        if any(a.source == x for a in kept):
            raise NotSourceOrSink(f"{_fmt(x)} is not a sink of the cut quiver")
        arrows = {a for a in cut.arrows if a.source != x} | set(qdn.arrows_to(x))
    else:
        raise ValueError(f"direction must be '+' or '-', got {direction!r}")
    return Cut(cut.d, cut.n, frozenset(arrows))


def cut_mutation_replacement(lifted: Sequence[int], i: int, m: int) -> tuple[int, ...]:
    """``(a_0+1, ..., a_{i-1}+1, a_{i+1}-1, a_{i+1}+1, ..., a_d+1)`` for the
    lifted tuple ``a``, reduced mod m and sorted."""
    a = list(lifted)
    k = len(a)
    nxt = a[i + 1] if i + 1 < k else a[0] + m
    vals = [x + 1 for j, x in enumerate(a) if j != i] + [nxt - 1]
    return tuple(sorted(reduce_mod(v, m) for v in vals))


@dataclass
class CutMutation:
    """Outcome of :func:`mutate_cut_general`.

    ``missing`` is the predicted set of Q^(d,n) arrows absent from the new
    quiver.  It is a cut for mutation at sources and sinks; elsewhere the new
    quiver may acquire a cycle, in which case it is not.
    """

    triangulation: Triangulation
    replacement: DArc
    label: Composition
    old_cut: Cut
    missing: frozenset
    rule: str
    cut_type: Optional[int] = None

    @property
    def removed_arrows(self) -> frozenset:
        return self.missing - self.old_cut.arrows

    @property
    def added_arrows(self) -> frozenset:
        return self.old_cut.arrows - self.missing


def _rotate(x: Composition, r: int) -> Composition:
    return x[r:] + x[:r]


def _rotate_arrow(qdn: Qdn, a: QdnArrow, r: int) -> QdnArrow:
    return qdn.arrow_between(_rotate(a.source, r), _rotate(a.target, r))


def mutate_cut_general(tri: Triangulation, arc: DArc) -> CutMutation:
    """Flip a cut-quiver triangulation at a mutable arc and predict the new
    quiver in terms of Q^(d,n).

    Sources and sinks follow the mu+/mu- rule.  At any other mutable vertex
    every incident arrow of Q^(d,n) is toggled: cut arrows there come back
    and present ones disappear.  The replacement arc keeps the vertex label,
    the other arcs keep theirs, and the rebuilt quiver of the flipped
    triangulation is checked against the prediction.
    """
    p = tri.params
    q = build_quiver(tri)
    if find_cycle(q) is not None:
        raise NotACutQuiver(f"{tri!r} has a cyclic quiver")
    path = blocking_path(tri, arc, q)
    if path is not None:
        raise NotMutable(arc, path)
    s = slice_lift(tri)
    cut = cut_from_slice(s)
    qdn = build_qdn(p.d, p.n)
    lifts = lift_map(s)
    labels = slice_labels(s)
    x = labels[arc]
    new_tri, replacement = flip(tri, arc, q)
    cut_type = None
    if q.is_source(arc):
        rule = "+"
        missing = mutate_cut(qdn, cut, x, "+").arrows
    elif q.is_sink(arc):
        rule = "-"
        missing = mutate_cut(qdn, cut, x, "-").arrows
    else:
        rule = "toggle"
        incident = frozenset(a for a in qdn.arrows if a.source == x or a.target == x)
        missing = cut.arrows ^ incident
        around = {
            c.type
            for c, pth in distinguished_cut_paths(qdn, cut)
            if pth[0].source == x or pth[-1].target == x
        }
        if len(around) != 1:
            raise InternalConsistencyError(f"cut arrows around {_fmt(x)} have types {sorted(around)}")
        cut_type = around.pop()
        formula = cut_mutation_replacement(lifts[arc], p.d - cut_type, p.m)
        if formula != replacement.values:
            raise InternalConsistencyError(
                f"replacement formula gives {formula}, flip gives {replacement.values}"
            )
    new_labels = {a: lab for a, lab in labels.items() if a != arc}
    new_labels[replacement] = x
    new_q = build_quiver(new_tri)
    predicted = set(qdn.arrows) - missing
    got, stray = set(), []
    for a in new_q.arrows:
        image = qdn.arrow_between(new_labels[a.source], new_labels[a.target])
        if image is None:
            stray.append(str(a))
        else:
            got.add(image)
    if stray or got != predicted:
        raise InternalConsistencyError(
            f"flip at {arc} ({rule}): rebuilt quiver has {len(new_q.arrows)} arrows, prediction "
            f"has {len(predicted)}; unexpected {sorted(map(str, got - predicted)) + stray}, "
            f"absent {sorted(map(str, predicted - got))}"
        )
    if find_cycle(new_q) is None:
        # A slice is determined only up to rotating every lift, which
        # rotates the labels; compare modulo that.
        new_s = slice_lift(new_tri)
        got = slice_labels(new_s)
        k = p.d + 1
        for r in range(k):
            if all(_rotate(got[a], r) == lab for a, lab in new_labels.items()):
                break
        else:
            raise InternalConsistencyError("slice of the flipped triangulation disagrees with the prediction")
        rotated = {_rotate_arrow(qdn, a, r) for a in cut_from_slice(new_s).arrows}
        if rotated != missing:
            raise InternalConsistencyError("cut of the flipped triangulation disagrees with the prediction")
    elif rule != "toggle":
        raise InternalConsistencyError(f"mutation at a {'source' if rule == '+' else 'sink'} produced a cycle")
    return CutMutation(new_tri, replacement, x, cut, missing, rule, cut_type)
