"""Exhaustive enumeration, flip graphs and whole-instance verification."""

from __future__ import annotations

import json
from collections import defaultdict, deque
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Iterator, Optional

from .arcs import (
    DArc,
    PolytopeParams,
    Triangulation,
    cells,
    compact_arc,
    intertwining_tuples,
    interior_simplices,
    make_triangulation,
    nonconsec,
)
from .errors import BudgetExceeded, CounterexampleFound, CyclicQuiver, CyclicTriError
from .geometry import OracleReport, validate_cells
from .quiver import build_quiver, find_cycle
from .retrograde import (
    brute_force_mutable,
    flip,
    maximal_retrograde_paths,
    mutable_arcs,
)

__all__ = [
    "enumerate_triangulations",
    "count_triangulations",
    "FlipGraph",
    "flip_graph",
    "interior_free_component_connected",
    "geometric_oracle_validate",
    "Report",
    "verify_theorem_A",
    "verify_theorem_B",
    "verify_cut_slice",
    "verify_cells",
    "catalan",
]

DEFAULT_BUDGET = 10_000_000


def catalan(k: int) -> int:
    """Catalan numbers by the convolution recurrence."""
    c = [1]
    for i in range(1, k + 1):
        c.append(sum(c[j] * c[i - 1 - j] for j in range(i)))
    return c[k]


def _compat_masks(arcs: list[DArc]) -> list[int]:
    masks = []
    for i, a in enumerate(arcs):
        mask = 0
        for j, b in enumerate(arcs):
            if i != j and not intertwining_tuples(a.values, b.values):
                mask |= 1 << j
        masks.append(mask)
    return masks


def _search(arcs, masks, target, first: Optional[int], budget: int) -> list[tuple[int, ...]]:
    """Index tuples of all non-intertwining ``target``-subsets, in lex order.

    With ``first`` given, only subsets whose least index is ``first``.
    """
    out = []
    nodes = 0
    full = (1 << len(arcs)) - 1

    def rec(chosen, cand):
        nonlocal nodes
        nodes += 1
        if nodes > budget:
            raise BudgetExceeded(f"search exceeded {budget} nodes")
        if len(chosen) == target:
            out.append(tuple(chosen))
            return
        need = target - len(chosen)
        while cand and cand.bit_count() >= need:
            low = cand & -cand
            j = low.bit_length() - 1
            cand ^= low
            chosen.append(j)
            rec(chosen, cand & masks[j])
            chosen.pop()

    if target == 0:
        return [()]
    if first is None:
        rec([], full)
    else:
        rec([first], masks[first] & ~((1 << (first + 1)) - 1))
    return out


def _search_job(args):
    m, d, first, budget = args
    params = PolytopeParams(m, d)
    arcs = nonconsec(params)
    return _search(arcs, _compat_masks(arcs), params.arc_count, first, budget)


def enumerate_triangulations(
    params: PolytopeParams, budget: int = DEFAULT_BUDGET, workers: int = 1
) -> Iterator[Triangulation]:
    """Every triangulation of C(m, 2d), each once, lexicographically sorted.

    Depth-first extension of non-intertwining arc sets, pruned when too few
    compatible arcs remain.  With ``workers > 1`` the search is split by
    least arc across processes; the merged stream is identical to the
    sequential one.
    """
    arcs = nonconsec(params)
    target = params.arc_count
    if workers <= 1 or target == 0:
        found = _search(arcs, _compat_masks(arcs), target, None, budget)
    else:
        jobs = [(params.m, params.d, i, budget) for i in range(len(arcs))]
        with ProcessPoolExecutor(max_workers=workers) as ex:
            parts = list(ex.map(_search_job, jobs))
        found = sorted(t for part in parts for t in part)
    for idx in found:
        yield Triangulation([arcs[i] for i in idx], params)


def count_triangulations(params: PolytopeParams, **kw) -> int:
    return sum(1 for _ in enumerate_triangulations(params, **kw))


@dataclass
class FlipGraph:
    """Triangulations joined by single flips; an edge ``(i, j, a, c)`` means
    flipping arc ``a`` of node ``i`` gives node ``j`` with new arc ``c``."""

    params: PolytopeParams
    nodes: list[Triangulation]
    edges: list[tuple[int, int, DArc, DArc]]
    index: dict = field(repr=False, default_factory=dict)

    def neighbours(self, i: int) -> list[int]:
        return [j for a, j, _, _ in self.edges if a == i]

    def degree(self, i: int) -> int:
        return sum(1 for a, _, _, _ in self.edges if a == i)

    def adjacency(self) -> dict[int, list[int]]:
        adj = defaultdict(list)
        for i, j, _, _ in self.edges:
            adj[i].append(j)
        return adj

    def is_connected(self, subset: Optional[set[int]] = None) -> bool:
        verts = set(range(len(self.nodes))) if subset is None else set(subset)
        if not verts:
            return True
        adj = self.adjacency()
        start = min(verts)
        seen = {start}
        todo = deque([start])
        while todo:
            v = todo.popleft()
            for w in adj[v]:
                if w in verts and w not in seen:
                    seen.add(w)
                    todo.append(w)
        return seen == verts

    def to_json(self) -> str:
        adj = self.adjacency()
        return json.dumps(
            {
                "m": self.params.m,
                "d": self.params.d,
                "nodes": [[list(a.values) for a in t.arcs] for t in self.nodes],
                "adjacency": [sorted(adj[i]) for i in range(len(self.nodes))],
            }
        )

    def to_dot(self) -> str:
        lines = [f'graph "flips {self.params}" {{']
        for i, t in enumerate(self.nodes):
            label = " ".join(compact_arc(a.values) for a in t.arcs)
            lines.append(f'  t{i} [label="{label}"];')
        for i, j, a, c in self.edges:
            if i < j:
                lines.append(f'  t{i} -- t{j} [label="{compact_arc(a.values)}/{compact_arc(c.values)}"];')
        lines.append("}")
        return "\n".join(lines) + "\n"


def flip_graph(params: PolytopeParams, budget: int = DEFAULT_BUDGET, workers: int = 1) -> FlipGraph:
    nodes = list(enumerate_triangulations(params, budget=budget, workers=workers))
    index = {t: i for i, t in enumerate(nodes)}
    edges = []
    for i, t in enumerate(nodes):
        q = build_quiver(t)
        for a in sorted(mutable_arcs(t, q)):
            t2, c = flip(t, a, q)
            edges.append((i, index[t2], a, c))
    pairs = {(i, j, a, c) for i, j, a, c in edges}
    for i, j, a, c in edges:
        if (j, i, c, a) not in pairs:
            raise CounterexampleFound(f"flip edge {i}->{j} ({a}/{c}) is not symmetric")
    return FlipGraph(params, nodes, edges, index)


def interior_free_component_connected(params: PolytopeParams, graph: Optional[FlipGraph] = None) -> bool:
    """Is the flip graph induced on triangulations without interior
    (d+1)-simplices connected?"""
    g = graph if graph is not None else flip_graph(params)
    free = {i for i, t in enumerate(g.nodes) if not interior_simplices(t)}
    return g.is_connected(free)


def geometric_oracle_validate(tri: Triangulation, expected_count: Optional[int] = None) -> OracleReport:
    return validate_cells(tri.params, [c.values for c in cells(tri)], expected_count)


@dataclass
class Report:
    """Outcome of an exhaustive check; ``failures`` holds witness strings."""

    name: str
    params: PolytopeParams
    counts: dict = field(default_factory=dict)
    failures: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures

    def bump(self, key, k=1):
        self.counts[key] = self.counts.get(key, 0) + k

    def fail(self, message):
        self.failures.append(message)

    def lines(self) -> list[str]:
        out = [f"{self.name} {self.params}"]
        out += [f"  {k}: {v}" for k, v in self.counts.items()]
        out += [f"  counterexample: {f}" for f in self.failures[:20]]
        out.append("OK" if self.ok else "FAIL")
        return out

    def __str__(self):
        return "\n".join(self.lines())

    def raise_if_failed(self):
        if not self.ok:
            raise CounterexampleFound(str(self), self.failures)
        return self


def verify_theorem_A(params: PolytopeParams, raise_on_fail: bool = True, **kw) -> Report:
    """acyclic quiver <=> no interior (d+1)-simplex <=> the preimage lifts to
    a slice whose cut quiver is Q(T)."""
    from .cutslice import build_qdn, cut_from_slice, labelled_quiver_arrows, slice_labels, slice_lift

    rep = Report("acyclicity", params)
    qdn = build_qdn(params.d, params.n) if params.n >= 1 else None
    for t in enumerate_triangulations(params, **kw):
        rep.bump("triangulations")
        q = build_quiver(t)
        acyclic = find_cycle(q) is None
        no_interior = not interior_simplices(t)
        try:
            s = slice_lift(t)
            lifted = True
            if qdn is not None:
                cut = cut_from_slice(s)
                if labelled_quiver_arrows(q, slice_labels(s)) != set(qdn.arrows) - cut.arrows:
                    rep.fail(f"{t!r}: quiver is not the cut quiver of its slice")
        except CyclicQuiver:
            lifted = False
        except CyclicTriError as exc:
            lifted = False
            rep.fail(f"{t!r}: lift raised {exc!r}")
        rep.bump("acyclic", acyclic)
        rep.bump("interior-free", no_interior)
        rep.bump("sliced", lifted)
        if not acyclic == no_interior == lifted:
            rep.fail(f"{t!r}: acyclic={acyclic} interior-free={no_interior} sliced={lifted}")
    return rep.raise_if_failed() if raise_on_fail else rep


def verify_theorem_B(params: PolytopeParams, raise_on_fail: bool = True, **kw) -> Report:
    """Retrograde criterion vs brute-force replacement search, arc by arc,
    plus involution and symmetric-difference checks on every flip."""
    rep = Report("mutability", params)
    for t in enumerate_triangulations(params, **kw):
        rep.bump("triangulations")
        q = build_quiver(t)
        paths = maximal_retrograde_paths(q)
        if sum(len(p) for p in paths) != len(q.arrows):
            rep.fail(f"{t!r}: retrograde paths do not partition the arrows")
        if any(len(p) > params.d for p in paths):
            rep.fail(f"{t!r}: retrograde path longer than d")
        mut = mutable_arcs(t, q)
        for a in t.arcs:
            rep.bump("arcs")
            oracle = brute_force_mutable(t, a)
            if (oracle is not None) != (a in mut):
                rep.fail(f"{t!r} arc {a}: retrograde says {a in mut}, oracle says {oracle}")
                continue
            if oracle is None:
                continue
            rep.bump("mutable")
            t2, c = flip(t, a, q)
            if c != oracle:
                rep.fail(f"{t!r} arc {a}: flip gives {c}, oracle gives {oracle}")
            _check_flip(rep, t, a, t2, c)
    return rep.raise_if_failed() if raise_on_fail else rep


def _check_flip(rep: Report, t: Triangulation, a: DArc, t2: Triangulation, c: DArc):
    rep.bump("flips")
    diff = set(t.arcs) ^ set(t2.arcs)
    if diff != {a, c} or not intertwining_tuples(a.values, c.values):
        rep.fail(f"{t!r} flip at {a}: symmetric difference {sorted(diff)}")
    try:
        make_triangulation(t2.arcs, t.params)
        back, a2 = flip(t2, c)
    except CyclicTriError as exc:
        rep.fail(f"{t!r} flip at {a}: {exc!r}")
        return
    if back != t or a2 != a:
        rep.fail(f"{t!r} flip at {a} is not an involution")


def verify_cut_slice(params: PolytopeParams, raise_on_fail: bool = True, **kw) -> Report:
    """Cut/slice coherence on every interior-free triangulation."""
    from .cutslice import (
        build_qdn,
        cut_from_slice,
        cut_middle_vertices,
        lift_map,
        mutate_cut,
        mutate_cut_general,
        mutate_slice,
        orbit_label,
        slice_labels,
        slice_lift,
        slice_to_triangulation,
    )

    rep = Report("cut/slice", params)
    qdn = build_qdn(params.d, params.n)
    for t in enumerate_triangulations(params, **kw):
        q = build_quiver(t)
        if find_cycle(q) is not None:
            continue
        rep.bump("interior-free")
        try:
            s = slice_lift(t)
            cut = cut_from_slice(s)
        except CyclicTriError as exc:
            rep.fail(f"{t!r}: {exc!r}")
            continue
        if slice_to_triangulation(s) != t:
            rep.fail(f"{t!r}: slice does not project back")
        labels = slice_labels(s)
        middle = cut_middle_vertices(qdn, cut)
        by_cut = {a for a in t.arcs if labels[a] not in middle}
        if by_cut != mutable_arcs(t, q):
            rep.fail(f"{t!r}: cut-cycle mutability {sorted(by_cut)} != retrograde {sorted(mutable_arcs(t, q))}")
        lifts = lift_map(s)
        for a in sorted(by_cut):
            try:
                res = mutate_cut_general(t, a)
            except CyclicTriError as exc:
                rep.fail(f"{t!r} at {a}: {exc!r}")
                continue
            except AssertionError as exc:
                rep.fail(f"{t!r} at {a}: {exc}")
                continue
            rep.bump(f"mutations ({res.rule})")
            if res.rule == "toggle":
                continue
            x = lifts[a]
            s2 = mutate_slice(s, x, res.rule)
            t2 = slice_to_triangulation(s2)
            if t2 != res.triangulation:
                rep.fail(f"{t!r} at {a}: slice mutation does not commute with the flip")
            if cut_from_slice(s2) != mutate_cut(qdn, cut, orbit_label(x, params), res.rule):
                rep.fail(f"{t!r} at {a}: cut mutation does not match slice mutation")
    return rep.raise_if_failed() if raise_on_fail else rep


def verify_cells(params: PolytopeParams, raise_on_fail: bool = True, **kw) -> Report:
    """Geometric oracle on every triangulation; cell counts must agree."""
    rep = Report("cells", params)
    sizes = set()
    for t in enumerate_triangulations(params, **kw):
        rep.bump("triangulations")
        cs = cells(t)
        sizes.add(len(cs))
        res = validate_cells(params, [c.values for c in cs])
        if not res.ok:
            rep.fail(f"{t!r}: {res.reason}")
    rep.counts["cell counts"] = sorted(sizes)
    if len(sizes) > 1:
        rep.fail(f"cell counts differ: {sorted(sizes)}")
    return rep.raise_if_failed() if raise_on_fail else rep
