import json

import pytest

from cyclictri import (
    BudgetExceeded,
    CounterexampleFound,
    PolytopeParams,
    catalan,
    count_triangulations,
    enumerate_triangulations,
    flip_graph,
    interior_free_component_connected,
    interior_simplices,
    verify_cells,
    verify_cut_slice,
    verify_theorem_A,
    verify_theorem_B,
)
from cyclictri.explorer import Report

# First exhaustive runs, frozen as regression values.
FROZEN_COUNTS = {(8, 2): 40, (9, 2): 357, (8, 3): 2, (9, 3): 9, (10, 3): 102, (6, 2): 2, (7, 2): 7}
FROZEN_INTERIOR_FREE = {(8, 2): 32, (9, 2): 195, (10, 3): 80}


def catalan_by_formula(k):
    from math import comb

    return comb(2 * k, k) // (k + 1)


@pytest.mark.parametrize("k", range(10))
def test_catalan_recurrence(k):
    assert catalan(k) == catalan_by_formula(k)


@pytest.mark.parametrize("m", [4, 5, 6, 7, 8, 9, 10])
def test_polygon_counts(m):
    assert count_triangulations(PolytopeParams(m, 1)) == catalan(m - 2)


@pytest.mark.parametrize("md,count", sorted(FROZEN_COUNTS.items()))
def test_frozen_counts(md, count):
    assert count_triangulations(PolytopeParams(*md)) == count


@pytest.mark.parametrize("md,count", sorted(FROZEN_INTERIOR_FREE.items()))
def test_frozen_interior_free_counts(md, count):
    ts = enumerate_triangulations(PolytopeParams(*md))
    assert sum(1 for t in ts if not interior_simplices(t)) == count


def test_simplex_instance():
    # n = 0: the empty set of arcs is the only triangulation
    ts = list(enumerate_triangulations(PolytopeParams(5, 2)))
    assert len(ts) == 1 and ts[0].arcs == ()


def test_stream_sorted_and_unique():
    ts = list(enumerate_triangulations(PolytopeParams(9, 2)))
    assert ts == sorted(ts)
    assert len(set(ts)) == len(ts)


def test_parallel_stream_identical():
    p = PolytopeParams(9, 2)
    assert list(enumerate_triangulations(p, workers=2)) == list(enumerate_triangulations(p))


def test_budget():
    with pytest.raises(BudgetExceeded):
        list(enumerate_triangulations(PolytopeParams(9, 2), budget=50))


class TestFlipGraph:
    def test_associahedron(self):
        g = flip_graph(PolytopeParams(6, 1))
        assert len(g.nodes) == 14
        assert all(g.degree(i) == 3 for i in range(14))
        assert len(g.edges) == 42
        assert g.is_connected()

    @pytest.mark.parametrize("m", [7, 8])
    def test_polygon_regular(self, m):
        g = flip_graph(PolytopeParams(m, 1))
        assert all(g.degree(i) == m - 3 for i in range(len(g.nodes)))

    @pytest.mark.parametrize("m,d", [(8, 2), (9, 2), (10, 3)])
    def test_edges(self, m, d):
        g = flip_graph(PolytopeParams(m, d))
        pairs = {(i, j) for i, j, _, _ in g.edges}
        assert all((j, i) in pairs for i, j in pairs)
        for i, j, a, c in g.edges:
            assert set(g.nodes[i].arcs) ^ set(g.nodes[j].arcs) == {a, c}
        assert g.is_connected()

    @pytest.mark.parametrize("m,d", [(8, 2), (9, 2), (10, 3)])
    def test_interior_free_connected(self, m, d):
        assert interior_free_component_connected(PolytopeParams(m, d))

    def test_exports(self):
        g = flip_graph(PolytopeParams(6, 1))
        data = json.loads(g.to_json())
        assert len(data["nodes"]) == 14 and all(len(a) == 3 for a in data["adjacency"])
        dot = g.to_dot()
        assert dot.startswith('graph "flips C(6,2)"') and dot.count(" -- ") == 21
        assert g.to_dot() == dot


class TestReports:
    @pytest.mark.parametrize("m,d", [(6, 1), (7, 1), (8, 2), (9, 2), (10, 3)])
    def test_acyclicity_report(self, m, d):
        rep = verify_theorem_A(PolytopeParams(m, d))
        assert rep.ok and rep.lines()[-1] == "OK"
        assert rep.counts["acyclic"] == rep.counts["interior-free"] == rep.counts["sliced"]

    @pytest.mark.parametrize("m,d", [(6, 1), (7, 1), (8, 2), (9, 2), (10, 3)])
    def test_mutability_report(self, m, d):
        rep = verify_theorem_B(PolytopeParams(m, d))
        assert rep.ok
        if d == 1:
            assert rep.counts["mutable"] == rep.counts["arcs"]

    @pytest.mark.parametrize("m,d", [(8, 2), (9, 2), (10, 3)])
    def test_cut_slice(self, m, d):
        assert verify_cut_slice(PolytopeParams(m, d)).ok

    def test_cut_slice_polygon_counterexamples(self):
        # the quiver-delta prediction fails at non-source/sink vertices in d = 1
        rep = verify_cut_slice(PolytopeParams(6, 1), raise_on_fail=False)
        assert not rep.ok
        assert all("unexpected" in f for f in rep.failures)
        with pytest.raises(CounterexampleFound):
            verify_cut_slice(PolytopeParams(6, 1))

    @pytest.mark.parametrize("m,d", [(6, 1), (7, 1), (6, 2), (8, 2)])
    def test_cells(self, m, d):
        rep = verify_cells(PolytopeParams(m, d))
        assert rep.ok and len(rep.counts["cell counts"]) == 1

    def test_report_format(self):
        rep = Report("x", PolytopeParams(6, 1))
        rep.bump("a")
        rep.fail("boom")
        assert rep.lines() == ["x C(6,2)", "  a: 1", "  counterexample: boom", "FAIL"]
        with pytest.raises(CounterexampleFound):
            rep.raise_if_failed()


@pytest.mark.parametrize("m,d", [(7, 1), (8, 2), (9, 2), (10, 3)])
def test_counts_match_flip_closure(m, d):
    # The flip graph of a cyclic polytope is connected, so closing one
    # triangulation under brute-force flips must reach every triangulation.
    from cyclictri import brute_force_mutable

    p = PolytopeParams(m, d)
    start = next(enumerate_triangulations(p))
    seen = {start}
    todo = [start]
    while todo:
        t = todo.pop()
        for a in t.arcs:
            b = brute_force_mutable(t, a)
            if b is not None:
                u = t.replace(a, b)
                if u not in seen:
                    seen.add(u)
                    todo.append(u)
    assert len(seen) == count_triangulations(p)
    assert seen == set(enumerate_triangulations(p))
