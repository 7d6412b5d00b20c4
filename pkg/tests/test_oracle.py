import pytest
from hypothesis import given

from edsbip.graph import build_graph, cycle_graph, path_graph
from edsbip.oracle import (
    EdsSolution, Infeasible, ResourceBudgetExceeded, count_exact,
    forced_excluded_by_oracle, format_solutions, parse_eds, solve_exact, verify_eds,
)
from helpers import bfs_dist, bipartite_graphs, brute_eds


def test_verify_examples():
    p3 = path_graph(3)
    assert verify_eds(p3, {1}) is None
    v = verify_eds(p3, {0})
    assert (v.vertex, v.count) == (2, 0)
    assert verify_eds(path_graph(4), {0, 3}) is None
    v = verify_eds(cycle_graph(4), {0, 2})
    assert v.count == 2 and v.vertex in (1, 3)


def test_solve_examples():
    assert [s.d for s in solve_exact(path_graph(3))] == [frozenset({1})]
    assert solve_exact(cycle_graph(4)) == []
    assert [s.d for s in solve_exact(build_graph(1, "X", []))] == [frozenset({0})]


def test_p8_has_two_solutions():
    # p1..p8 -> ids 0..7; {p2, p7} leaves p4 and p5 undominated
    sols = {s.d for s in solve_exact(path_graph(8))}
    assert sols == {frozenset({0, 3, 6}), frozenset({1, 4, 7})}
    assert verify_eds(path_graph(8), {1, 6}).vertex == 3


def test_first_mode_and_count():
    g = path_graph(11)
    assert len(solve_exact(g, "first")) == 1
    assert count_exact(g) == len(solve_exact(g)) == 2
    with pytest.raises(ValueError):
        solve_exact(g, "count")


def test_allowed_and_required():
    g = path_graph(8)
    assert [s.d for s in solve_exact(g, required=[1])] == [frozenset({1, 4, 7})]
    assert solve_exact(g, allowed=[0, 1, 2, 3, 4, 5]) == []
    assert solve_exact(g, required=[0, 1]) == []


def test_forced_excluded_examples():
    forced, excluded = forced_excluded_by_oracle(path_graph(8))
    assert forced == set() and excluded == {2, 5}
    with pytest.raises(Infeasible):
        forced_excluded_by_oracle(path_graph(3), {0})
    forced, excluded = forced_excluded_by_oracle(build_graph(2, "XY", []))
    assert forced == {0, 1} and excluded == set()


def test_budget():
    with pytest.raises(ResourceBudgetExceeded) as info:
        solve_exact(path_graph(12), budget=1)
    assert info.value.nodes == 2


def test_serialization():
    sols = [EdsSolution(frozenset({4, 1}), True)]
    assert format_solutions(sols) == "eds 2 : 1 4\n"
    assert format_solutions([]) == "no-eds\n"
    assert parse_eds("eds 2 : 1 4\n") == [frozenset({1, 4})]
    assert parse_eds("no-eds\n") == []
    with pytest.raises(ValueError):
        parse_eds("eds 3 : 1 4\n")


@given(bipartite_graphs(max_n=12))
def test_matches_subset_enumeration(g):
    got = solve_exact(g)
    assert {s.d for s in got} == brute_eds(g)
    assert all(s.certified for s in got)
    assert count_exact(g) == len(got)


@given(bipartite_graphs(max_n=12))
def test_solution_distances(g):
    for s in solve_exact(g):
        for u in s.d:
            dist = bfs_dist(g, u)
            for w in s.d - {u}:
                if w in dist:
                    assert dist[w] >= 3
                    if g.side[u] == g.side[w]:
                        assert dist[w] >= 4


@given(bipartite_graphs(max_n=11))
def test_forced_set_is_monotone(g):
    sols = solve_exact(g)
    if not sols:
        return
    forced, _ = forced_excluded_by_oracle(g)
    for v in sols[0].d:
        f2, _ = forced_excluded_by_oracle(g, {v})
        assert forced <= f2
        for w in range(g.n):
            try:
                f3, _ = forced_excluded_by_oracle(g, {v, w})
            except Infeasible:
                continue
            assert f2 <= f3
