import itertools
import random

import pytest
from hypothesis import given

from edsbip.corpus import p8_with_pendants
from edsbip.graph import build_graph, cycle_graph, disjoint_union, path_graph, spider_graph, star_graph
from edsbip.oracle import ResourceBudgetExceeded, forced_excluded_by_oracle, solve_exact, verify_eds
from edsbip.recognition import p5_midpoint_mask
from edsbip.solver import (
    EXCLUDED, IN_D, OPEN, RULES, ConflictExcluded, DominationClash, DominationState,
    Event, NotInClass, SolveOptions, assert_in_d, propagate, reduce_by_forced, replay, solve,
)
from helpers import brute_eds, in_class_graphs, in_class_suite


def test_assert_examples():
    st = assert_in_d(DominationState(path_graph(3)), 1)
    assert [st.status(v) for v in range(3)] == [EXCLUDED, IN_D, EXCLUDED]
    assert st.dominated_by == [1, 1, 1] and st.feasible

    st = assert_in_d(DominationState(cycle_graph(4)), 0)
    with pytest.raises(DominationClash):
        assert_in_d(st, 2)

    # P5 u1 v1 u2 v2 u3 with u2 in D
    st = assert_in_d(DominationState(path_graph(5)), 2)
    assert st.status(1) == st.status(3) == EXCLUDED
    assert st.status(0) == st.status(4) == OPEN
    assert st.dominated_by[0] == st.dominated_by[4] == 0


def test_assert_excluded_vertex():
    st = assert_in_d(DominationState(path_graph(3)), 1)
    with pytest.raises(ConflictExcluded):
        assert_in_d(st, 0)


def test_levels_follow_d_basis():
    st = assert_in_d(DominationState(path_graph(8)), 1)
    assert st.levels.level(2) == {3}
    assert DominationState(path_graph(3)).levels is None


def test_reduce_examples():
    st = assert_in_d(DominationState(path_graph(3)), 1)
    assert reduce_by_forced(st, 1).graph.n == 0

    st = assert_in_d(DominationState(path_graph(8)), 1)
    red = reduce_by_forced(st, 1)
    assert red.id_map == (3, 4, 5, 6, 7)
    assert red.graph.edges() == [(0, 1), (1, 2), (2, 3), (3, 4)]
    assert {red.id_map[v] for v in red.excluded} == {3}

    st = assert_in_d(DominationState(star_graph(4)), 0)
    assert reduce_by_forced(st, 0).graph.n == 0
    with pytest.raises(ValueError):
        reduce_by_forced(DominationState(path_graph(3)), 1)


def test_propagate_examples():
    # P8 alone: nothing is forced, matching the oracle's empty forced set
    st = propagate(DominationState(path_graph(8)))
    assert st.feasible and st.in_d == 0

    st = propagate(assert_in_d(DominationState(path_graph(3)), 0))
    assert not st.feasible

    st = propagate(DominationState(cycle_graph(4)))
    assert not st.feasible


def test_p8_rule_with_midpoints_ruled_out():
    g = p8_with_pendants()
    (d,) = [s.d for s in solve_exact(g)]
    assert not any(p5_midpoint_mask(g) >> v & 1 for v in d)
    st = DominationState(g)
    st.exclude_silently(p5_midpoint_mask(g))
    propagate(st)
    assert st.feasible and st.d_basis == d

    # the P8 rule on its own reaches the same marks on the path
    st = DominationState(g)
    st.exclude_silently(p5_midpoint_mask(g))
    propagate(st, order=("R-p8",))
    assert st.d_basis == {1, 6}
    assert st.excluded_set == {0, 2, 3, 4, 5, 7}
    assert all(e.rule == "R-p8" for e in st.trace)


def test_p5mid_rule_on_p7():
    st = propagate(assert_in_d(DominationState(path_graph(7)), 3))
    assert st.d_basis == {0, 3, 6} and st.complete


def test_solve_examples():
    assert solve(cycle_graph(4)).result is None
    assert solve(path_graph(7)).result == {0, 3, 6}
    assert solve(path_graph(4)).result == {0, 3}
    assert solve(build_graph(0, "", [])).result == frozenset()
    assert solve(build_graph(1, "Y", [])).result == {0}


def test_solve_p8_returns_an_oracle_solution():
    out = solve(path_graph(8))
    assert out.result in {s.d for s in solve_exact(path_graph(8))}
    assert out.base_case == "Direct"


def test_not_in_class():
    with pytest.raises(NotInClass):
        solve(cycle_graph(6))
    out = solve(cycle_graph(6), SolveOptions(force=True))
    assert verify_eds(cycle_graph(6), out.result) is None
    assert not out.in_class


def test_branch_budget():
    with pytest.raises(ResourceBudgetExceeded):
        solve(path_graph(8), SolveOptions(branch_budget=1))


def test_base_cases():
    assert solve(path_graph(7)).base_case == "Direct"
    # a star is settled by the star screen
    assert solve(star_graph(3)).base_case == "Direct"
    g = disjoint_union(path_graph(8), path_graph(3))
    out = solve(g)
    assert out.result is not None and verify_eds(g, out.result) is None


def test_trace_format_and_replay():
    g = disjoint_union(path_graph(8), path_graph(5))
    out = solve(g)
    text = out.trace_text()
    for line in text.splitlines():
        assert Event.parse(line).serialize() == line
    assert text.splitlines()[-1].startswith("result ")
    st = replay(g, text.splitlines())
    assert st.d_basis == out.result and st.complete


def test_trace_is_deterministic():
    g = disjoint_union(path_graph(8), p8_with_pendants(), path_graph(6))
    assert solve(g).trace_text() == solve(g).trace_text()


@given(in_class_graphs(max_n=12))
def test_decision_matches_oracle(g):
    out = solve(g)
    sols = brute_eds(g)
    assert (out.result is not None) == bool(sols)
    if out.result is not None:
        assert out.result in sols
        assert replay(g, out.trace).d_basis == out.result


def _check_marks(g, seed):
    st = DominationState(g)
    for v in seed:
        st.force(v, "seed", kind="seeded")
    propagate(st)
    forced, excluded = forced_excluded_by_oracle(g, seed)
    assert st.feasible, "propagation refuted an extendable seed"
    assert st.d_basis <= forced
    assert st.excluded_set <= excluded


@given(in_class_graphs(max_n=12))
def test_forcing_soundness(g):
    sols = solve_exact(g)
    if not sols:
        return
    _check_marks(g, ())
    for v in sorted(set().union(*(s.d for s in sols))):
        _check_marks(g, (v,))


def _fixpoint(g, seed, order):
    st = DominationState(g)
    for v in seed:
        st.force(v, "seed", kind="seeded")
    propagate(st, order)
    if not st.feasible:
        return None
    return st.in_d, st.excluded


def test_rule_order_confluence():
    for g in in_class_suite(120, 12, seed=21, n_min=3):
        seeds = [()] + [(v,) for v in range(0, g.n, 3)]
        for seed in seeds:
            results = {_fixpoint(g, seed, order) for order in itertools.permutations(RULES)}
            assert len(results) == 1, (g, seed, results)


def test_reduction_round_trip():
    rng = random.Random(4)
    for g in in_class_suite(150, 12, seed=9, n_min=2):
        sols = solve_exact(g)
        if not sols:
            continue
        d = rng.choice(sols).d
        u = min(d)
        st = assert_in_d(DominationState(g), u)
        red = reduce_by_forced(st, u)
        allowed = [v for v in range(red.graph.n) if v not in red.excluded]
        child = solve_exact(red.graph, allowed=allowed)
        assert child, "the parent solution restricts to a child solution"
        for c in child:
            lifted = {red.id_map[v] for v in c.d} | {u}
            assert verify_eds(g, lifted) is None
