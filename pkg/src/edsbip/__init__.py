"""Efficient dominating sets on (S_{1,2,5}, S_{3,3,3})-free chordal bipartite graphs."""
from .graph import BipartiteGraph, DistanceLevels, build_graph, components, distance, distance_levels
from .oracle import EdsSolution, ResourceBudgetExceeded, count_exact, forced_excluded_by_oracle, solve_exact, verify_eds
from .recognition import ClassReport, SubgraphWitness, classify, find_induced_even_hole, find_induced_path, find_induced_spider
from .solver import DominationState, SolveOptions, SolveOutcome, assert_in_d, propagate, reduce_by_forced, solve
from .lemmas import LemmaReport, check_lemmas
from .generate import GenSpec, gen_in_class
from .corpus import corpus
from .stress import StressConfig, stress

__all__ = [
    "BipartiteGraph", "DistanceLevels", "build_graph", "components", "distance", "distance_levels",
    "EdsSolution", "ResourceBudgetExceeded", "count_exact", "forced_excluded_by_oracle", "solve_exact", "verify_eds",
    "ClassReport", "SubgraphWitness", "classify", "find_induced_even_hole", "find_induced_path", "find_induced_spider",
    "DominationState", "SolveOptions", "SolveOutcome", "assert_in_d", "propagate", "reduce_by_forced", "solve",
    "LemmaReport", "check_lemmas", "GenSpec", "gen_in_class", "corpus", "StressConfig", "stress",
]
