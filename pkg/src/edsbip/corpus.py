"""A small named family of graphs with known behaviour."""
from __future__ import annotations

from dataclasses import dataclass

from .graph import BipartiteGraph, build_graph, cycle_graph, disjoint_union, path_graph, spider_graph, star_graph


@dataclass(frozen=True)
class CorpusEntry:
    name: str
    graph: BipartiteGraph
    note: str = ""


def double_star(a: int, b: int) -> BipartiteGraph:
    """Adjacent centres 0 and 1 with ``a`` and ``b`` leaves."""
    n = 2 + a + b
    side = ["X", "Y"] + ["Y"] * a + ["X"] * b
    edges = [(0, 1)] + [(0, 2 + i) for i in range(a)] + [(1, 2 + a + i) for i in range(b)]
    return build_graph(n, side, edges)


def biclique(a: int, b: int) -> BipartiteGraph:
    side = ["X"] * a + ["Y"] * b
    return build_graph(a + b, side, [(i, a + j) for i in range(a) for j in range(b)])


def p8_with_pendants() -> BipartiteGraph:
    """P8 on 0..7 with a leaf on each of the two middle vertices (ids 8, 9).

    No vertex of its unique e.d.s. {1, 6, 8, 9} is a P5 midpoint.
    """
    g = path_graph(8)
    side = list(g.side) + [("Y" if g.side[3] == "X" else "X"), ("Y" if g.side[4] == "X" else "X")]
    return build_graph(10, side, g.edges() + [(3, 8), (4, 9)])


def corpus() -> list[CorpusEntry]:
    out = [CorpusEntry(f"p{k}", path_graph(k)) for k in range(1, 13)]
    out += [
        CorpusEntry("c4", cycle_graph(4), "no e.d.s."),
        CorpusEntry("c6", cycle_graph(6), "out of class: induced C6"),
        CorpusEntry("c8", cycle_graph(8), "out of class: induced C8"),
    ]
    out += [CorpusEntry(f"star{k}", star_graph(k)) for k in range(1, 6)]
    out += [
        CorpusEntry("dstar-1-1", double_star(1, 1)),
        CorpusEntry("dstar-2-2", double_star(2, 2)),
        CorpusEntry("dstar-3-1", double_star(3, 1)),
        CorpusEntry("k23", biclique(2, 3)),
        CorpusEntry("k33", biclique(3, 3)),
        CorpusEntry("s111", spider_graph(1, 1, 1), "the claw"),
        CorpusEntry("s124", spider_graph(1, 2, 4)),
        CorpusEntry("s233", spider_graph(2, 3, 3)),
        CorpusEntry("s125", spider_graph(1, 2, 5), "out of class: the forbidden spider"),
        CorpusEntry("s333", spider_graph(3, 3, 3), "out of class: the forbidden spider"),
        CorpusEntry("p8-pendants", p8_with_pendants(), "P8 whose e.d.s. avoids P5 midpoints"),
        CorpusEntry("p7-config", path_graph(7), "P7 with its ends and midpoint in D"),
        CorpusEntry("p3+p3", disjoint_union(path_graph(3), path_graph(3))),
        CorpusEntry("p4+p7", disjoint_union(path_graph(4), path_graph(7))),
        CorpusEntry("p8+c4", disjoint_union(path_graph(8), cycle_graph(4)), "no e.d.s.: the C4 part fails"),
        CorpusEntry("edgeless3", build_graph(3, "XYX", [])),
    ]
    return out


def corpus_by_name() -> dict[str, CorpusEntry]:
    return {e.name: e for e in corpus()}
