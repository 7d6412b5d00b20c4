"""Seeded generators for in-class instances."""
from __future__ import annotations

from dataclasses import dataclass

from .graph import X, Y, BipartiteGraph, build_graph
from .recognition import S125, S333, classify, edge_keeps_class
from .rng import SplitMix64

REJECTION, PLANTED = "rejection", "planted"


class RetriesExhausted(RuntimeError):
    pass


@dataclass(frozen=True)
class GenSpec:
    n: int
    edge_prob: float
    seed: int
    mode: str = PLANTED
    max_retries: int = 200
    max_leaves: int = 3  # planted mode: each star gets 0..max_leaves leaves

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("n must be >= 1")
        if not 0.0 <= self.edge_prob <= 1.0:
            raise ValueError("edge_prob must lie in [0, 1]")
        if self.mode not in (REJECTION, PLANTED):
            raise ValueError(f"unknown mode {self.mode!r}")
        if self.max_retries < 1 or self.max_leaves < 0:
            raise ValueError("max_retries must be >= 1 and max_leaves >= 0")


@dataclass(frozen=True)
class Planted:
    graph: BipartiteGraph
    d: frozenset[int]


def gen_in_class(spec: GenSpec) -> BipartiteGraph:
    if spec.mode == REJECTION:
        return _rejection(spec)
    return gen_planted(spec).graph


def _rejection(spec: GenSpec) -> BipartiteGraph:
    rng = SplitMix64(spec.seed)
    n = spec.n
    for _ in range(spec.max_retries):
        side = [X if rng.next_u64() & 1 else Y for _ in range(n)]
        edges = [
            (u, v)
            for u in range(n)
            for v in range(u + 1, n)
            if side[u] != side[v] and rng.bernoulli(spec.edge_prob)
        ]
        g = build_graph(n, side, edges)
        if classify(g).in_class:
            return g
    raise RetriesExhausted(f"no in-class graph after {spec.max_retries} attempts")


def gen_planted(spec: GenSpec) -> Planted:
    """Disjoint stars (their centres form D), then leaf-leaf edges across
    stars, each kept only if the graph stays in class.  Leaf-leaf edges never
    touch a centre, so D stays an e.d.s."""
    rng = SplitMix64(spec.seed)
    n = spec.n
    # star layout on provisional ids
    centre_of: list[int] = []
    side: list[str] = []
    while len(side) < n:
        c = len(side)
        cs = X if rng.next_u64() & 1 else Y
        centre_of.append(c)
        side.append(cs)
        for _ in range(min(rng.below(spec.max_leaves + 1), n - len(side))):
            centre_of.append(c)
            side.append(Y if cs == X else X)
    perm = list(range(n))
    rng.shuffle(perm)  # provisional id i becomes perm[i]
    new_side = [""] * n
    new_centre = [0] * n
    for i in range(n):
        new_side[perm[i]] = side[i]
        new_centre[perm[i]] = perm[centre_of[i]]
    edges = {(min(v, new_centre[v]), max(v, new_centre[v])) for v in range(n) if new_centre[v] != v}
    d = frozenset(v for v in range(n) if new_centre[v] == v)
    leaves = [v for v in range(n) if v not in d]
    g = build_graph(n, new_side, sorted(edges))
    for i, a in enumerate(leaves):
        for b in leaves[i + 1:]:
            if new_side[a] == new_side[b] or new_centre[a] == new_centre[b]:
                continue
            if not rng.bernoulli(spec.edge_prob):
                continue
            trial = build_graph(n, new_side, sorted(edges | {(a, b)}))
            if edge_keeps_class(trial, a, b, (S125, S333)):
                edges.add((a, b))
                g = trial
    return Planted(g, d)
