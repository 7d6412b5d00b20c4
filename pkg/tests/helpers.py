"""Slow reference implementations used as test oracles.

Nothing here shares code with the package beyond reading ``g.n``, ``g.side``
and ``g.adj``.
"""
from __future__ import annotations

import itertools
import random
from collections import deque

from hypothesis import assume, strategies as st

from edsbip.graph import build_graph
from edsbip.recognition import classify


def adjacency_sets(g):
    return [set(a) for a in g.adj]


def brute_eds(g) -> set[frozenset[int]]:
    """Every e.d.s. by checking all 2^n subsets."""
    adj = adjacency_sets(g)
    out = set()
    for r in range(g.n + 1):
        for sub in itertools.combinations(range(g.n), r):
            s = set(sub)
            if all(len(({v} | adj[v]) & s) == 1 for v in range(g.n)):
                out.add(frozenset(s))
    return out


def bfs_dist(g, src):
    adj = adjacency_sets(g)
    dist = {src: 0}
    q = deque([src])
    while q:
        u = q.popleft()
        for w in adj[u]:
            if w not in dist:
                dist[w] = dist[u] + 1
                q.append(w)
    return dist


def _shape(adj, sub):
    """Describe the induced subgraph on ``sub``: ('path', k), ('cycle', k),
    ('spider', legs) or None."""
    s = set(sub)
    deg = {v: len(adj[v] & s) for v in s}
    m = sum(deg.values()) // 2
    # connectivity
    start = next(iter(s))
    seen = {start}
    stack = [start]
    while stack:
        u = stack.pop()
        for w in adj[u] & s:
            if w not in seen:
                seen.add(w)
                stack.append(w)
    if len(seen) != len(s):
        return None
    k = len(s)
    if m == k and all(d == 2 for d in deg.values()):
        return ("cycle", k)
    if m != k - 1:
        return None
    if max(deg.values(), default=0) <= 2:
        return ("path", k)
    centres = [v for v in s if deg[v] >= 3]
    if len(centres) != 1 or deg[centres[0]] != 3:
        return None
    c = centres[0]
    legs = []
    for first in adj[c] & s:
        length, prev, cur = 1, c, first
        while True:
            nxt = [w for w in adj[cur] & s if w != prev]
            if not nxt:
                break
            prev, cur = cur, nxt[0]
            length += 1
        legs.append(length)
    return ("spider", tuple(sorted(legs)))


def induced_shapes(g) -> set:
    """Every shape that occurs as an induced connected subgraph."""
    adj = adjacency_sets(g)
    out = set()
    for r in range(1, g.n + 1):
        for sub in itertools.combinations(range(g.n), r):
            sh = _shape(adj, sub)
            if sh is not None:
                out.add(sh)
    return out


def brute_has_spider(shapes, i, j, k) -> bool:
    legs = tuple(sorted((i, j, k)))
    if legs[0] == 0:
        return ("path", legs[1] + legs[2] + 1) in shapes
    return ("spider", legs) in shapes


def brute_has_hole(shapes, min_len) -> bool:
    return any(kind == "cycle" and k >= min_len for kind, k in shapes)


def random_bipartite(rng: random.Random, n: int, p: float):
    side = "".join(rng.choice("XY") for _ in range(n))
    edges = [(u, v) for u in range(n) for v in range(u + 1, n) if side[u] != side[v] and rng.random() < p]
    return build_graph(n, side, edges)


def in_class_suite(count: int, n_max: int, seed: int, n_min: int = 1):
    """Deterministic list of in-class random graphs."""
    rng = random.Random(seed)
    out = []
    while len(out) < count:
        g = random_bipartite(rng, rng.randint(n_min, n_max), rng.choice((0.15, 0.2, 0.3, 0.45)))
        if classify(g).in_class:
            out.append(g)
    return out


@st.composite
def bipartite_graphs(draw, min_n=1, max_n=10):
    n = draw(st.integers(min_n, max_n))
    side = draw(st.lists(st.sampled_from("XY"), min_size=n, max_size=n))
    pairs = [(u, v) for u in range(n) for v in range(u + 1, n) if side[u] != side[v]]
    chosen = draw(st.lists(st.booleans(), min_size=len(pairs), max_size=len(pairs)))
    return build_graph(n, side, [e for e, keep in zip(pairs, chosen) if keep])


@st.composite
def in_class_graphs(draw, min_n=1, max_n=10):
    g = draw(bipartite_graphs(min_n, max_n))
    assume(classify(g).in_class)
    return g
