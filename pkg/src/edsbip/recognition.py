"""Induced path / even hole / spider detection and class membership.

Detection is a backtracking search over partial embeddings.  Every pattern
used here is a connected bipartite graph, so once the first pattern vertex is
placed the colour class of every other position is fixed; candidates are
narrowed with bitmask intersections (must touch the already placed pattern
neighbours, must avoid every other placed vertex's neighbourhood).
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator

from .graph import X, Y, BipartiteGraph, bits, component_masks

# spider legs used by the class hypothesis
S125 = (1, 2, 5)
S333 = (3, 3, 3)


@dataclass(frozen=True)
class Pattern:
    kind: str                 # "path" | "cycle" | "spider"
    params: tuple[int, ...]   # (k,) for paths, (length,) for cycles, legs for spiders
    size: int
    edges: frozenset[tuple[int, int]]

    @property
    def name(self) -> str:
        return f"{self.kind} {' '.join(map(str, self.params))}"

    def adjacent(self, p: int, q: int) -> bool:
        return (min(p, q), max(p, q)) in self.edges


@lru_cache(maxsize=None)
def path_pattern(k: int) -> Pattern:
    if k < 1:
        raise ValueError("paths need k >= 1")
    return Pattern("path", (k,), k, frozenset((i, i + 1) for i in range(k - 1)))


@lru_cache(maxsize=None)
def cycle_pattern(length: int) -> Pattern:
    if length < 4 or length % 2:
        raise ValueError("bipartite cycles need an even length >= 4")
    edges = {(i, i + 1) for i in range(length - 1)} | {(0, length - 1)}
    return Pattern("cycle", (length,), length, frozenset(edges))


def canonical_legs(i: int, j: int, k: int) -> tuple[int, int, int]:
    legs = tuple(sorted((i, j, k)))
    if legs[0] < 0:
        raise ValueError("spider legs must be non-negative")
    return legs  # type: ignore[return-value]


@lru_cache(maxsize=None)
def spider_pattern(i: int, j: int, k: int) -> Pattern:
    legs = canonical_legs(i, j, k)
    edges = set()
    nxt = 1
    for leg in legs:
        prev = 0
        for _ in range(leg):
            edges.add((prev, nxt))
            prev = nxt
            nxt += 1
    return Pattern("spider", legs, nxt, frozenset(edges))


@dataclass(frozen=True)
class SubgraphWitness:
    pattern: Pattern
    embedding: tuple[int, ...]

    def serialize(self) -> str:
        return f"{self.pattern.name} : {' '.join(map(str, self.embedding))}"


def verify_witness(g: BipartiteGraph, w: SubgraphWitness) -> bool:
    """True iff the embedding is injective and induces exactly the pattern's edges."""
    emb = w.embedding
    if len(emb) != w.pattern.size or len(set(emb)) != len(emb):
        return False
    if any(not 0 <= v < g.n for v in emb):
        return False
    for p in range(len(emb)):
        for q in range(p + 1, len(emb)):
            if g.has_edge(emb[p], emb[q]) != w.pattern.adjacent(p, q):
                return False
    return True


# -- matcher ----------------------------------------------------------------

@dataclass(frozen=True)
class _Plan:
    order: tuple[int, ...]
    colour: tuple[int, ...]            # parity of each position relative to order[0]
    degree: tuple[int, ...]
    earlier_adj: tuple[tuple[int, ...], ...]
    earlier_non: tuple[tuple[int, ...], ...]


@lru_cache(maxsize=None)
def _plan(pattern: Pattern, root: int, second: int | None = None) -> _Plan:
    nbrs: list[list[int]] = [[] for _ in range(pattern.size)]
    for a, b in sorted(pattern.edges):
        nbrs[a].append(b)
        nbrs[b].append(a)
    order = [root]
    colour = [0] * pattern.size
    if second is not None:
        order.append(second)
        colour[second] = 1
    seen = set(order)
    i = 0
    while i < len(order):
        for q in nbrs[order[i]]:
            if q not in seen:
                seen.add(q)
                colour[q] = colour[order[i]] ^ 1
                order.append(q)
        i += 1
    if len(order) != pattern.size:
        raise ValueError("pattern must be connected")
    pos = {q: t for t, q in enumerate(order)}
    adj_e, non_e = [], []
    for q in range(pattern.size):
        earlier = [r for r in order[: pos[q]]]
        adj_e.append(tuple(r for r in earlier if pattern.adjacent(q, r)))
        non_e.append(tuple(r for r in earlier if not pattern.adjacent(q, r)))
    return _Plan(tuple(order), tuple(colour), tuple(len(a) for a in nbrs), tuple(adj_e), tuple(non_e))


def _degree_masks(g: BipartiteGraph) -> list[int]:
    cached = g.__dict__.get("_deg_masks")
    if cached is None:
        top = max((g.degree(v) for v in range(g.n)), default=0)
        cached = [0] * (top + 2)
        for v in range(g.n):
            for d in range(g.degree(v) + 1):
                cached[d] |= 1 << v
        g.__dict__["_deg_masks"] = cached
    return cached


def iter_embeddings(
    g: BipartiteGraph,
    pattern: Pattern,
    within: int | None = None,
    root: int = 0,
    fixed: tuple[tuple[int, int], ...] = (),
) -> Iterator[tuple[int, ...]]:
    """Yield induced embeddings of ``pattern`` (position -> vertex) inside ``within``.

    ``fixed`` pins up to two adjacent pattern positions to given vertices; the
    first pinned position becomes the search root.
    """
    allowed = g.full_mask if within is None else within
    if fixed:
        root = fixed[0][0]
        second = fixed[1][0] if len(fixed) > 1 else None
        plan = _plan(pattern, root, second)
    else:
        plan = _plan(pattern, root)
    dm = _degree_masks(g)
    deg_ok = [dm[d] if d < len(dm) else 0 for d in plan.degree]
    size = pattern.size
    emb = [-1] * size
    pins = dict(fixed)
    sides = g.side_mask

    def rec(t: int, used: int, colour_side: tuple[int, int]) -> Iterator[tuple[int, ...]]:
        if t == size:
            yield tuple(emb)
            return
        q = plan.order[t]
        cand = allowed & deg_ok[q] & ~used & colour_side[plan.colour[q]]
        for r in plan.earlier_adj[q]:
            cand &= g.nbr[emb[r]]
        for r in plan.earlier_non[q]:
            cand &= ~g.nbr[emb[r]]
        if q in pins:
            cand &= 1 << pins[q]
        for v in bits(cand):
            emb[q] = v
            yield from rec(t + 1, used | (1 << v), colour_side)
        emb[q] = -1

    first_cand = allowed & deg_ok[root]
    if root in pins:
        first_cand &= 1 << pins[root]
    for v in bits(first_cand):
        s = sides[X] if g.side[v] == X else sides[Y]
        colour_side = (s, g.full_mask & ~s)
        emb[root] = v
        yield from rec(1, 1 << v, colour_side)


def iter_induced_paths(g: BipartiteGraph, k: int, within: int | None = None) -> Iterator[tuple[int, ...]]:
    """Each induced P_k once (oriented so the first endpoint has the smaller id)."""
    for emb in iter_embeddings(g, path_pattern(k), within):
        if k == 1 or emb[0] < emb[-1]:
            yield emb


def find_induced_path(g: BipartiteGraph, k: int, within: int | None = None) -> SubgraphWitness | None:
    if k < 1:
        raise ValueError("k must be >= 1")
    for emb in iter_embeddings(g, path_pattern(k), within):
        return SubgraphWitness(path_pattern(k), emb)
    return None


def find_induced_spider(g: BipartiteGraph, i: int, j: int, k: int, within: int | None = None) -> SubgraphWitness | None:
    pat = spider_pattern(i, j, k)
    for emb in iter_embeddings(g, pat, within):
        return SubgraphWitness(pat, emb)
    return None


def find_induced_cycle(g: BipartiteGraph, length: int) -> SubgraphWitness | None:
    pat = cycle_pattern(length)
    for emb in iter_embeddings(g, pat):
        return SubgraphWitness(pat, emb)
    return None


def spider_through_edge(g: BipartiteGraph, legs: tuple[int, int, int], a: int, b: int) -> SubgraphWitness | None:
    """An induced spider that uses the edge ``ab`` as one of its own edges."""
    pat = spider_pattern(*legs)
    for p, q in sorted(pat.edges):
        for u, v in ((a, b), (b, a)):
            for emb in iter_embeddings(g, pat, fixed=((p, u), (q, v))):
                return SubgraphWitness(pat, emb)
    return None


# -- even holes -------------------------------------------------------------

def _shortest_path(g: BipartiteGraph, src: int, dst: int, allowed: int) -> list[int] | None:
    layers = []
    seen = 1 << src
    frontier = seen
    target = 1 << dst
    while frontier and not frontier & target:
        layers.append(frontier)
        nxt = 0
        for v in bits(frontier):
            nxt |= g.nbr[v]
        nxt &= allowed & ~seen
        seen |= nxt
        frontier = nxt
    if not frontier:
        return None
    path = [dst]
    cur = dst
    for layer in reversed(layers):
        prev = g.nbr[cur] & layer
        cur = (prev & -prev).bit_length() - 1
        path.append(cur)
    path.reverse()
    return path


def _hole_at(g: BipartiteGraph, b: int, a: int, c: int) -> SubgraphWitness | None:
    """Hole of length >= 6 through the induced P3 (a, b, c), if any."""
    allowed = (g.full_mask & ~g.closed[b] & ~(g.nbr[a] & g.nbr[c])) | (1 << a) | (1 << c)
    path = _shortest_path(g, a, c, allowed)
    if path is None:
        return None
    cyc = [b] + path
    return SubgraphWitness(cycle_pattern(len(cyc)), tuple(cyc))


def _has_cycle(g: BipartiteGraph) -> bool:
    return g.edge_count > g.n - len(component_masks(g))


def _hole_p3(g: BipartiteGraph) -> SubgraphWitness | None:
    if not _has_cycle(g):
        return None
    for b in range(g.n):
        nb = g.adj[b]
        for x, a in enumerate(nb):
            for c in nb[x + 1:]:
                w = _hole_at(g, b, a, c)
                if w is not None:
                    return w
    return None


def hole_through_edge(g: BipartiteGraph, a: int, b: int) -> SubgraphWitness | None:
    """Induced cycle of length >= 6 containing the edge ``ab``."""
    for c in g.adj[b]:
        if c != a:
            w = _hole_at(g, b, a, c)
            if w is not None:
                return w
    return None


def iter_induced_cycles(g: BipartiteGraph, min_len: int = 4, max_len: int | None = None) -> Iterator[tuple[int, ...]]:
    """Enumerate induced cycles by DFS over chordless paths.

    Each cycle is reported once: its smallest vertex first, then the smaller
    of its two neighbours on the cycle.
    """
    cap = 2 * g.n if max_len is None else max_len
    for s in range(g.n):
        higher = g.full_mask & ~((1 << (s + 1)) - 1)
        path = [s]

        def extend(inner: int, on_path: int) -> Iterator[tuple[int, ...]]:
            # inner: union of neighbourhoods of the path's interior vertices
            last = path[-1]
            for x in bits(g.nbr[last] & higher & ~inner & ~on_path):
                if len(path) >= 2 and g.nbr[s] >> x & 1:
                    length = len(path) + 1
                    if len(path) >= 3 and min_len <= length <= cap and path[1] < x:
                        yield tuple(path + [x])
                    continue
                if len(path) + 1 >= cap:
                    continue
                path.append(x)
                yield from extend(inner | (g.nbr[last] if len(path) > 2 else 0), on_path | (1 << x))
                path.pop()

        yield from extend(0, 1 << s)


def find_induced_even_hole(g: BipartiteGraph, min_len: int = 6, strategy: str = "auto") -> SubgraphWitness | None:
    """Witness of an induced cycle of length >= ``min_len``.

    ``strategy`` is ``"p3"`` (shortest-path search around every induced P3;
    only valid for ``min_len == 6``), ``"dfs"`` (chordless-path enumeration)
    or ``"auto"``.
    """
    if min_len < 6 or min_len % 2:
        raise ValueError("min_len must be even and >= 6")
    if strategy == "auto":
        strategy = "p3" if min_len == 6 else "dfs"
    if strategy == "p3":
        if min_len != 6:
            raise ValueError("the p3 strategy only answers min_len == 6")
        return _hole_p3(g)
    if strategy != "dfs":
        raise ValueError(f"unknown strategy {strategy!r}")
    if not _has_cycle(g):
        return None
    for cyc in iter_induced_cycles(g, min_len):
        return SubgraphWitness(cycle_pattern(len(cyc)), cyc)
    return None


# -- classification ---------------------------------------------------------

@dataclass(frozen=True)
class ClassReport:
    is_bipartite: bool
    is_chordal_bipartite: bool
    s125_free: bool
    s333_free: bool
    counterexample: dict[str, SubgraphWitness]

    @property
    def in_class(self) -> bool:
        return self.is_bipartite and self.is_chordal_bipartite and self.s125_free and self.s333_free

    def lines(self) -> list[str]:
        out = [
            f"bipartite={str(self.is_bipartite).lower()}",
            f"chordal_bipartite={str(self.is_chordal_bipartite).lower()}",
            f"s125_free={str(self.s125_free).lower()}",
            f"s333_free={str(self.s333_free).lower()}",
            f"in_class={str(self.in_class).lower()}",
        ]
        for key in sorted(self.counterexample):
            out.append(f"witness.{key}={self.counterexample[key].serialize()}")
        return out


def classify(
    g: BipartiteGraph,
    first_spider: tuple[int, int, int] = S125,
    second_spider: tuple[int, int, int] = S333,
) -> ClassReport:
    """Check membership in the (first_spider, second_spider)-free chordal bipartite class.

    ``BipartiteGraph`` cannot hold an intra-side edge, so bipartiteness holds
    by construction.
    """
    found: dict[str, SubgraphWitness] = {}
    hole = find_induced_even_hole(g, 6)
    if hole is not None:
        found["chordal_bipartite"] = hole
    a = find_induced_spider(g, *first_spider)
    if a is not None:
        found["s125_free"] = a
    b = find_induced_spider(g, *second_spider)
    if b is not None:
        found["s333_free"] = b
    return ClassReport(
        is_bipartite=True,
        is_chordal_bipartite=hole is None,
        s125_free=a is None,
        s333_free=b is None,
        counterexample=found,
    )


def edge_keeps_class(
    g: BipartiteGraph,
    a: int,
    b: int,
    spiders: tuple[tuple[int, int, int], ...] = (S125, S333),
) -> bool:
    """Given an in-class ``g`` that already contains the edge ``ab``, decide
    whether ``g`` is still in class.  Any new hole or spider must use ``ab``."""
    if hole_through_edge(g, a, b) is not None:
        return False
    return all(spider_through_edge(g, legs, a, b) is None for legs in spiders)


def p5_midpoint_mask(g: BipartiteGraph) -> int:
    """Bitmask of vertices that are the midpoint of some induced P5."""
    cached = g.__dict__.get("_p5mid")
    if cached is not None:
        return cached
    out = 0
    for c in range(g.n):
        nb = g.adj[c]
        hit = False
        for x, a in enumerate(nb):
            for b in nb[x + 1:]:
                only_a = g.nbr[a] & ~g.nbr[b] & ~(1 << c)
                only_b = g.nbr[b] & ~g.nbr[a] & ~(1 << c)
                if only_a and only_b:
                    hit = True
                    break
            if hit:
                break
        if hit:
            out |= 1 << c
    g.__dict__["_p5mid"] = out
    return out


def p5_endpoints(g: BipartiteGraph, c: int) -> int:
    """Bitmask of vertices that end an induced P5 whose midpoint is ``c``."""
    out = 0
    nb = g.adj[c]
    for a in nb:
        for b in nb:
            if a == b:
                continue
            only_b = g.nbr[b] & ~g.nbr[a] & ~(1 << c)
            if only_b:
                out |= g.nbr[a] & ~g.nbr[b] & ~(1 << c)
    return out
