"""Immutable bipartite graphs, neighborhoods, distances and BFS layering.

Vertices are dense integer ids ``0..n-1``.  Sets of vertices are exchanged as
``frozenset`` at the API boundary; internally most algorithms work on Python
ints used as bitsets (bit ``v`` set iff ``v`` is a member).
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Iterator, Sequence

X = "X"
Y = "Y"

INF = math.inf


class GraphError(ValueError):
    pass


class IntraSideEdge(GraphError):
    pass


class DuplicateEdge(GraphError):
    pass


class SelfLoop(GraphError):
    pass


class EmptySeed(GraphError):
    pass


class FormatError(GraphError):
    pass


def bits(mask: int) -> Iterator[int]:
    """Yield the set bit positions of ``mask`` in ascending order."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def mask_of(vertices: Iterable[int]) -> int:
    m = 0
    for v in vertices:
        m |= 1 << v
    return m


def popcount(mask: int) -> int:
    return bin(mask).count("1")


@dataclass(frozen=True)
class BipartiteGraph:
    n: int
    side: tuple[str, ...]
    adj: tuple[tuple[int, ...], ...]
    edge_count: int = field(default=0)

    # -- derived bitset views (cached; the graph never changes) --

    @cached_property
    def nbr(self) -> tuple[int, ...]:
        """Open neighborhoods as bitmasks."""
        return tuple(mask_of(a) for a in self.adj)

    @cached_property
    def closed(self) -> tuple[int, ...]:
        return tuple(m | (1 << v) for v, m in enumerate(self.nbr))

    @cached_property
    def ball2(self) -> tuple[int, ...]:
        """Vertices at distance <= 2."""
        out = []
        for v in range(self.n):
            m = self.closed[v]
            for u in self.adj[v]:
                m |= self.nbr[u]
            out.append(m)
        return tuple(out)

    @cached_property
    def side_mask(self) -> dict[str, int]:
        xs = mask_of(v for v in range(self.n) if self.side[v] == X)
        return {X: xs, Y: self.full_mask & ~xs}

    @cached_property
    def full_mask(self) -> int:
        return (1 << self.n) - 1

    def degree(self, v: int) -> int:
        return len(self.adj[v])

    def edges(self) -> list[tuple[int, int]]:
        return [(u, v) for u in range(self.n) for v in self.adj[u] if u < v]

    def has_edge(self, u: int, v: int) -> bool:
        return bool(self.nbr[u] >> v & 1)

    def vertices_on(self, s: str) -> frozenset[int]:
        return frozenset(bits(self.side_mask[s]))

    def induced_subgraph(self, vertices: Iterable[int]) -> tuple["BipartiteGraph", tuple[int, ...]]:
        """Return ``(child, id_map)`` where ``id_map[child_id] == parent_id``."""
        keep = sorted(set(vertices))
        index = {p: c for c, p in enumerate(keep)}
        adj = tuple(tuple(index[u] for u in self.adj[p] if u in index) for p in keep)
        sub = BipartiteGraph(
            n=len(keep),
            side=tuple(self.side[p] for p in keep),
            adj=adj,
            edge_count=sum(len(a) for a in adj) // 2,
        )
        return sub, tuple(keep)

    def without(self, removed: int) -> tuple["BipartiteGraph", tuple[int, ...]]:
        """Induced subgraph on the complement of the bitmask ``removed``."""
        return self.induced_subgraph(bits(self.full_mask & ~removed))


def build_graph(n: int, side: Sequence[str] | str, edges: Iterable[tuple[int, int]]) -> BipartiteGraph:
    side = tuple(side)
    if len(side) != n:
        raise GraphError(f"side list has length {len(side)}, expected {n}")
    for s in side:
        if s not in (X, Y):
            raise GraphError(f"unknown side {s!r}")
    nbrs: list[set[int]] = [set() for _ in range(n)]
    count = 0
    for u, v in edges:
        if not (0 <= u < n and 0 <= v < n):
            raise GraphError(f"edge ({u}, {v}) has an endpoint outside 0..{n - 1}")
        if u == v:
            raise SelfLoop(f"self-loop at {u}")
        if side[u] == side[v]:
            raise IntraSideEdge(f"edge ({u}, {v}) joins two {side[u]}-vertices")
        if v in nbrs[u]:
            raise DuplicateEdge(f"edge ({min(u, v)}, {max(u, v)}) given twice")
        nbrs[u].add(v)
        nbrs[v].add(u)
        count += 1
    return BipartiteGraph(n=n, side=side, adj=tuple(tuple(sorted(s)) for s in nbrs), edge_count=count)


def path_graph(k: int) -> BipartiteGraph:
    return build_graph(k, "".join(X if i % 2 == 0 else Y for i in range(k)), [(i, i + 1) for i in range(k - 1)])


def cycle_graph(k: int) -> BipartiteGraph:
    if k < 4 or k % 2:
        raise GraphError("bipartite cycles need an even length >= 4")
    return build_graph(k, "".join(X if i % 2 == 0 else Y for i in range(k)), [(i, (i + 1) % k) for i in range(k)])


def star_graph(leaves: int) -> BipartiteGraph:
    return build_graph(leaves + 1, X + Y * leaves, [(0, i) for i in range(1, leaves + 1)])


def spider_graph(i: int, j: int, k: int) -> BipartiteGraph:
    """S_{i,j,k}: center 0, then the legs in order, each listed from the center outwards."""
    n = 1 + i + j + k
    sides = [X]
    edges = []
    nxt = 1
    for leg in (i, j, k):
        prev = 0
        for depth in range(1, leg + 1):
            sides.append(Y if depth % 2 else X)
            edges.append((prev, nxt))
            prev = nxt
            nxt += 1
    return build_graph(n, sides, edges)


def disjoint_union(*graphs: BipartiteGraph) -> BipartiteGraph:
    sides: list[str] = []
    edges: list[tuple[int, int]] = []
    offset = 0
    for g in graphs:
        sides.extend(g.side)
        edges.extend((u + offset, v + offset) for u, v in g.edges())
        offset += g.n
    return build_graph(offset, sides, edges)


def closed_neighborhood(g: BipartiteGraph, v: int) -> frozenset[int]:
    return frozenset(bits(g.closed[v]))


def open_neighborhood(g: BipartiteGraph, v: int) -> frozenset[int]:
    return frozenset(g.adj[v])


def second_neighborhood(g: BipartiteGraph, v: int) -> frozenset[int]:
    """N^2(v): vertices at distance exactly 2."""
    return frozenset(bits(g.ball2[v] & ~g.closed[v]))


def bfs_layers(g: BipartiteGraph, seed_mask: int, within: int | None = None) -> list[int]:
    """Multi-source BFS; returns the layers as bitmasks (layer 0 is the seed)."""
    allowed = g.full_mask if within is None else within
    seen = seed_mask & allowed
    frontier = seen
    layers = []
    while frontier:
        layers.append(frontier)
        nxt = 0
        for v in bits(frontier):
            nxt |= g.nbr[v]
        nxt &= allowed & ~seen
        seen |= nxt
        frontier = nxt
    return layers


def distance(g: BipartiteGraph, u: int, v: int) -> float:
    """Shortest-path length, ``math.inf`` when u and v lie in different components."""
    if u == v:
        return 0
    target = 1 << v
    for i, layer in enumerate(bfs_layers(g, 1 << u)):
        if layer & target:
            return i
    return INF


def mask_distance(g: BipartiteGraph, a: int, b: int, within: int | None = None) -> float:
    """Distance between vertex sets given as bitmasks."""
    for i, layer in enumerate(bfs_layers(g, a, within)):
        if layer & b:
            return i
    return INF


@dataclass(frozen=True)
class DistanceLevels:
    levels: tuple[frozenset[int], ...]
    level_of: tuple[int | None, ...]
    unreachable: frozenset[int]

    def level(self, i: int) -> frozenset[int]:
        return self.levels[i] if 0 <= i < len(self.levels) else frozenset()

    def union(self, *idx: int) -> frozenset[int]:
        out: set[int] = set()
        for i in idx:
            out |= self.level(i)
        return frozenset(out)


@dataclass(frozen=True)
class LevelMasks:
    """Bitmask twin of :class:`DistanceLevels` used on hot paths."""
    masks: tuple[int, ...]
    unreachable: int

    def __getitem__(self, i: int) -> int:
        return self.masks[i] if 0 <= i < len(self.masks) else 0

    def upto(self, i: int) -> int:
        m = 0
        for k in range(min(i + 1, len(self.masks))):
            m |= self.masks[k]
        return m

    def span(self, lo: int, hi: int) -> int:
        m = 0
        for k in range(max(lo, 0), min(hi + 1, len(self.masks))):
            m |= self.masks[k]
        return m


def level_masks(g: BipartiteGraph, seed_mask: int) -> LevelMasks:
    layers = bfs_layers(g, seed_mask)
    reached = 0
    for m in layers:
        reached |= m
    return LevelMasks(tuple(layers), g.full_mask & ~reached)


def distance_levels(g: BipartiteGraph, seed: Iterable[int]) -> DistanceLevels:
    seed_mask = mask_of(seed)
    if not seed_mask:
        raise EmptySeed("distance levels need a nonempty seed")
    if seed_mask >> g.n:
        raise GraphError("seed contains a vertex outside the graph")
    lm = level_masks(g, seed_mask)
    level_of: list[int | None] = [None] * g.n
    for i, m in enumerate(lm.masks):
        for v in bits(m):
            level_of[v] = i
    return DistanceLevels(
        levels=tuple(frozenset(bits(m)) for m in lm.masks),
        level_of=tuple(level_of),
        unreachable=frozenset(bits(lm.unreachable)),
    )


def component_masks(g: BipartiteGraph, within: int | None = None) -> list[int]:
    remaining = g.full_mask if within is None else within
    out = []
    while remaining:
        start = remaining & -remaining
        comp = 0
        for layer in bfs_layers(g, start, remaining):
            comp |= layer
        out.append(comp)
        remaining &= ~comp
    return out


def components(g: BipartiteGraph) -> list[frozenset[int]]:
    """Connected components, ordered by smallest member."""
    return [frozenset(bits(m)) for m in component_masks(g)]


def is_connected_mask(g: BipartiteGraph, m: int) -> bool:
    return len(component_masks(g, m)) <= 1


# -- text format ------------------------------------------------------------

MAGIC = "eds-graph 1"


def dumps(g: BipartiteGraph) -> str:
    lines = [MAGIC, f"n {g.n}", f"sides {''.join(g.side)}"]
    lines.extend(f"e {u} {v}" for u, v in sorted(g.edges()))
    return "\n".join(lines) + "\n"


def loads(text: str) -> BipartiteGraph:
    """Strict parser for the ``eds-graph 1`` format."""
    rows = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        rows.append((lineno, line))
    if len(rows) < 3:
        raise FormatError("truncated graph file")
    if rows[0][1] != MAGIC:
        raise FormatError(f"line {rows[0][0]}: expected {MAGIC!r}")
    lineno, line = rows[1]
    parts = line.split()
    if len(parts) != 2 or parts[0] != "n" or not parts[1].isdigit():
        raise FormatError(f"line {lineno}: expected 'n <count>'")
    n = int(parts[1])
    lineno, line = rows[2]
    parts = line.split()
    sides = parts[1] if len(parts) == 2 else ("" if parts == ["sides"] and n == 0 else None)
    if parts[0] != "sides" or sides is None or len(sides) != n or set(sides) - {X, Y}:
        raise FormatError(f"line {lineno}: expected 'sides' followed by {n} X/Y characters")
    edges = []
    prev = None
    for lineno, line in rows[3:]:
        parts = line.split()
        if len(parts) != 3 or parts[0] != "e" or not (parts[1].isdigit() and parts[2].isdigit()):
            raise FormatError(f"line {lineno}: expected 'e <u> <v>'")
        u, v = int(parts[1]), int(parts[2])
        if u >= v:
            raise FormatError(f"line {lineno}: edge endpoints must satisfy u < v")
        if prev is not None and (u, v) <= prev:
            raise FormatError(f"line {lineno}: edges must be strictly ascending")
        prev = (u, v)
        edges.append((u, v))
    try:
        return build_graph(n, sides, edges)
    except GraphError as exc:
        raise FormatError(str(exc)) from exc


def read_graph(path) -> BipartiteGraph:
    with open(path, encoding="utf-8") as fh:
        return loads(fh.read())


def write_graph(g: BipartiteGraph, path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(dumps(g))
