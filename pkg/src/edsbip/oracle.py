"""Exact e.d.s. search: exact cover of V by closed neighbourhoods.

Columns are vertices, the row for vertex ``v`` is ``N[v]``.  Picking row ``v``
covers ``N[v]`` and kills every row ``w`` with ``N[w] & N[v] != 0``, i.e. every
``w`` within distance 2 of ``v``.  The search branches on the uncovered
column with the fewest live rows (ties: smallest id).
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Iterator

from .graph import BipartiteGraph, bits, component_masks, mask_of

DEFAULT_BUDGET = 10**7


class ResourceBudgetExceeded(RuntimeError):
    def __init__(self, nodes: int, what: str = "search"):
        super().__init__(f"{what} exceeded its budget after {nodes} nodes")
        self.nodes = nodes


class Infeasible(ValueError):
    pass


@dataclass(frozen=True)
class Violation:
    vertex: int
    count: int


@dataclass(frozen=True)
class EdsSolution:
    d: frozenset[int]
    certified: bool

    def serialize(self) -> str:
        return format_eds(self.d)


def verify_eds(g: BipartiteGraph, d: Iterable[int]) -> Violation | None:
    """``None`` if every vertex has exactly one member of ``d`` in its closed
    neighbourhood, else the first vertex where that fails."""
    dm = mask_of(d)
    for v in range(g.n):
        c = (g.closed[v] & dm).bit_count()
        if c != 1:
            return Violation(v, c)
    return None


def is_eds(g: BipartiteGraph, d: Iterable[int]) -> bool:
    return verify_eds(g, d) is None


class _Counter:
    def __init__(self, budget: int):
        self.budget = budget
        self.nodes = 0

    def tick(self) -> None:
        self.nodes += 1
        if self.nodes > self.budget:
            raise ResourceBudgetExceeded(self.nodes, "exact cover")


def _pick_column(g: BipartiteGraph, uncovered: int, live: int) -> tuple[int, int]:
    best_c, best_rows, best_n = -1, 0, 1 << 30
    for c in bits(uncovered):
        rows = g.closed[c] & live
        k = rows.bit_count()
        if k < best_n:
            best_c, best_rows, best_n = c, rows, k
            if k <= 1:
                break
    return best_c, best_rows


def _search(g: BipartiteGraph, target: int, covered: int, live: int, chosen: int, ctr: _Counter) -> Iterator[int]:
    ctr.tick()
    uncovered = target & ~covered
    if not uncovered:
        yield chosen
        return
    _, rows = _pick_column(g, uncovered, live)
    for v in bits(rows):
        yield from _search(g, target, covered | g.closed[v], live & ~g.ball2[v], chosen | (1 << v), ctr)


def _count(g: BipartiteGraph, target: int, covered: int, live: int, ctr: _Counter) -> int:
    ctr.tick()
    uncovered = target & ~covered
    if not uncovered:
        return 1
    _, rows = _pick_column(g, uncovered, live)
    total = 0
    for v in bits(rows):
        total += _count(g, target, covered | g.closed[v], live & ~g.ball2[v], ctr)
    return total


def _prepare(g: BipartiteGraph, allowed, required) -> tuple[int, int, int] | None:
    live = g.full_mask if allowed is None else (allowed if isinstance(allowed, int) else mask_of(allowed))
    req = required if isinstance(required, int) else mask_of(required)
    covered = 0
    for v in bits(req):
        if g.closed[v] & covered:
            return None
        covered |= g.closed[v]
        live &= ~g.ball2[v]
    return covered, live, req


def _component_solutions(g, covered, live, req, mode, ctr) -> list[list[int]] | None:
    per_comp = []
    for comp in component_masks(g):
        if not comp & ~covered:
            per_comp.append([0])
            continue
        sols = []
        for found in _search(g, comp, covered & comp, live & comp, 0, ctr):
            sols.append(found)
            if mode == "first":
                break
        if not sols:
            return None
        per_comp.append(sols)
    return per_comp


def solve_exact(
    g: BipartiteGraph,
    mode: str = "all",
    *,
    budget: int = DEFAULT_BUDGET,
    allowed=None,
    required=(),
) -> list[EdsSolution]:
    """All (``mode="all"``) or one (``mode="first"``) e.d.s. of ``g``.

    ``allowed`` restricts which vertices may join D; ``required`` lists
    vertices that must.  An empty list means there is no such e.d.s.
    Components are searched independently.
    """
    if mode == "count":
        raise ValueError("use count_exact for mode='count'")
    if mode not in ("all", "first"):
        raise ValueError(f"unknown mode {mode!r}")
    prep = _prepare(g, allowed, required)
    if prep is None:
        return []
    covered, live, req = prep
    ctr = _Counter(budget)
    per_comp = _component_solutions(g, covered, live, req, mode, ctr)
    if per_comp is None:
        return []
    out = []
    for combo in itertools.product(*per_comp):
        m = req
        for part in combo:
            m |= part
        d = frozenset(bits(m))
        out.append(EdsSolution(d, verify_eds(g, d) is None))
    out.sort(key=lambda s: sorted(s.d))
    return out


def count_exact(g: BipartiteGraph, *, budget: int = DEFAULT_BUDGET, allowed=None, required=()) -> int:
    """Number of e.d.s. without materialising them."""
    prep = _prepare(g, allowed, required)
    if prep is None:
        return 0
    covered, live, _ = prep
    ctr = _Counter(budget)
    total = 1
    for comp in component_masks(g):
        if not comp & ~covered:
            continue
        total *= _count(g, comp, covered & comp, live & comp, ctr)
        if not total:
            return 0
    return total


def forced_excluded_by_oracle(
    g: BipartiteGraph, assumed: Iterable[int] = (), *, budget: int = DEFAULT_BUDGET, allowed=None
) -> tuple[frozenset[int], frozenset[int]]:
    """Vertices in every (forced) / no (excluded) e.d.s. that contains ``assumed``."""
    sols = solve_exact(g, "all", budget=budget, required=mask_of(assumed), allowed=allowed)
    if not sols:
        raise Infeasible(f"no e.d.s. contains {sorted(assumed)}")
    inter = set(sols[0].d)
    union: set[int] = set()
    for s in sols:
        inter &= s.d
        union |= s.d
    return frozenset(inter), frozenset(set(range(g.n)) - union)


# -- serialization ----------------------------------------------------------

def format_eds(d: Iterable[int]) -> str:
    ids = sorted(d)
    return f"eds {len(ids)} : {' '.join(map(str, ids))}".rstrip()


def format_solutions(sols: list[EdsSolution]) -> str:
    if not sols:
        return "no-eds\n"
    return "".join(s.serialize() + "\n" for s in sols)


def parse_eds(text: str) -> list[frozenset[int]]:
    """Parse ``eds <k> : <ids>`` lines; ``no-eds`` yields an empty list."""
    out = []
    for raw in text.splitlines():
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if line == "no-eds":
            continue
        head, sep, tail = line.partition(":")
        parts = head.split()
        if not sep or len(parts) != 2 or parts[0] != "eds" or not parts[1].isdigit():
            raise ValueError(f"bad e.d.s. line {line!r}")
        ids = [int(t) for t in tail.split()]
        if len(ids) != int(parts[1]) or len(set(ids)) != len(ids):
            raise ValueError(f"e.d.s. line {line!r} does not match its count")
        out.append(frozenset(ids))
    return out
