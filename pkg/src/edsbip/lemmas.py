"""Executable checks of the structural facts the solver relies on.

Each check looks for its hypothesis configuration in ``(g, d, d_basis)`` and,
where it is present, tests the conclusion.  Everything runs per connected
component; distance levels are taken from ``d_basis`` inside the component.

``BASIS_OK`` bundles the standing assumptions about the seed: it contains an
X-vertex and a Y-vertex at distance 3, ``G[N0 | N1]`` is connected, every
N2-vertex has at least two N3-neighbours and every N3-vertex has a neighbour
in N3 | N4.  The level-based checks require it.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Callable

from .graph import X, BipartiteGraph, LevelMasks, bits, component_masks, is_connected_mask, level_masks, mask_of, mask_distance
from .oracle import DEFAULT_BUDGET, solve_exact, verify_eds
from .recognition import iter_induced_paths, p5_midpoint_mask

LEMMA_IDS = (
    "L1", "L2", "C1",
    "E1", "E2", "E3", "E4",
    "L5", "L6", "C2", "L7", "L8", "L9",
    "L10", "L11",
    "E5", "L12", "L13", "L14",
    "L15", "C3", "L16", "L17", "C4",
    "L18", "L19", "L20", "L21a", "L21",
)


class NotAnEds(ValueError):
    pass


@dataclass(frozen=True)
class LemmaEntry:
    lemma_id: str
    hypothesis_met: bool
    conclusion_holds: bool
    counterexample: str | None = None

    def line(self) -> str:
        s = f"{self.lemma_id} hypothesis={str(self.hypothesis_met).lower()} conclusion={str(self.conclusion_holds).lower()}"
        return s + (f" witness={self.counterexample}" if self.counterexample else "")


@dataclass
class LemmaReport:
    entries: list[LemmaEntry]

    @property
    def violations(self) -> list[LemmaEntry]:
        return [e for e in self.entries if e.hypothesis_met and not e.conclusion_holds]

    def __getitem__(self, lemma_id: str) -> LemmaEntry:
        for e in self.entries:
            if e.lemma_id == lemma_id:
                return e
        raise KeyError(lemma_id)

    def lines(self) -> list[str]:
        return [e.line() for e in self.entries]


def _ids(vs) -> str:
    return "-".join(map(str, vs))


# -- per-component context ----------------------------------------------------

class _Comp:
    """A component with lazily enumerated induced paths and e.d.s."""

    def __init__(self, h: BipartiteGraph, lift: tuple[int, ...], budget: int):
        self.h = h
        self.lift = lift
        self.budget = budget
        self._paths: dict[int, list[tuple[int, ...]]] = {}
        self._sols: list[int] | None = None

    def paths(self, k: int) -> list[tuple[int, ...]]:
        """Induced P_k's in both orientations."""
        if k not in self._paths:
            one = list(iter_induced_paths(self.h, k))
            self._paths[k] = one + [p[::-1] for p in one if k > 1]
        return self._paths[k]

    def sols(self) -> list[int]:
        if self._sols is None:
            self._sols = [mask_of(s.d) for s in solve_exact(self.h, "all", budget=self.budget)]
        return self._sols

    def forced_with(self, base: int, among: Callable[[int], bool] = lambda s: True) -> int:
        out = self.h.full_mask
        for s in self.sols():
            if s & base == base and among(s):
                out &= s
        return out

    def up(self, vs) -> str:
        return _ids(self.lift[v] for v in vs)


def _components(g: BipartiteGraph, budget: int) -> list[_Comp]:
    key = ("_lemma_comps", budget)
    cached = g.__dict__.get(key)
    if cached is None:
        cached = []
        for m in component_masks(g):
            h, lift = g.induced_subgraph(bits(m))
            cached.append(_Comp(h, lift, budget))
        g.__dict__[key] = cached
    return cached


def level_closure(h: BipartiteGraph, seed: int) -> int | None:
    """Grow ``seed`` by the two level-forcing steps until neither applies.

    An N2-vertex with a single N3-neighbour forces it; an N3-vertex without
    neighbours in N3 | N4 forces itself.  ``None`` when some N2-vertex has no
    N3-neighbour at all (no e.d.s. contains the seed).
    """
    basis = seed
    while True:
        lv = level_masks(h, basis)
        n2, n3, n34 = lv[2], lv[3], lv[3] | lv[4]
        add = None
        for u in bits(n2):
            c = h.nbr[u] & n3
            if not c:
                return None
            if c.bit_count() == 1:
                add = c
                break
        if add is None:
            for v in bits(n3):
                if not h.nbr[v] & n34:
                    add = 1 << v
                    break
        if add is None:
            return basis
        basis |= add


# -- checks -------------------------------------------------------------------

class _Check:
    def __init__(self, c: _Comp, d: int, b: int):
        self.c, self.h, self.d, self.b = c, c.h, d, b
        self.lv: LevelMasks | None = level_masks(c.h, b) if b else None
        self.dom = {}
        for v in range(c.h.n):
            m = c.h.closed[v] & d
            self.dom[v] = (m & -m).bit_length() - 1
        self._basis_ok: bool | None = None

    def L(self, i: int) -> int:
        return self.lv[i] if self.lv is not None else 0

    def side(self, v: int) -> int:
        return self.h.side_mask[self.h.side[v]]

    @property
    def basis_ok(self) -> bool:
        if self._basis_ok is None:
            self._basis_ok = self._compute_basis_ok()
        return self._basis_ok

    def _compute_basis_ok(self) -> bool:
        h, b = self.h, self.b
        if not b:
            return False
        for u in bits(self.L(2)):
            if (h.nbr[u] & self.L(3)).bit_count() < 2:
                return False
        for v in bits(self.L(3)):
            if not h.nbr[v] & (self.L(3) | self.L(4)):
                return False
        if not is_connected_mask(h, self.L(0) | self.L(1)):
            return False
        bx = b & h.side_mask[X]
        by = b & ~bx
        for x in bits(bx):
            ball3 = 0
            for u in bits(h.ball2[x]):
                ball3 |= h.nbr[u]
            if ball3 & by:
                return True
        return False

    def p7_configs(self):
        """Induced P7's with positions 1, 4, 7 in N0 and the rest in N1."""
        n0, n1 = self.L(0), self.L(1)
        for p in self.c.paths(7):
            if all(n0 >> p[i] & 1 for i in (0, 3, 6)) and all(n1 >> p[i] & 1 for i in (1, 2, 4, 5)):
                yield p

    def d_p7s(self):
        """Induced P7's whose positions 1, 4, 7 are in D."""
        for p in self.c.paths(7):
            if all(self.d >> p[i] & 1 for i in (0, 3, 6)):
                yield p


Result = tuple[bool, bool, "str | None"]
VACUOUS: Result = (False, True, None)


def _chk_L1(k: _Check) -> Result:
    h, c = k.h, k.c
    met = False
    for p in c.paths(5):
        mid = p[2]
        if not k.d >> mid & 1:
            continue
        met = True
        partners = []
        for end, other in ((p[0], p[4]), (p[4], p[0])):
            off = h.nbr[end] & ~h.nbr[mid]
            if off.bit_count() != 1:
                return True, False, f"p5={c.up(p)} endpoint={c.lift[end]}"
            v = off.bit_length() - 1
            if not k.d >> v & 1 or h.nbr[other] >> v & 1:
                return True, False, f"p5={c.up(p)} partner={c.lift[v]}"
            partners.append(v)
        if not c.forced_with(1 << mid) & mask_of(partners) == mask_of(partners):
            return True, False, f"p5={c.up(p)} not-forced={c.up(partners)}"
    return met, True, None


def _chk_L2(k: _Check) -> Result:
    met = False
    for p in k.c.paths(5):
        if k.d & mask_of(p) or k.dom[p[0]] != k.dom[p[4]]:
            continue
        met = True
        v = k.dom[p[0]]
        if not k.h.nbr[p[2]] >> v & 1 or k.dom[p[1]] == k.dom[p[3]]:
            return True, False, f"p5={k.c.up(p)} dominator={k.c.lift[v]}"
    return met, True, None


def _chk_C1(k: _Check) -> Result:
    met = False
    for p in k.c.paths(7):
        if k.d & mask_of(p) or len({k.dom[p[i]] for i in (0, 2, 4, 6)}) != 1:
            continue
        met = True
        if len({k.dom[p[i]] for i in (1, 3, 5)}) != 3:
            return True, False, f"p7={k.c.up(p)}"
    return met, True, None


def _chk_E1(k: _Check) -> Result:
    if not k.b:
        return VACUOUS
    bad = k.d & (k.L(1) | k.L(2))
    return True, not bad, (f"vertices={k.c.up(bits(bad))}" if bad else None)


def _chk_E2(k: _Check) -> Result:
    if not k.b:
        return VACUOUS
    for u in bits(k.L(2)):
        if not k.h.nbr[u] & k.L(3) & k.d:
            return True, False, f"vertex={k.c.lift[u]}"
    return True, True, None


def _oracle_closed(k: _Check) -> bool:
    return bool(k.b) and k.c.forced_with(k.b) & ~k.b == 0


def _chk_E3(k: _Check) -> Result:
    if not _oracle_closed(k):
        return VACUOUS
    for u in bits(k.L(2)):
        if (k.h.nbr[u] & k.L(3)).bit_count() < 2:
            return True, False, f"vertex={k.c.lift[u]}"
    return True, True, None


def _chk_E4(k: _Check) -> Result:
    if not _oracle_closed(k):
        return VACUOUS
    for v in bits(k.L(3)):
        if not k.h.nbr[v] & (k.L(3) | k.L(4)):
            return True, False, f"vertex={k.c.lift[v]}"
    return True, True, None


def _chk_L5(k: _Check) -> Result:
    if not k.basis_ok:
        return VACUOUS
    n01 = k.L(0) | k.L(1)
    for p in k.c.paths(6):
        if k.L(2) >> p[0] & 1 and mask_of(p[1:]) & ~n01 == 0:
            return True, False, f"p6={k.c.up(p)}"
    return True, True, None


def _chk_L6(k: _Check) -> Result:
    if not k.basis_ok:
        return VACUOUS
    h = k.h
    if k.L(6):
        return True, False, f"n6={k.c.up(bits(k.L(6)))}"
    for v in bits(k.L(5)):
        if h.nbr[v] & k.L(5):
            return True, False, f"n5-edge-at={k.c.lift[v]}"
    allowed = [k.L(2), k.L(3), k.L(3) | k.L(4), k.lv.span(3, 5), k.lv.span(3, 6)]
    for p in k.c.paths(5):
        if all(allowed[i] >> p[i] & 1 for i in range(5)):
            return True, False, f"p5={k.c.up(p)}"
    return True, True, None


def _chk_C2(k: _Check) -> Result:
    if not k.basis_ok:
        return VACUOUS
    allowed = [k.L(2), k.L(3) & k.d, k.L(3) | k.L(4), k.lv.span(3, 5)]
    for p in k.c.paths(4):
        if all(allowed[i] >> p[i] & 1 for i in range(4)):
            return True, False, f"p4={k.c.up(p)}"
    return True, True, None


def _chk_L7(k: _Check) -> Result:
    if not k.basis_ok:
        return VACUOUS
    h = k.h
    n2, n34, n1 = k.L(2), k.L(3) | k.L(4), k.L(1)
    d3 = k.d & k.L(3)
    for r3, s3 in combinations(bits(d3), 2):
        if h.side[r3] != h.side[s3]:
            continue
        if not (h.nbr[r3] & n34 and h.nbr[s3] & n34):
            continue
        for r2 in bits(h.nbr[r3] & n2):
            for s2 in bits(h.nbr[s3] & n2):
                if not h.nbr[r2] & h.nbr[s2] & n1:
                    return True, False, f"centres={k.c.up((r3, s3))} n2={k.c.up((r2, s2))}"
    return True, True, None


def _chk_L8(k: _Check) -> Result:
    if not k.basis_ok:
        return VACUOUS
    d3 = k.d & k.L(3)
    for s, m in k.h.side_mask.items():
        if (d3 & m).bit_count() > 2:
            return True, False, f"side={s} vertices={k.c.up(bits(d3 & m))}"
    return True, True, None


def _chk_L9(k: _Check) -> Result:
    if not k.basis_ok:
        return VACUOUS
    bad = k.d & k.L(5) & p5_midpoint_mask(k.h)
    return True, not bad, (f"vertices={k.c.up(bits(bad))}" if bad else None)


def _no_mid_hyp(k: _Check) -> bool:
    return not k.d & p5_midpoint_mask(k.h) and bool(k.c.paths(8))


def _chk_L10(k: _Check) -> Result:
    if not _no_mid_hyp(k):
        return VACUOUS
    for p in k.c.paths(8):
        bad = [p[i] for i in (0, 2, 3, 4, 5, 7) if k.d >> p[i] & 1]
        if bad:
            return True, False, f"p8={k.c.up(p)} in-d={k.c.up(bad)}"
    return True, True, None


def _chk_L11(k: _Check) -> Result:
    if not _no_mid_hyp(k):
        return VACUOUS
    mids = p5_midpoint_mask(k.h)
    forced = k.c.forced_with(0, lambda s: not s & mids)
    for p in k.c.paths(8):
        want = (1 << p[1]) | (1 << p[6])
        if k.d & mask_of(p) != want or forced & want != want:
            return True, False, f"p8={k.c.up(p)}"
    return True, True, None


def _chk_E5(k: _Check) -> Result:
    met = False
    for p in k.d_p7s():
        if level_closure(k.h, mask_of((p[0], p[3], p[6]))) == k.b:
            met = True
            break
    if not met:
        return VACUOUS
    ok = is_connected_mask(k.h, k.L(0) | k.L(1))
    return True, ok, (None if ok else "n0-n1-disconnected")


def _p7_cases(k: _Check):
    return list(k.p7_configs()) if k.basis_ok else []


def _chk_L12(k: _Check) -> Result:
    cases = _p7_cases(k)
    for p in cases:
        if (k.h.nbr[p[1]] | k.h.nbr[p[5]]) & k.L(2):
            return True, False, f"p7={k.c.up(p)}"
    return bool(cases), True, None


def _nbhd(h: BipartiteGraph, m: int) -> int:
    out = 0
    for v in bits(m):
        out |= h.nbr[v]
    return out


def _chk_L13(k: _Check) -> Result:
    h = k.h
    met = False
    for p in _p7_cases(k):
        if mask_distance(h, 1 << p[0], 1 << p[6]) != 6:
            continue
        met = True
        if _nbhd(h, h.nbr[p[0]] | h.nbr[p[6]]) & k.L(2):
            return True, False, f"p7={k.c.up(p)}"
    return met, True, None


def _chk_L14(k: _Check) -> Result:
    h = k.h
    met = False
    for p in _p7_cases(k):
        if not k.L(2) & k.side(p[0]):
            continue
        met = True
        if mask_distance(h, 1 << p[0], 1 << p[6]) != 4:
            return True, False, f"p7={k.c.up(p)}"
    return met, True, None


def _chk_L15(k: _Check) -> Result:
    h = k.h
    cases = _p7_cases(k)
    for p in cases:
        n4 = k.L(4)
        if k.L(5) & k.side(p[3]) or any(h.nbr[v] & n4 for v in bits(n4)):
            return True, False, f"p7={k.c.up(p)}"
    return bool(cases), True, None


def _chk_C3(k: _Check) -> Result:
    sides = {k.h.side[p[3]] for p in _p7_cases(k)}
    if len(sides) < 2:
        return VACUOUS
    ok = not k.L(5)
    return True, ok, (None if ok else f"n5={k.c.up(bits(k.L(5)))}")


def _chk_L16(k: _Check) -> Result:
    cases = _p7_cases(k)
    mids = p5_midpoint_mask(k.h)
    for p in cases:
        bad = k.d & k.L(4) & k.side(p[0]) & mids
        if bad:
            return True, False, f"p7={k.c.up(p)} vertices={k.c.up(bits(bad))}"
    return bool(cases), True, None


def _chk_L17(k: _Check) -> Result:
    cases = _p7_cases(k)
    for p in cases:
        if (k.d & k.L(3) & k.side(p[3])).bit_count() > 1:
            return True, False, f"p7={k.c.up(p)}"
    return bool(cases), True, None


def _chk_C4(k: _Check) -> Result:
    cases = _p7_cases(k)
    for p in cases:
        d3 = k.d & k.L(3)
        if (d3 & k.side(p[0])).bit_count() > 2 or (d3 & k.side(p[3])).bit_count() > 1:
            return True, False, f"p7={k.c.up(p)}"
    return bool(cases), True, None


def _one_side_d_p7s(k: _Check) -> list[tuple[int, ...]]:
    """D-P7's, provided all their midpoints lie on one side; empty otherwise."""
    all_p = list(k.d_p7s())
    if len({k.h.side[p[3]] for p in all_p}) != 1:
        return []
    return all_p


def _pairs(k: _Check):
    ps = _one_side_d_p7s(k)
    for p, q in combinations(ps, 2):
        if p[3] != q[3]:
            yield p, q


def _pair_check(k: _Check, pred) -> Result:
    met = False
    for p, q in _pairs(k):
        met = True
        if not pred(p, q):
            return True, False, f"p7={k.c.up(p)} p7'={k.c.up(q)}"
    return met, True, None


def _chk_L18(k: _Check) -> Result:
    return _pair_check(k, lambda p, q: mask_distance(k.h, mask_of(p), mask_of(q)) >= 2)


def _chk_L19(k: _Check) -> Result:
    return _pair_check(k, lambda p, q: mask_distance(k.h, mask_of(p), mask_of(q)) >= 3)


def _chk_L20(k: _Check) -> Result:
    return _pair_check(k, lambda p, q: mask_distance(k.h, 1 << p[3], 1 << q[3]) == 4)


def _chk_L21a(k: _Check) -> Result:
    ps = _one_side_d_p7s(k)
    met = False
    for trio in combinations(ps, 3):
        if len({p[3] for p in trio}) != 3:
            continue
        met = True
        close = sum(1 for p, q in combinations(trio, 2) if mask_distance(k.h, mask_of(p), mask_of(q)) == 3)
        if close > 1:
            return True, False, "p7s=" + "/".join(k.c.up(p) for p in trio)
    return met, True, None


def _chk_L21(k: _Check) -> Result:
    ps = _one_side_d_p7s(k)
    if not ps:
        return VACUOUS
    mids = {p[3] for p in ps}
    ok = len(mids) <= 2
    return True, ok, (None if ok else f"midpoints={k.c.up(sorted(mids))}")


_CHECKS: dict[str, Callable[[_Check], Result]] = {
    "L1": _chk_L1, "L2": _chk_L2, "C1": _chk_C1,
    "E1": _chk_E1, "E2": _chk_E2, "E3": _chk_E3, "E4": _chk_E4,
    "L5": _chk_L5, "L6": _chk_L6, "C2": _chk_C2, "L7": _chk_L7, "L8": _chk_L8, "L9": _chk_L9,
    "L10": _chk_L10, "L11": _chk_L11,
    "E5": _chk_E5, "L12": _chk_L12, "L13": _chk_L13, "L14": _chk_L14,
    "L15": _chk_L15, "C3": _chk_C3, "L16": _chk_L16, "L17": _chk_L17, "C4": _chk_C4,
    "L18": _chk_L18, "L19": _chk_L19, "L20": _chk_L20, "L21a": _chk_L21a, "L21": _chk_L21,
}


def check_lemmas(g: BipartiteGraph, d, d_basis, *, budget: int = DEFAULT_BUDGET) -> LemmaReport:
    d = frozenset(d)
    d_basis = frozenset(d_basis)
    bad = verify_eds(g, d)
    if bad is not None:
        raise NotAnEds(f"vertex {bad.vertex} is dominated {bad.count} times")
    if not d_basis <= d:
        raise ValueError("d_basis must be a subset of d")
    dm, bm = mask_of(d), mask_of(d_basis)
    checks = []
    for c in _components(g, budget):
        local_d = mask_of(i for i, v in enumerate(c.lift) if dm >> v & 1)
        local_b = mask_of(i for i, v in enumerate(c.lift) if bm >> v & 1)
        checks.append(_Check(c, local_d, local_b))
    entries = []
    for lid in LEMMA_IDS:
        met, holds, wit = False, True, None
        for k in checks:
            m, h, w = _CHECKS[lid](k)
            met |= m
            if m and not h and holds:
                holds, wit = False, w
        entries.append(LemmaEntry(lid, met, holds, wit))
    return LemmaReport(entries)


def basis_candidates(g: BipartiteGraph, d) -> list[frozenset[int]]:
    """The seeds the lemmas are stated for, each grown by ``level_closure``:
    ``d`` itself, every opposite-side pair of ``d`` at distance 3, and the
    three D-vertices of every P7 whose positions 1, 4, 7 lie in ``d``.  The
    empty basis is included as the level-free case."""
    dm = mask_of(d)
    seeds = {0, dm}
    for x in bits(dm & g.side_mask[X]):
        for y in bits(dm & ~g.side_mask[X]):
            if mask_distance(g, 1 << x, 1 << y) == 3:
                seeds.add((1 << x) | (1 << y))
    for p in iter_induced_paths(g, 7):
        if all(dm >> p[i] & 1 for i in (0, 3, 6)):
            seeds.add(mask_of((p[0], p[3], p[6])))
    out = set()
    for s in seeds:
        closed = level_closure(g, s) if s else 0
        if closed is not None:
            out.add(frozenset(bits(closed)))
    return sorted(out, key=lambda b: (len(b), sorted(b)))
