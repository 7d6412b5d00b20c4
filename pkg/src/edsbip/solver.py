"""Forced-vertex propagation and branch-and-reduce for e.d.s.

The state tracks which vertices are committed to D, which are ruled out, and
which are already dominated.  ``propagate`` runs the reduction rules to a
fixpoint; ``solve`` alternates propagation, reduction to ``G \\ N[D]`` and
branching on P5 midpoints, handing P8-free residues to the exact oracle.
"""
from __future__ import annotations

import sys
from contextlib import contextmanager
from dataclasses import dataclass, field

from .graph import BipartiteGraph, DistanceLevels, bits, component_masks, distance_levels, mask_of
from .oracle import DEFAULT_BUDGET, ResourceBudgetExceeded, solve_exact, verify_eds
from .recognition import S125, S333, ClassReport, classify, iter_induced_paths, p5_endpoints, p5_midpoint_mask

OPEN, IN_D, EXCLUDED = "open", "in_d", "excluded"

RULES = ("R-levels", "R-deg", "R-unit", "R-p5mid", "R-p8")
CLASS_RULES = frozenset({"R-p5mid", "R-p8"})

DEFAULT_BRANCH_BUDGET = 10**5


class ConflictExcluded(ValueError):
    pass


class DominationClash(ValueError):
    pass


class NotInClass(ValueError):
    def __init__(self, report: ClassReport):
        keys = ", ".join(sorted(report.counterexample))
        super().__init__(f"graph is outside the class ({keys})")
        self.report = report


def _ball3(g: BipartiteGraph) -> tuple[int, ...]:
    cached = g.__dict__.get("_ball3")
    if cached is None:
        out = []
        for v in range(g.n):
            m = g.ball2[v]
            for u in bits(g.ball2[v] & ~g.closed[v]):
                m |= g.nbr[u]
            out.append(m)
        cached = tuple(out)
        g.__dict__["_ball3"] = cached
    return cached


def fmt_set(vs) -> str:
    ids = sorted(vs)
    return ",".join(map(str, ids)) if ids else "-"


@dataclass(frozen=True)
class Event:
    kind: str
    payload: str
    rule: str
    path: str = ""

    def serialize(self) -> str:
        line = f"{self.kind} {self.payload} {self.rule}"
        return f"{line} @{self.path}" if self.path else line

    @classmethod
    def parse(cls, line: str) -> "Event":
        parts = line.split()
        path = ""
        if parts and parts[-1].startswith("@"):
            path = parts.pop()[1:]
        if len(parts) != 3:
            raise ValueError(f"bad trace line {line!r}")
        return cls(parts[0], parts[1], parts[2], path)


class DominationState:
    """Partial solution over ``g``.

    Vertex sets are bitmasks.  ``lift`` maps local ids to the ids used in the
    trace (the original graph when ``g`` is a reduced child).  Asserting a
    vertex silently excludes its neighbours; every other exclusion is logged.
    """

    def __init__(self, g: BipartiteGraph, *, class_rules: bool = True, lift=None, trace=None, path: str = ""):
        self.g = g
        self.class_rules = class_rules
        self.lift = tuple(range(g.n)) if lift is None else tuple(lift)
        self.trace: list[Event] = [] if trace is None else trace
        self.path = path
        self.in_d = 0
        self.excluded = 0
        self.dominated = 0
        self.near = 0  # union of ball2 over in_d, i.e. N0 | N1 | N2
        self.feasible = True
        self._p5_done = 0

    def copy(self, path: str | None = None) -> "DominationState":
        other = DominationState.__new__(DominationState)
        other.__dict__.update(self.__dict__)
        if path is not None:
            other.path = path
        return other

    # -- views --------------------------------------------------------------

    @property
    def open(self) -> int:
        return self.g.full_mask & ~self.in_d & ~self.excluded

    def status(self, v: int) -> str:
        if self.in_d >> v & 1:
            return IN_D
        if self.excluded >> v & 1:
            return EXCLUDED
        return OPEN

    @property
    def d_basis(self) -> frozenset[int]:
        return frozenset(bits(self.in_d))

    @property
    def excluded_set(self) -> frozenset[int]:
        return frozenset(bits(self.excluded))

    @property
    def dominated_by(self) -> list[int]:
        return [(self.g.closed[v] & self.in_d).bit_count() for v in range(self.g.n)]

    @property
    def levels(self) -> DistanceLevels | None:
        if not self.in_d:
            return None
        return distance_levels(self.g, bits(self.in_d))

    @property
    def complete(self) -> bool:
        return self.feasible and self.dominated == self.g.full_mask

    # -- mutation -----------------------------------------------------------

    def _log(self, kind: str, payload: str, rule: str) -> None:
        self.trace.append(Event(kind, payload, rule, self.path))

    def _lifted(self, mask: int) -> str:
        return fmt_set(self.lift[v] for v in bits(mask))

    def mark_infeasible(self, rule: str, v: int | None = None) -> None:
        if self.feasible:
            self.feasible = False
            self._log("infeasible", "-" if v is None else str(self.lift[v]), rule)

    def _add(self, v: int) -> None:
        g = self.g
        self.in_d |= 1 << v
        self.excluded |= g.nbr[v]
        self.dominated |= g.closed[v]
        self.near |= g.ball2[v]

    def force(self, v: int, rule: str, kind: str = "forced") -> bool:
        """Non-raising commit used by the rules; a conflict only clears
        ``feasible``.  Returns whether the state changed."""
        if self.in_d >> v & 1 or not self.feasible:
            return False
        self._log(kind, str(self.lift[v]), rule)
        if self.excluded >> v & 1 or self.g.closed[v] & self.dominated:
            self.mark_infeasible(rule, v)
            return True
        self._add(v)
        return True

    def exclude(self, v: int, rule: str) -> bool:
        if self.excluded >> v & 1 or not self.feasible:
            return False
        self._log("excluded", str(self.lift[v]), rule)
        if self.in_d >> v & 1:
            self.mark_infeasible(rule, v)
            return True
        self.excluded |= 1 << v
        return True

    def exclude_silently(self, mask: int) -> None:
        self.excluded |= mask & ~self.in_d


def assert_in_d(state: DominationState, v: int, rule: str = "seed") -> DominationState:
    """Commit ``v`` to D, raising on an outright contradiction."""
    if state.excluded >> v & 1:
        raise ConflictExcluded(f"vertex {v} is already excluded")
    if state.in_d >> v & 1:
        return state
    clash = state.g.closed[v] & state.dominated
    if clash:
        u = (clash & -clash).bit_length() - 1
        raise DominationClash(f"vertex {u} would be dominated twice")
    state.force(v, rule, kind="seeded")
    return state


# -- rules --------------------------------------------------------------------

def _rule_levels(st: DominationState) -> bool:
    # D avoids N1 and N2: such a vertex would dominate a dominated vertex again
    changed = False
    for v in bits(st.open & st.near):
        changed |= st.exclude(v, "R-levels")
    return changed


def _rule_deg(st: DominationState) -> bool:
    g = st.g
    n2 = st.near & ~st.dominated
    for u in bits(n2):
        if not g.nbr[u] & st.open & ~st.near:
            st.mark_infeasible("R-deg", u)
            return True
    return False


def _viable(st: DominationState, w: int) -> bool:
    """Taking ``w`` leaves every nearby undominated vertex a dominator."""
    g = st.g
    live = st.open & ~g.ball2[w]
    for u in bits(_ball3(g)[w] & ~g.closed[w] & ~st.dominated):
        if not g.closed[u] & live:
            return False
    return True


def _rule_unit(st: DominationState) -> bool:
    g = st.g
    changed = False
    for v in range(g.n):
        if st.dominated >> v & 1:
            continue
        cands = [w for w in bits(g.closed[v] & st.open & ~st.near) if _viable(st, w)]
        if not cands:
            st.mark_infeasible("R-unit", v)
            return True
        if len(cands) == 1:
            changed |= st.force(cands[0], "R-unit")
            if not st.feasible:
                return True
    return changed


def _rule_p5mid(st: DominationState) -> bool:
    # an endpoint u of a P5 centred at c in D has exactly one neighbour off N(c),
    # and that neighbour is its dominator
    g = st.g
    changed = False
    for c in bits(st.in_d & ~st._p5_done):
        st._p5_done |= 1 << c
        for u in bits(p5_endpoints(g, c)):
            off = g.nbr[u] & ~g.nbr[c]
            if off.bit_count() != 1:
                st.mark_infeasible("R-p5mid", u)
                return True
            w = off.bit_length() - 1
            changed |= st.force(w, "R-p5mid")
            if not st.feasible:
                return True
    return changed


def _rule_p8(st: DominationState) -> bool:
    # only sound once no P5 midpoint can be in D
    g = st.g
    if p5_midpoint_mask(g) & ~st.excluded:
        return False
    within = g.full_mask & ~st.dominated
    for p in iter_induced_paths(g, 8, within=within):
        changed = False
        for pos, v in enumerate(p):
            if pos in (1, 6):
                changed |= st.force(v, "R-p8")
            else:
                changed |= st.exclude(v, "R-p8")
            if not st.feasible:
                return True
        if changed:
            return True
    return False


_RULE_FN = {
    "R-levels": _rule_levels,
    "R-deg": _rule_deg,
    "R-unit": _rule_unit,
    "R-p5mid": _rule_p5mid,
    "R-p8": _rule_p8,
}


def propagate(state: DominationState, order=RULES) -> DominationState:
    """Run the rules to a fixpoint, in place.

    After any rule changes the state the scan restarts from the first rule.
    The class-dependent rules only run when ``state.class_rules`` is set.
    """
    rules = [r for r in order if state.class_rules or r not in CLASS_RULES]
    while state.feasible:
        for r in rules:
            if _RULE_FN[r](state):
                break
        else:
            break
    return state


# -- reduction ----------------------------------------------------------------

@dataclass(frozen=True)
class Reduction:
    graph: BipartiteGraph
    id_map: tuple[int, ...]  # child id -> parent id
    excluded: frozenset[int]  # child ids


def reduce_by_forced(state: DominationState, u: int) -> Reduction:
    """``G' = G \\ N[u]`` with ``N^2(u)`` and the state's exclusions carried over."""
    if not state.in_d >> u & 1:
        raise ValueError(f"vertex {u} is not in D")
    g = state.g
    child, id_map = g.without(g.closed[u])
    carried = (g.ball2[u] & ~g.closed[u]) | state.excluded
    ex = frozenset(i for i, p in enumerate(id_map) if carried >> p & 1)
    return Reduction(child, id_map, ex)


# -- solve --------------------------------------------------------------------

@dataclass
class SolveOptions:
    force: bool = False
    branch_budget: int = DEFAULT_BRANCH_BUDGET
    oracle_budget: int = DEFAULT_BUDGET
    spiders: tuple = (S125, S333)


_BASE_RANK = {"Direct": 0, "NoP8Residual": 1, "OracleFallback": 2}


@dataclass
class SolveOutcome:
    result: frozenset[int] | None
    trace: list[Event]
    base_case: str
    branches: int
    in_class: bool
    state: DominationState | None = field(default=None, repr=False)

    @property
    def found(self) -> bool:
        return self.result is not None

    def trace_text(self) -> str:
        return "".join(e.serialize() + "\n" for e in self.trace)


@contextmanager
def _deep_recursion(limit: int = 20000):
    old = sys.getrecursionlimit()
    sys.setrecursionlimit(max(old, limit))
    try:
        yield
    finally:
        sys.setrecursionlimit(old)


class _Search:
    def __init__(self, opts: SolveOptions, class_rules: bool):
        self.opts = opts
        self.class_rules = class_rules
        self.trace: list[Event] = []
        self.branches = 0
        self.base = "Direct"

    def _note_base(self, kind: str) -> None:
        if _BASE_RANK[kind] > _BASE_RANK[self.base]:
            self.base = kind

    def solve_graph(self, h: BipartiteGraph, lift, excl: int, path: str, reduced: bool):
        """Returns ``(D as original-id mask, success path)`` or ``None``."""
        comps = component_masks(h)
        total = 0
        for comp in comps:
            if len(comps) == 1:
                sub, sub_lift, sub_excl = h, lift, excl
            else:
                sub, idm = h.induced_subgraph(bits(comp))
                sub_lift = tuple(lift[i] for i in idm)
                sub_excl = mask_of(i for i, p in enumerate(idm) if excl >> p & 1)
            r = self.solve_component(sub, sub_lift, sub_excl, path, reduced)
            if r is None:
                return None
            total |= r[0]
            path = r[1]
        return total, path

    def solve_component(self, h, lift, excl, path, reduced):
        if h.n == 0:
            return 0, path
        for x in range(h.n):
            if h.closed[x] == h.full_mask and not excl >> x & 1:
                self.trace.append(Event("forced", str(lift[x]), "R-star", path))
                return 1 << lift[x], path
        st = DominationState(h, class_rules=self.class_rules, lift=lift, trace=self.trace, path=path)
        st.exclude_silently(excl)
        propagate(st)
        if not st.feasible:
            return None
        return self.after_propagate(st, path, reduced)

    def after_propagate(self, st: DominationState, path: str, reduced: bool):
        h = st.g
        lifted = mask_of(st.lift[v] for v in bits(st.in_d))
        if st.in_d:
            if st.dominated == h.full_mask:
                return lifted, path
            self.trace.append(Event("reduced", st._lifted(st.dominated), "reduce", path))
            child, idm = h.without(st.dominated)
            child_lift = tuple(st.lift[i] for i in idm)
            child_excl = mask_of(i for i, p in enumerate(idm) if st.excluded >> p & 1)
            r = self.solve_graph(child, child_lift, child_excl, path, True)
            if r is None:
                return None
            return lifted | r[0], r[1]
        mids = p5_midpoint_mask(h) & st.open
        if not self.class_rules or not mids or next(iter_induced_paths(h, 8), None) is None:
            return self.oracle(st, path, reduced)
        return self.branch(st, path, list(bits(mids)))

    def oracle(self, st: DominationState, path: str, reduced: bool):
        h = st.g
        self._note_base("NoP8Residual" if reduced else "OracleFallback")
        sols = solve_exact(h, "first", budget=self.opts.oracle_budget, allowed=st.open)
        if not sols:
            st.mark_infeasible("oracle")
            return None
        d = sols[0].d
        for v in sorted(d):
            self.trace.append(Event("forced", str(st.lift[v]), "oracle", path))
        return mask_of(st.lift[v] for v in d), path

    def branch(self, st: DominationState, path: str, mids: list[int]):
        # either no midpoint is in D, or mids[k] is the first one that is
        for k in range(len(mids) + 1):
            self.branches += 1
            if self.branches > self.opts.branch_budget:
                raise ResourceBudgetExceeded(self.branches, "branching")
            child_path = f"{path}.{k}" if path else str(k)
            label = "no-midpoint" if k == 0 else f"midpoint:{st.lift[mids[k - 1]]}"
            self.trace.append(Event("branched", label, "branch", child_path))
            child = st.copy(path=child_path)
            if k == 0:
                for m in mids:
                    child.exclude(m, "branch")
            else:
                for m in mids[: k - 1]:
                    child.exclude(m, "branch")
                child.force(mids[k - 1], "branch", kind="seeded")
            propagate(child)
            if not child.feasible:
                continue
            r = self.after_propagate(child, child_path, True)
            if r is not None:
                return r
        return None


def solve(g: BipartiteGraph, opts: SolveOptions | None = None) -> SolveOutcome:
    """Decide e.d.s. on ``g``.

    Raises ``NotInClass`` for graphs outside the class unless ``opts.force``;
    forced runs skip the class-dependent rules.
    """
    opts = opts or SolveOptions()
    report = classify(g, *opts.spiders)
    if not report.in_class and not opts.force:
        raise NotInClass(report)
    search = _Search(opts, report.in_class)
    with _deep_recursion():
        r = search.solve_graph(g, tuple(range(g.n)), 0, "", False)
    if r is None:
        search.trace.append(Event("result", "no-eds", "solve", ""))
        result = None
    else:
        mask, path = r
        result = frozenset(bits(mask))
        search.trace.append(Event("result", fmt_set(result), "solve", path))
        if verify_eds(g, result) is not None:
            raise AssertionError(f"solver produced a non-e.d.s. {sorted(result)}")
    out = SolveOutcome(result, search.trace, search.base, search.branches, report.in_class)
    out.state = replay(g, out.trace)
    return out


def replay(g: BipartiteGraph, trace) -> DominationState:
    """Rebuild the state of the path that produced the result.

    Each ``branched`` event starts its path from a copy of its parent's
    state; all other events act on the state of their own path.
    """
    events = [Event.parse(e) if isinstance(e, str) else e for e in trace]
    root = DominationState(g, class_rules=False, trace=[])
    states: dict[str, DominationState] = {"": root}
    final = root
    for e in events:
        if e.kind == "branched":
            parent = e.path.rpartition(".")[0] if "." in e.path else ""
            states[e.path] = states[parent].copy(path=e.path)
            continue
        st = states[e.path]
        if e.kind in ("forced", "seeded"):
            v = int(e.payload)
            if st.in_d >> v & 1:
                continue
            if st.excluded >> v & 1 or g.closed[v] & st.dominated:
                st.feasible = False
            else:
                st._add(v)
        elif e.kind == "excluded":
            v = int(e.payload)
            if st.in_d >> v & 1:
                st.feasible = False
            st.excluded |= 1 << v
        elif e.kind == "infeasible":
            st.feasible = False
        elif e.kind == "result":
            final = st
        elif e.kind != "reduced":
            raise ValueError(f"unknown trace event {e.kind!r}")
    final.trace = []
    return final
