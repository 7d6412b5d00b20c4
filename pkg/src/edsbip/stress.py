"""Oracle-vs-solver cross-checking over generated instances."""
from __future__ import annotations

import statistics
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, fields

from .corpus import corpus
from .generate import PLANTED, REJECTION, GenSpec, RetriesExhausted, gen_in_class
from .graph import BipartiteGraph
from .lemmas import basis_candidates, check_lemmas
from .oracle import DEFAULT_BUDGET, ResourceBudgetExceeded, solve_exact, verify_eds
from .recognition import classify
from .rng import SplitMix64
from .solver import DEFAULT_BRANCH_BUDGET, SolveOptions, solve

ORACLE_CAP = 16
REJECTION_DENSITIES = (0.1, 0.15, 0.2, 0.3)
PLANTED_DENSITIES = (0.3, 0.6, 1.0)


@dataclass(frozen=True)
class StressConfig:
    instance_count: int = 100
    size_range: tuple[int, int] = (4, 16)
    oracle_budget: int = DEFAULT_BUDGET
    solver_budget: int = DEFAULT_BRANCH_BUDGET
    seed: int = 1
    planted_fraction: float = 0.5
    include_corpus: bool = False
    check_lemmas: bool = True
    workers: int = 1

    def __post_init__(self):
        lo, hi = self.size_range
        if not 1 <= lo <= hi:
            raise ValueError("size_range must satisfy 1 <= lo <= hi")
        if hi > ORACLE_CAP:
            raise ValueError(f"size_range upper bound must be <= {ORACLE_CAP}")
        if self.instance_count < 0 or self.workers < 1:
            raise ValueError("instance_count must be >= 0 and workers >= 1")
        if not 0.0 <= self.planted_fraction <= 1.0:
            raise ValueError("planted_fraction must lie in [0, 1]")


def _parse_bool(s: str) -> bool:
    v = s.strip().lower()
    if v in ("1", "true", "yes", "on"):
        return True
    if v in ("0", "false", "no", "off"):
        return False
    raise ValueError(f"not a boolean: {s!r}")


def parse_config(text: str) -> StressConfig:
    """``key = value`` lines; ``#`` starts a comment.  ``size_range`` is
    written ``lo..hi``."""
    known = {f.name for f in fields(StressConfig)}
    kw: dict = {}
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        key, value = key.strip(), value.strip().strip('"')
        if not sep or key not in known:
            raise ValueError(f"bad config line {raw!r}")
        if key == "size_range":
            lo, dots, hi = value.partition("..")
            if not dots:
                raise ValueError("size_range must look like lo..hi")
            kw[key] = (int(lo), int(hi))
        elif key in ("include_corpus", "check_lemmas"):
            kw[key] = _parse_bool(value)
        elif key == "planted_fraction":
            kw[key] = float(value)
        else:
            kw[key] = int(value, 0)
    return StressConfig(**kw)


@dataclass(frozen=True)
class Job:
    idx: int
    name: str
    spec: GenSpec | None = None
    graph: BipartiteGraph | None = None


def plan_jobs(cfg: StressConfig) -> list[Job]:
    rng = SplitMix64(cfg.seed)
    lo, hi = cfg.size_range
    jobs = []
    for i in range(cfg.instance_count):
        n = lo + rng.below(hi - lo + 1)
        planted = rng.next_float() < cfg.planted_fraction
        dens = PLANTED_DENSITIES if planted else REJECTION_DENSITIES
        p = dens[rng.below(len(dens))]
        spec = GenSpec(n, p, rng.next_u64(), PLANTED if planted else REJECTION)
        jobs.append(Job(i, f"gen-{i}", spec=spec))
    if cfg.include_corpus:
        for e in corpus():
            jobs.append(Job(len(jobs), e.name, graph=e.graph))
    return jobs


@dataclass
class InstanceResult:
    idx: int
    name: str
    n: int = 0
    mode: str = "corpus"
    status: str = "ok"  # ok | gen-failed | out-of-class | oracle-budget | solver-budget
    oracle: str = "-"
    solver: str = "-"
    match: bool = True
    certified: bool = True
    lemma_checks: int = 0
    lemma_violations: list[str] = field(default_factory=list)
    solve_ms: float = 0.0

    def line(self) -> str:
        return (
            f"instance={self.idx} name={self.name} n={self.n} mode={self.mode} status={self.status} "
            f"oracle={self.oracle} solver={self.solver} match={str(self.match).lower()} "
            f"certified={str(self.certified).lower()} lemma_checks={self.lemma_checks} "
            f"lemma_violations={len(self.lemma_violations)} solve_ms={self.solve_ms:.3f}"
        )


def run_job(job: Job, cfg: StressConfig) -> InstanceResult:
    res = InstanceResult(job.idx, job.name)
    if job.spec is not None:
        res.mode = job.spec.mode
        try:
            g = gen_in_class(job.spec)
        except RetriesExhausted:
            res.status = "gen-failed"
            return res
    else:
        g = job.graph
    res.n = g.n
    if not classify(g).in_class:
        res.status = "out-of-class"
        return res
    try:
        sols = solve_exact(g, "all", budget=cfg.oracle_budget)
    except ResourceBudgetExceeded:
        res.status = "oracle-budget"
        return res
    res.oracle = "eds" if sols else "no-eds"
    t0 = time.perf_counter()
    try:
        out = solve(g, SolveOptions(branch_budget=cfg.solver_budget))
    except ResourceBudgetExceeded:
        res.status = "solver-budget"
        return res
    res.solve_ms = (time.perf_counter() - t0) * 1000.0
    res.solver = "eds" if out.found else "no-eds"
    res.match = res.solver == res.oracle
    if out.found:
        res.certified = verify_eds(g, out.result) is None
    if cfg.check_lemmas:
        for s in sols:
            for b in basis_candidates(g, s.d):
                rep = check_lemmas(g, s.d, b, budget=cfg.oracle_budget)
                res.lemma_checks += 1
                for e in rep.violations:
                    res.lemma_violations.append(f"{e.lemma_id}:{e.counterexample}")
    return res


def _run_one(args) -> InstanceResult:
    return run_job(*args)


@dataclass
class StressReport:
    results: list[InstanceResult]

    def count(self, status: str) -> int:
        return sum(1 for r in self.results if r.status == status)

    @property
    def compared(self) -> list[InstanceResult]:
        return [r for r in self.results if r.status == "ok"]

    @property
    def mismatches(self) -> int:
        return sum(1 for r in self.compared if not r.match)

    @property
    def uncertified(self) -> int:
        return sum(1 for r in self.compared if not r.certified)

    @property
    def lemma_violations(self) -> int:
        return sum(len(r.lemma_violations) for r in self.results)

    @property
    def clean(self) -> bool:
        return not (self.mismatches or self.uncertified or self.lemma_violations)

    def summary(self) -> dict[str, str]:
        times = [r.solve_ms for r in self.compared]
        out = {
            "instances": str(len(self.results)),
            "compared": str(len(self.compared)),
            "matches": str(len(self.compared) - self.mismatches),
            "mismatches": str(self.mismatches),
            "uncertified": str(self.uncertified),
            "eds_found": str(sum(1 for r in self.compared if r.oracle == "eds")),
            "out_of_class": str(self.count("out-of-class")),
            "gen_failed": str(self.count("gen-failed")),
            "oracle_budget_exceeded": str(self.count("oracle-budget")),
            "solver_budget_exceeded": str(self.count("solver-budget")),
            "lemma_checks": str(sum(r.lemma_checks for r in self.results)),
            "lemma_violations": str(self.lemma_violations),
        }
        for q in (50, 90, 99):
            out[f"solve_p{q}_ms"] = f"{_percentile(times, q):.3f}"
        out["result"] = "pass" if self.clean else "fail"
        return out

    def text(self) -> str:
        lines = [r.line() for r in sorted(self.results, key=lambda r: r.idx)]
        for r in self.results:
            for v in r.lemma_violations:
                lines.append(f"violation instance={r.idx} {v}")
        lines.append("[summary]")
        lines += [f"{k}={v}" for k, v in self.summary().items()]
        lines.append("[/summary]")
        return "\n".join(lines) + "\n"


def _percentile(xs: list[float], q: int) -> float:
    if not xs:
        return 0.0
    if len(xs) == 1:
        return xs[0]
    return statistics.quantiles(xs, n=100, method="inclusive")[q - 1]


def stress(cfg: StressConfig) -> StressReport:
    jobs = plan_jobs(cfg)
    if cfg.workers == 1:
        results = [run_job(j, cfg) for j in jobs]
    else:
        with ProcessPoolExecutor(max_workers=cfg.workers) as pool:
            results = list(pool.map(_run_one, [(j, cfg) for j in jobs], chunksize=16))
    results.sort(key=lambda r: r.idx)
    return StressReport(results)
