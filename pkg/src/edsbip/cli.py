"""``eds`` command line.

Exit codes: 0 ok / e.d.s. found, 1 no e.d.s. (or a failed check),
2 not in class, 3 a budget was exhausted, 4 I/O or format error.
"""
from __future__ import annotations

import argparse
import sys

from .generate import GenSpec, RetriesExhausted, gen_in_class
from .graph import GraphError, dumps, read_graph, write_graph
from .lemmas import NotAnEds, basis_candidates, check_lemmas
from .oracle import DEFAULT_BUDGET, ResourceBudgetExceeded, count_exact, format_eds, format_solutions, parse_eds, solve_exact
from .recognition import classify
from .solver import NotInClass, SolveOptions, solve
from .stress import parse_config, stress

OK, NO_EDS, NOT_IN_CLASS, BUDGET, IO_ERROR = 0, 1, 2, 3, 4


def _cmd_recognize(args) -> int:
    rep = classify(read_graph(args.file))
    print("\n".join(rep.lines()))
    return OK if rep.in_class else NOT_IN_CLASS


def _cmd_solve(args) -> int:
    g = read_graph(args.file)
    try:
        out = solve(g, SolveOptions(force=args.force, branch_budget=args.budget))
    except NotInClass as exc:
        print("\n".join(exc.report.lines()), file=sys.stderr)
        return NOT_IN_CLASS
    if args.trace:
        with open(args.trace, "w") as fh:
            fh.write(out.trace_text())
    if out.found:
        print(format_eds(out.result))
        return OK
    print("no-eds")
    return NO_EDS


def _cmd_oracle(args) -> int:
    g = read_graph(args.file)
    if args.count:
        k = count_exact(g, budget=args.budget)
        print(f"count {k}")
        return OK if k else NO_EDS
    sols = solve_exact(g, "all" if args.all else "first", budget=args.budget)
    sys.stdout.write(format_solutions(sols))
    return OK if sols else NO_EDS


def _cmd_gen(args) -> int:
    spec = GenSpec(args.n, args.edge_prob, args.seed, args.mode, max_retries=args.max_retries)
    g = gen_in_class(spec)
    if args.output == "-":
        sys.stdout.write(dumps(g))
    else:
        write_graph(g, args.output)
    return OK


def _cmd_stress(args) -> int:
    with open(args.config) as fh:
        cfg = parse_config(fh.read())
    rep = stress(cfg)
    text = rep.text()
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text)
    sys.stdout.write(text)
    return OK if rep.clean else NO_EDS


def _cmd_lemmas(args) -> int:
    g = read_graph(args.graph)
    with open(args.eds) as fh:
        sets = parse_eds(fh.read())
    if len(sets) != 1:
        raise ValueError("the e.d.s. file must hold exactly one 'eds' line")
    d = sets[0]
    if args.basis is not None:
        bases = [frozenset(int(t) for t in args.basis.split(",") if t)]
    else:
        bases = basis_candidates(g, d)
    bad = 0
    for b in bases:
        rep = check_lemmas(g, d, b)
        print(f"basis {','.join(map(str, sorted(b))) or '-'}")
        for line in rep.lines():
            print(f"  {line}")
        bad += len(rep.violations)
    print(f"violations={bad}")
    return OK if not bad else NO_EDS


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="eds", description="Efficient dominating sets in bipartite graphs.")
    sub = p.add_subparsers(dest="cmd", required=True)

    s = sub.add_parser("recognize", help="check class membership")
    s.add_argument("file")
    s.set_defaults(fn=_cmd_recognize)

    s = sub.add_parser("solve", help="decide e.d.s. with the structured solver")
    s.add_argument("file")
    s.add_argument("--force", action="store_true", help="run even when the graph is out of class")
    s.add_argument("--trace", metavar="OUT", help="write the reduction trace here")
    s.add_argument("--budget", type=int, default=SolveOptions.branch_budget, help="branch limit")
    s.set_defaults(fn=_cmd_solve)

    s = sub.add_parser("oracle", help="exact-cover search")
    s.add_argument("file")
    g = s.add_mutually_exclusive_group()
    g.add_argument("--all", action="store_true")
    g.add_argument("--count", action="store_true")
    s.add_argument("--budget", type=int, default=DEFAULT_BUDGET, help="search node limit")
    s.set_defaults(fn=_cmd_oracle)

    s = sub.add_parser("gen", help="generate an in-class instance")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--seed", type=lambda t: int(t, 0), required=True)
    s.add_argument("--mode", choices=("planted", "rejection"), default="planted")
    s.add_argument("--edge-prob", type=float, default=0.3)
    s.add_argument("--max-retries", type=int, default=200)
    s.add_argument("-o", "--output", required=True, help="output file, or - for stdout")
    s.set_defaults(fn=_cmd_gen)

    s = sub.add_parser("stress", help="oracle-vs-solver cross-check")
    s.add_argument("--config", required=True)
    s.add_argument("-o", "--output")
    s.set_defaults(fn=_cmd_stress)

    s = sub.add_parser("lemmas", help="run the structural checks on a graph and e.d.s.")
    s.add_argument("graph")
    s.add_argument("eds")
    s.add_argument("--basis", help="comma-separated seed; default: every standard seed")
    s.set_defaults(fn=_cmd_lemmas)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except ResourceBudgetExceeded as exc:
        print(f"budget-exceeded {exc.nodes}")
        return BUDGET
    except RetriesExhausted as exc:
        print(f"error: {exc}", file=sys.stderr)
        return BUDGET
    except (OSError, GraphError, NotAnEds, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return IO_ERROR


if __name__ == "__main__":
    sys.exit(main())
