import subprocess
import sys

import pytest

from edsbip.cli import main
from edsbip.corpus import corpus, corpus_by_name
from edsbip.generate import PLANTED, REJECTION, GenSpec, RetriesExhausted, gen_in_class, gen_planted
from edsbip.graph import cycle_graph, dumps, path_graph, write_graph
from edsbip.oracle import solve_exact, verify_eds
from edsbip.recognition import classify
from edsbip.rng import SplitMix64
from edsbip.stress import StressConfig, parse_config, stress


def test_splitmix_reference_values():
    r = SplitMix64(0)
    assert [r.next_u64() for _ in range(3)] == [0xE220A8397B1DCDAF, 0x6E789E6AA1B965F4, 0x06C45D188009454F]


def test_splitmix_derived_draws():
    r = SplitMix64(12345)
    xs = [r.next_float() for _ in range(1000)]
    assert all(0.0 <= x < 1.0 for x in xs)
    r = SplitMix64(3)
    assert all(0 <= r.below(7) < 7 for _ in range(500))
    with pytest.raises(ValueError):
        r.below(0)
    items = list(range(20))
    SplitMix64(9).shuffle(items)
    assert sorted(items) == list(range(20)) and items != list(range(20))
    again = list(range(20))
    SplitMix64(9).shuffle(again)
    assert again == items


@pytest.mark.parametrize("mode", [PLANTED, REJECTION])
def test_generator_is_deterministic(mode):
    spec = GenSpec(14, 0.3, 77, mode)
    assert dumps(gen_in_class(spec)) == dumps(gen_in_class(spec))
    assert classify(gen_in_class(spec)).in_class


def test_planted_d_is_an_eds():
    for seed in range(20):
        p = gen_planted(GenSpec(30, 0.5, seed))
        assert verify_eds(p.graph, p.d) is None
        assert classify(p.graph).in_class


def test_zero_density_gives_stars_only():
    p = gen_planted(GenSpec(20, 0.0, 5))
    # every edge touches a centre
    assert all(u in p.d or v in p.d for u, v in p.graph.edges())
    g = gen_in_class(GenSpec(10, 0.0, 5, REJECTION))
    assert g.edges() == []


def test_retries_exhausted():
    with pytest.raises(RetriesExhausted):
        gen_in_class(GenSpec(40, 0.15, 7, REJECTION, max_retries=3))


def test_genspec_validation():
    for kw in (dict(n=0), dict(edge_prob=1.5), dict(mode="x"), dict(max_retries=0)):
        args = dict(n=5, edge_prob=0.3, seed=1)
        args.update(kw)
        with pytest.raises(ValueError):
            GenSpec(**args)


def test_corpus():
    names = [e.name for e in corpus()]
    assert len(names) == len(set(names))
    by = corpus_by_name()
    for name in ("c4", "dstar-2-2", "k23", "s124", "p8+c4"):
        assert solve_exact(by[name].graph) == [], name
    for name in ("c6", "c8", "s125", "s333"):
        assert not classify(by[name].graph).in_class, name
    assert [s.d for s in solve_exact(by["p8-pendants"].graph)] == [{1, 6, 8, 9}]


def test_parse_config():
    cfg = parse_config("# a comment\ninstance_count = 12\nsize_range = 5..9\nseed = 0x10\ninclude_corpus = yes\n")
    assert cfg == StressConfig(instance_count=12, size_range=(5, 9), seed=16, include_corpus=True)
    for bad in ("nope = 1", "size_range = 4-9", "size_range = 4..40", "include_corpus = maybe"):
        with pytest.raises(ValueError):
            parse_config(bad)


def test_small_stress_run():
    rep = stress(StressConfig(instance_count=30, size_range=(4, 10), seed=3, include_corpus=True))
    assert rep.clean
    text = rep.text()
    assert "[summary]" in text and "result=pass" in text
    assert rep.count("out-of-class") == 4  # c6, c8, s125, s333


def test_stress_budget_status():
    rep = stress(StressConfig(instance_count=5, size_range=(8, 10), oracle_budget=1, check_lemmas=False))
    assert rep.count("oracle-budget") + rep.count("gen-failed") == 5
    assert rep.summary()["compared"] == "0"


def test_stress_workers_agree():
    cfg = dict(instance_count=24, size_range=(4, 9), seed=8, check_lemmas=False)
    a = stress(StressConfig(**cfg)).results
    b = stress(StressConfig(workers=2, **cfg)).results
    strip = lambda rs: [(r.idx, r.status, r.oracle, r.solver) for r in rs]
    assert strip(a) == strip(b)


def test_cli_exit_codes(tmp_path, capsys):
    p7 = tmp_path / "p7.g"
    write_graph(path_graph(7), p7)
    c4 = tmp_path / "c4.g"
    write_graph(cycle_graph(4), c4)
    c6 = tmp_path / "c6.g"
    write_graph(cycle_graph(6), c6)
    bad = tmp_path / "bad.g"
    bad.write_text("not a graph\n")

    assert main(["solve", str(p7)]) == 0
    assert capsys.readouterr().out == "eds 3 : 0 3 6\n"
    assert main(["solve", str(c4)]) == 1
    assert main(["solve", str(c6)]) == 2
    assert main(["solve", str(c6), "--force"]) == 0
    assert main(["recognize", str(c6)]) == 2
    assert main(["solve", str(bad)]) == 4
    assert main(["solve", str(tmp_path / "missing.g")]) == 4
    assert main(["oracle", str(path_graph_file(tmp_path))]) == 0
    assert main(["oracle", "--budget", "1", str(path_graph_file(tmp_path))]) == 3
    capsys.readouterr()
    assert main(["oracle", "--count", str(p7)]) == 0
    assert capsys.readouterr().out == "count 1\n"
    assert main(["gen", "--n", "40", "--seed", "7", "--mode", "rejection", "--edge-prob", "0.15",
                 "--max-retries", "3", "-o", "-"]) == 3


def path_graph_file(tmp_path):
    f = tmp_path / "p8.g"
    if not f.exists():
        write_graph(path_graph(8), f)
    return f


def test_cli_solve_trace_and_lemmas(tmp_path, capsys):
    g = tmp_path / "p7.g"
    write_graph(path_graph(7), g)
    tr = tmp_path / "trace.txt"
    assert main(["solve", str(g), "--trace", str(tr)]) == 0
    assert tr.read_text().splitlines()[-1].startswith("result ")
    eds = tmp_path / "d.txt"
    eds.write_text("eds 3 : 0 3 6\n")
    capsys.readouterr()
    assert main(["lemmas", str(g), str(eds)]) == 0
    assert capsys.readouterr().out.rstrip().endswith("violations=0")
    eds.write_text("eds 2 : 1 5\n")
    assert main(["lemmas", str(g), str(eds)]) == 4


def test_cli_entry_point(tmp_path):
    out = subprocess.run(
        [sys.executable, "-m", "edsbip.cli", "gen", "--n", "12", "--seed", "3", "-o", "-"],
        capture_output=True, text=True, check=True,
    )
    assert out.stdout.startswith("eds-graph 1")
