import json

import pytest

from tspkit.cli import run_cli
from tspkit.generators import random_connected_graph
from tspkit.io import format_edge_instance

TIMING_KEYS = ("stage_times",)


@pytest.fixture
def instance(tmp_path):
    path = tmp_path / "g.edges"
    path.write_text(format_edge_instance(random_connected_graph(9, 16, 5)))
    return path


def test_solve_writes_report(instance, tmp_path):
    out = tmp_path / "out.json"
    code = run_cli(["solve", "--algorithm", "sparsified-christofides", "--epsilon", "0.25",
                    "--seed", "7", "--input", str(instance), "--report", str(out),
                    "--emit-tour", "--emit-multigraph"])
    assert code == 0
    report = json.loads(out.read_text())
    assert report["algorithm"] == "sparsified-christofides" and report["seed"] == 7
    assert sorted(report["tour"]) == list(range(9))
    assert report["walk"][0] == report["walk"][-1]
    assert sum(k for _, k in report["multigraph"]) == len(report["walk"]) - 1


@pytest.mark.parametrize("algo", ["classic-christofides", "double-tree"])
def test_solve_baselines(instance, algo, capsys):
    assert run_cli(["solve", "--algorithm", algo, "--input", str(instance)]) == 0
    report = json.loads(capsys.readouterr().out)
    assert report["lp_objective"] is None and report["algorithm"] == algo


def test_disconnected_input_exits_one(tmp_path, capsys):
    path = tmp_path / "d.edges"
    path.write_text("p edge 4 2\ne 0 1 1\ne 2 3 1\n")
    assert run_cli(["solve", "--input", str(path)]) == 1
    err = capsys.readouterr().err
    assert "{0, 1}" in err and "{2, 3}" in err


def test_lp_subcommand_prints_three_values(instance, capsys):
    assert run_cli(["lp", "--epsilon", "0.1", "--input", str(instance)]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert [ln.split()[0] for ln in lines] == ["lp_objective", "lp_lower_bound", "gap"]
    assert float(lines[2].split()[1]) <= 0.1


def test_sparsify_and_tjoin_subcommands(instance, capsys):
    assert run_cli(["sparsify", "--input", str(instance), "--seed", "3"]) == 0
    data = json.loads(capsys.readouterr().out)
    assert data["support_size"] <= data["lp_support_size"]
    assert run_cli(["tjoin", "--input", str(instance), "--terminals", "0,1"]) == 0
    assert capsys.readouterr().out.startswith("cost ")
    assert run_cli(["tjoin", "--input", str(instance)]) == 0


@pytest.mark.parametrize("argv", [
    ["solve"],
    ["solve", "--input", "x", "--algorithm", "nope"],
    ["frobnicate"],
    ["solve", "--input", "x", "--epsilon", "abc"],
])
def test_usage_errors_exit_64(argv):
    assert run_cli(argv) == 64


def test_bad_epsilon_and_bad_file(instance, tmp_path):
    assert run_cli(["solve", "--input", str(instance), "--epsilon", "1.5"]) == 64
    bad = tmp_path / "bad.edges"
    bad.write_text("p edge 2 1\ne 0 0 1\n")
    assert run_cli(["solve", "--input", str(bad)]) == 64
    assert run_cli(["solve", "--input", str(tmp_path / "missing")]) == 64


def test_tjoin_odd_terminals_infeasible(instance):
    assert run_cli(["tjoin", "--input", str(instance), "--terminals", "0,1,2"]) == 1


def test_check_failure_exits_two(instance, monkeypatch):
    from tspkit import cli
    from tspkit.errors import CheckFailure

    def boom(*a, **k):
        raise CheckFailure("forced")

    monkeypatch.setattr(cli, "run_algorithm", boom)
    assert run_cli(["solve", "--input", str(instance)]) == 2


def test_env_seed(instance, monkeypatch, capsys):
    monkeypatch.setenv("TSPKIT_SEED", "99")
    assert run_cli(["solve", "--input", str(instance)]) == 0
    assert json.loads(capsys.readouterr().out)["seed"] == 99
    monkeypatch.setenv("TSPKIT_SEED", "x")
    assert run_cli(["solve", "--input", str(instance)]) == 64


def strip_timing(text):
    data = json.loads(text)
    for k in TIMING_KEYS:
        data.pop(k)
    return json.dumps(data, sort_keys=True)


def test_reports_are_reproducible(instance, tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    for out in (a, b):
        assert run_cli(["solve", "--seed", "11", "--input", str(instance), "--report", str(out),
                        "--emit-tour"]) == 0
    assert strip_timing(a.read_text()) == strip_timing(b.read_text())


def test_bench_random(tmp_path, capsys):
    code = run_cli(["bench", "--random", "3", "--n", "8", "--m", "14", "--oracle",
                    "--workers", "2", "--report-dir", str(tmp_path / "r")])
    assert code == 0
    out = capsys.readouterr().out
    assert out.count("random-") == 9
    assert len(list((tmp_path / "r").glob("*.json"))) == 9
    assert len(list((tmp_path / "r").glob("*.edges"))) == 3


def test_bench_directory(tmp_path, capsys):
    d = tmp_path / "inst"
    d.mkdir()
    for i in range(2):
        (d / f"g{i}.edges").write_text(format_edge_instance(random_connected_graph(6, 9, i)))
    assert run_cli(["bench", "--instances", str(d), "--algorithm", "double-tree"]) == 0
    assert capsys.readouterr().out.count("double-tree") == 2
