"""
Command line: payloads on stdout, exit codes 0/1/2
"""
import json

from brouwerlab.cli import main


def _json(result):
    return json.loads(result.stdout)


def test_check_triangle(runner, write_graph):
    path = write_graph({"n": 3, "edges": [[0, 1, 1], [1, 2, 1], [0, 2, 1]]})
    result = runner.invoke(main, ["check", str(path)])
    assert result.exit_code == 0
    report = _json(result)
    assert report["holds"] is True
    assert report["equality_k"] == [2]


def test_check_empty_graph(runner, write_graph):
    result = runner.invoke(main, ["check", str(write_graph({"n": 4, "edges": []}))])
    assert result.exit_code == 0


def test_check_violation_exits_one(runner, write_graph):
    result = runner.invoke(main, ["check", str(write_graph({"n": 2, "edges": [[0, 1, 10.0]]}))])
    assert result.exit_code == 1
    assert _json(result)["violating_k"] == [1, 2]


def test_check_malformed_json(runner, write_graph):
    result = runner.invoke(main, ["check", str(write_graph("{not json"))])
    assert result.exit_code == 2
    assert result.stdout == ""
    assert "GRAPH_PARSE_ERROR" in result.stderr


def test_check_bad_edge(runner, write_graph):
    result = runner.invoke(main, ["check", str(write_graph({"n": 2, "edges": [[0, 5, 1.0]]}))])
    assert result.exit_code == 2
    assert "VERTEX_OUT_OF_RANGE" in result.stderr


def test_sample(runner, tmp_path):
    out = tmp_path / "trials.jsonl"
    args = ["sample", "--family", "bernoulli", "--p", "0.5", "--n", "20", "--trials", "10", "--seed", "7", "--out", str(out)]
    result = runner.invoke(main, args)
    assert result.exit_code == 0
    summary = _json(result)
    assert summary["violations"] == 0
    assert summary["trials"] == 10
    assert summary["metadata"]["cli"]["params"]["seed"] == 7
    assert len(out.read_text().splitlines()) == 10


def test_sample_is_reproducible_across_workers(runner, tmp_path):
    base = ["sample", "--family", "bernoulli", "--p", "0.5", "--n", "10", "--trials", "12", "--seed", "3"]
    first = runner.invoke(main, base + ["--out", str(tmp_path / "a.jsonl")])
    second = runner.invoke(main, ["--workers", "2"] + base + ["--out", str(tmp_path / "b.jsonl")])
    assert first.exit_code == second.exit_code == 0
    assert (tmp_path / "a.jsonl").read_bytes() == (tmp_path / "b.jsonl").read_bytes()
    a, b = _json(first), _json(second)
    a["metadata"].pop("cli")
    b["metadata"].pop("cli")
    assert a == b


def test_sample_usage_errors(runner):
    zero = runner.invoke(main, ["sample", "--family", "bernoulli", "--p", "0.5", "--n", "10", "--trials", "0"])
    assert zero.exit_code == 2
    bad = runner.invoke(main, ["sample", "--family", "bernoulli", "--p", "1.5", "--n", "10"])
    assert bad.exit_code == 2
    assert "INVALID_PARAMETER" in bad.stderr


def test_sample_writes_summary(runner, tmp_path):
    path = tmp_path / "summary.json"
    args = ["sample", "--family", "bernoulli", "--p", "1.0", "--n", "5", "--trials", "3", "--summary", str(path)]
    result = runner.invoke(main, args)
    assert result.exit_code == 0
    assert json.loads(path.read_text())["trials"] == 3


def test_enumerate(runner):
    result = runner.invoke(main, ["enumerate", "--n", "4"])
    assert result.exit_code == 0
    data = _json(result)
    assert (data["total"], data["violations"], data["complete"]) == (64, 0, True)


def test_enumerate_above_cap(runner):
    result = runner.invoke(main, ["enumerate", "--n", "8"])
    assert result.exit_code == 2
    assert "ENUMERATION_CAP_EXCEEDED" in result.stderr


def test_enumerate_resume(runner, tmp_path):
    checkpoint = str(tmp_path / "enum.json")
    partial = runner.invoke(main, ["enumerate", "--n", "5", "--checkpoint", checkpoint, "--max-masks", "500"])
    assert partial.exit_code == 0
    assert _json(partial)["complete"] is False
    resumed = runner.invoke(main, ["enumerate", "--n", "5", "--checkpoint", checkpoint, "--resume"])
    assert resumed.exit_code == 0
    data = _json(resumed)
    assert (data["total"], data["checked"], data["violations"]) == (1024, 1024, 0)
    assert runner.invoke(main, ["enumerate", "--n", "5", "--resume"]).exit_code == 2


def test_concentration_csv(runner, tmp_path):
    csv_path = tmp_path / "table.csv"
    args = ["concentration", "--family", "bernoulli", "--p", "1.0", "--n-grid", "4,6", "--trials-per-n", "2", "--csv", str(csv_path)]
    result = runner.invoke(main, args)
    assert result.exit_code == 0
    assert [row["n"] for row in _json(result)["rows"]] == [4, 6]
    assert csv_path.read_text().splitlines()[0].startswith("n,q25_ratio1,median_ratio1")


def test_concentration_bad_grid(runner):
    args = ["concentration", "--family", "bernoulli", "--p", "0.5", "--n-grid", "ten,20"]
    assert runner.invoke(main, args).exit_code == 2


def test_bounds(runner):
    result = runner.invoke(main, ["bounds", "--gamma", "0.5", "--mu", "0.5", "--n", "2", "--b", "1"])
    assert result.exit_code == 0
    data = _json(result)
    assert abs(data["lemma3"]["delta"] - 0.125) < 1e-12
    assert abs(data["discriminant"]["value"] + 0.3497) < 1e-3
    assert data["lemma3"]["n0"] == 2
    assert data["theorem_status"] == "valid"


def test_bounds_errors_and_small_n(runner):
    assert runner.invoke(main, ["bounds", "--gamma", "1.5", "--mu", "0.5", "--n", "2"]).exit_code == 2
    small = runner.invoke(main, ["bounds", "--gamma", "0.5", "--mu", "0.5", "--n", "1"])
    assert small.exit_code == 0
    data = _json(small)
    assert data["discriminant"]["value"] > 0
    assert data["theorem_status"] == "not yet valid"


def test_tail(runner):
    args = ["tail", "--family", "bernoulli", "--p", "0.5", "--n", "40", "--delta", "0.2", "--trials", "500", "--seed", "1"]
    result = runner.invoke(main, args)
    assert result.exit_code == 0
    assert _json(result)["within_slack"] is True


def test_chain(runner):
    args = ["chain", "--family", "bernoulli", "--p", "0.5", "--n", "20", "--gamma", "0.5", "--trials", "10"]
    result = runner.invoke(main, args)
    assert result.exit_code == 0
    data = _json(result)
    assert data["chain_valid"] is True
    assert data["implication_failures"] == 0


def test_named_feeds_check(runner, tmp_path):
    result = runner.invoke(main, ["named", "complete", "3"])
    assert result.exit_code == 0
    assert _json(result) == {"n": 3, "edges": [[0, 1, 1.0], [0, 2, 1.0], [1, 2, 1.0]]}
    path = tmp_path / "k4.json"
    assert runner.invoke(main, ["named", "complete", "4", "--out", str(path)]).exit_code == 0
    assert runner.invoke(main, ["check", str(path)]).exit_code == 0
    assert runner.invoke(main, ["named", "cycle", "2"]).exit_code == 2


def test_config_file_and_show(runner, tmp_path):
    path = tmp_path / "lab.yaml"
    path.write_text("experiments:\n  master_seed: 5\n", encoding="utf-8")
    result = runner.invoke(main, ["--config", str(path), "--log-level", "ERROR", "config"])
    assert result.exit_code == 0
    data = _json(result)
    assert data["experiments"]["master_seed"] == 5
    assert data["logging"]["level"] == "ERROR"


def test_bad_config_file(runner, tmp_path):
    path = tmp_path / "bad.yaml"
    path.write_text("tolerances:\n  check_scale: -1\n", encoding="utf-8")
    result = runner.invoke(main, ["--config", str(path), "config"])
    assert result.exit_code == 2
    assert "CONFIGURATION_ERROR" in result.stderr
