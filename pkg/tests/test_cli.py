import csv
import json

import pytest

from hermclust.main import cli
from hermclust.schemas.reports import RUNTIME_COLUMNS


def generate(runner, tmp_path, *extra, name="g"):
    out = tmp_path / f"{name}.edges"
    args = ["generate", "dsbm2", "--out", str(out), *extra]
    result = runner.invoke(cli, args)
    assert result.exit_code == 0, result.output
    return out, out.with_suffix(".labels"), result


def data_lines(path):
    return [line for line in path.read_text(encoding="utf-8").splitlines() if line and not line.startswith("#")]


class TestGenerate:
    def test_complete_graph(self, runner, tmp_path):
        out, labels, result = generate(runner, tmp_path, "--n1", "4", "--n2", "4", "--p", "1", "--q", "1", "--eta", "0", "--seed", "7")
        assert "N=8 |E|=28" in result.output
        assert len(data_lines(out)) == 28
        assert out.read_text(encoding="utf-8").startswith("# hermclust edge list n=8 edges=28")
        assert data_lines(labels) == ["0"] * 4 + ["1"] * 4

    def test_empty_graph(self, runner, tmp_path):
        out, _, _ = generate(runner, tmp_path, "--n1", "5", "--n2", "5", "--p", "0", "--q", "0", "--eta", "0.2")
        assert data_lines(out) == []

    def test_same_seed_same_bytes(self, runner, tmp_path):
        args = ["--n1", "30", "--n2", "30", "--p", "0.2", "--q", "0.1", "--eta", "0.1", "--seed", "11"]
        a, _, _ = generate(runner, tmp_path, *args, name="a")
        b, _, _ = generate(runner, tmp_path, *args, name="b")
        assert a.read_bytes() == b.read_bytes()

    def test_meta(self, runner, tmp_path):
        out = tmp_path / "m.edges"
        result = runner.invoke(cli, [
            "generate", "meta", "--sizes", "10,10,10", "--meta", "path3",
            "--p", "0.3", "--q", "0.3", "--eta", "0.1", "--out", str(out),
        ])
        assert result.exit_code == 0, result.output
        assert "N=30" in result.output

    @pytest.mark.parametrize("bad", [["--eta", "0.7"], ["--p", "1.5"]])
    def test_bad_params(self, runner, tmp_path, bad):
        args = {"--n1": "5", "--n2": "5", "--p": "0.1", "--q": "0.1", "--eta": "0.1"}
        args.update(dict([bad]))
        flat = [x for kv in args.items() for x in kv]
        result = runner.invoke(cli, ["generate", "dsbm2", "--out", str(tmp_path / "x.edges"), *flat])
        assert result.exit_code == 2
        assert "BadParams" in result.output


class TestCluster:
    @pytest.fixture
    def dsbm(self, runner, tmp_path):
        out, labels, _ = generate(runner, tmp_path, "--n1", "100", "--n2", "100", "--p", "0.15", "--q", "0.15", "--eta", "0.05", "--seed", "3")
        return out, labels

    def test_lesc_report(self, runner, tmp_path, dsbm):
        graph, truth = dsbm
        labels_out, trace_out = tmp_path / "pred.labels", tmp_path / "trace.csv"
        result = runner.invoke(cli, [
            "cluster", str(graph), "--init", "flow-matrix", "--truth", str(truth),
            "--labels-out", str(labels_out), "--trace", str(trace_out),
        ])
        assert result.exit_code == 0, result.output
        report = json.loads(labels_out.with_suffix(".report.json").read_text(encoding="utf-8"))
        assert report["method"] == "lesc"
        assert report["n"] == 200
        assert report["ari"] >= 0.9
        assert set(report["final_params"]) == {"p", "q", "eta"}
        assert len(data_lines(labels_out)) == 200
        assert len(trace_out.read_text(encoding="utf-8").splitlines()) == report["iterations"] + 1

    def test_default_init(self, runner, tmp_path, dsbm):
        graph, truth = dsbm
        report = tmp_path / "r.json"
        result = runner.invoke(cli, [
            "cluster", str(graph), "--truth", str(truth), "--labels-out", str(tmp_path / "d.labels"), "--report", str(report),
        ])
        assert result.exit_code == 0, result.output
        data = json.loads(report.read_text(encoding="utf-8"))
        assert data["init"] == "flow-matrix"
        assert data["ari"] >= 0.9

    def test_oracle_needs_parameters(self, runner, dsbm):
        graph, _ = dsbm
        result = runner.invoke(cli, ["cluster", str(graph), "--method", "lesc-oracle"])
        assert result.exit_code == 2

    def test_oracle(self, runner, tmp_path, dsbm):
        graph, truth = dsbm
        report = tmp_path / "r.json"
        result = runner.invoke(cli, [
            "cluster", str(graph), "--method", "lesc-oracle", "--p", "0.15", "--q", "0.15", "--eta", "0.05",
            "--truth", str(truth), "--labels-out", str(tmp_path / "o.labels"), "--report", str(report),
        ])
        assert result.exit_code == 0, result.output
        assert json.loads(report.read_text(encoding="utf-8"))["iterations"] == 1

    def test_unimplemented_baseline(self, runner, dsbm):
        graph, _ = dsbm
        result = runner.invoke(cli, ["cluster", str(graph), "--method", "dscore"])
        assert result.exit_code == 4
        assert "dscore" in result.output

    def test_normalized_weighted_sym(self, runner, tmp_path):
        graph = tmp_path / "w.edges"
        lines = [f"{u} {v} 2.5" for u in range(6) for v in range(6) if u < v and (u < 3) == (v < 3)]
        lines.append("2 3 0.5")
        graph.write_text("\n".join(lines) + "\n", encoding="utf-8")
        labels_out = tmp_path / "w.labels"
        result = runner.invoke(cli, ["cluster", str(graph), "--method", "sym", "--normalize", "--labels-out", str(labels_out)])
        assert result.exit_code == 0, result.output
        report = json.loads(labels_out.with_suffix(".report.json").read_text(encoding="utf-8"))
        assert report["normalized"] is True
        assert report["iterations"] == 0

    def test_bad_init(self, runner, dsbm):
        graph, _ = dsbm
        result = runner.invoke(cli, ["cluster", str(graph), "--init", "bogus"])
        assert result.exit_code == 2
        assert "invalid input" in result.output

    def test_missing_file(self, runner, tmp_path):
        result = runner.invoke(cli, ["cluster", str(tmp_path / "nope.edges")])
        assert result.exit_code == 3

    def test_malformed_file(self, runner, tmp_path):
        graph = tmp_path / "bad.edges"
        graph.write_text("0 1\n1 2 3 4\n", encoding="utf-8")
        result = runner.invoke(cli, ["cluster", str(graph)])
        assert result.exit_code == 3


class TestTheory:
    def test_single_point(self, runner, tmp_path):
        out = tmp_path / "t.csv"
        result = runner.invoke(cli, ["theory", "--points", "1", "--eta-min", "0.1", "--eta-max", "0.1", "--out", str(out)])
        assert result.exit_code == 0, result.output
        assert "rows=1" in result.output
        assert len(out.read_text(encoding="utf-8").splitlines()) == 2

    def test_curve(self, runner, tmp_path):
        out = tmp_path / "t.csv"
        result = runner.invoke(cli, ["theory", "--points", "11", "--out", str(out)])
        assert result.exit_code == 0, result.output
        with out.open(encoding="utf-8", newline="") as fh:
            rows = list(csv.DictReader(fh))
        assert len(rows) == 11
        l_values = [float(r["l_eta"]) for r in rows]
        assert l_values[-1] == 0.0
        assert all(a > b for a, b in zip(l_values, l_values[1:]))
        assert float(rows[-1]["error_bound"]) == float("inf")

    def test_bad_grid(self, runner, tmp_path):
        result = runner.invoke(cli, ["theory", "--eta-max", "0.7", "--out", str(tmp_path / "t.csv")])
        assert result.exit_code == 2


class TestEvaluate:
    def test_scores(self, runner, tmp_path):
        truth, pred, out = tmp_path / "t.labels", tmp_path / "p.labels", tmp_path / "s.json"
        truth.write_text("0\n0\n1\n1\n", encoding="utf-8")
        pred.write_text("1\n1\n0\n1\n", encoding="utf-8")
        result = runner.invoke(cli, ["evaluate", str(truth), str(pred), "--json", str(out)])
        assert result.exit_code == 0, result.output
        assert "n=4" in result.output
        assert "error=1" in result.output
        assert json.loads(out.read_text(encoding="utf-8"))["error_rate"] == pytest.approx(0.25)

    def test_length_mismatch(self, runner, tmp_path):
        truth, pred = tmp_path / "t.labels", tmp_path / "p.labels"
        truth.write_text("0\n1\n", encoding="utf-8")
        pred.write_text("0\n1\n1\n", encoding="utf-8")
        assert runner.invoke(cli, ["evaluate", str(truth), str(pred)]).exit_code == 2


class TestBenchmark:
    def config(self, tmp_path, **overrides):
        cfg = {"sizes": [30, 30], "p_grid": [0.2], "q_grid": [0.2], "eta_grid": [0.05], "methods": ["herm"], "replicates": 1, "base_seed": 4}
        cfg.update(overrides)
        path = tmp_path / "bench.json"
        path.write_text(json.dumps(cfg), encoding="utf-8")
        return path

    def run(self, runner, config, output):
        return runner.invoke(cli, ["benchmark", str(config), "--output", str(output), "--backend", "local", "--workers", "1", "--no-progress"])

    def test_single_cell(self, runner, tmp_path):
        output = tmp_path / "res.csv"
        result = self.run(runner, self.config(tmp_path), output)
        assert result.exit_code == 0, result.output
        assert "cells=1 failed=0" in result.output
        assert len(output.read_text(encoding="utf-8").splitlines()) == 2
        assert (tmp_path / "res-aggregate.csv").exists()
        assert json.loads((tmp_path / "res-summary.json").read_text(encoding="utf-8"))["cells"] == 1

    def test_rerun_identical(self, runner, tmp_path):
        config = self.config(tmp_path, methods=["lesc", "herm"], eta_grid=[0.05, 0.3])

        def rows(name):
            output = tmp_path / name
            assert self.run(runner, config, output).exit_code == 0
            with output.open(encoding="utf-8", newline="") as fh:
                return [{k: v for k, v in r.items() if k not in RUNTIME_COLUMNS} for r in csv.DictReader(fh)]

        assert rows("a.csv") == rows("b.csv")

    def test_unimplemented_method(self, runner, tmp_path):
        result = self.run(runner, self.config(tmp_path, methods=["disim"]), tmp_path / "x.csv")
        assert result.exit_code == 4

    def test_invalid_config(self, runner, tmp_path):
        result = self.run(runner, self.config(tmp_path, eta_grid=[0.9]), tmp_path / "x.csv")
        assert result.exit_code == 2

    def test_missing_config(self, runner, tmp_path):
        result = self.run(runner, tmp_path / "missing.json", tmp_path / "x.csv")
        assert result.exit_code == 3
