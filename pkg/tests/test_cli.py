"""
Tests for the netimmune command line.
"""

import pytest

from netimmune_core.cli import main
from netimmune_core.cli.cli import build_parser
from netimmune_core.lib.errors import ConvergenceError
from netimmune_core.lib.parser import load_graph_file


class TestGen:

    def test_writes_edge_list(self, tmp_path, capsys):
        out = tmp_path / "ba.edges"

        assert main(["gen", "--spec", "ba:30:2:seed=4", "--out", str(out)]) == 0
        assert load_graph_file(out).edge_count == 3 + 2 * 27
        assert out.read_text().startswith("# generated by netimmune gen --spec ba:30:2:seed=4\n")
        assert "57 edges" in capsys.readouterr().out

    def test_bad_spec(self, tmp_path):
        assert main(["gen", "--spec", "ws:10:2", "--out", str(tmp_path / "g.edges")]) == 1
        assert not (tmp_path / "g.edges").exists()


class TestSolve:

    def test_netshield(self, tmp_path):
        out = tmp_path / "out"
        assert main(["solve", "--graph", "barbell:6", "--method", "netshield", "--k", "2", "--out", str(out)]) == 0
        assert (out / "front.csv").exists()
        assert (out / "manifest.json").exists()

    def test_arguments_reach_config(self, tmp_path, mocker):
        run = mocker.patch("netimmune_core.cli.cli.run_experiment", return_value={"files": []})
        argv = [
            "solve", "--graph", "er:20:40", "--method", "sms_emoa",
            "--pop", "10", "--budget", "50", "--pm", "0.1", "--pc", "0.5",
            "--runs", "3", "--seed", "11", "--ref", "-0.5", "100",
            "--no-memo", "--stall-factor", "4", "--workers", "2", "--node-limit", "500", "--out", str(tmp_path),
        ]

        assert main(argv) == 0
        config = run.call_args.args[0]
        assert config.population_size == 10
        assert config.evaluation_budget == 50
        assert config.p_m == 0.1
        assert config.runs == 3
        assert config.reference_point == (-0.5, 100.0)
        assert not config.memoize
        assert config.stall_factor == 4
        assert config.workers == 2
        assert config.node_limit == 500
        assert config.ga_config(2).seed == 13

    def test_invalid_config(self, tmp_path):
        """A method without its parameters is a configuration error."""
        assert main(["solve", "--graph", "barbell:6", "--method", "netshield", "--out", str(tmp_path)]) == 1

    def test_missing_graph_file(self, tmp_path):
        argv = ["solve", "--graph", str(tmp_path / "none.edges"), "--method", "eps_qp", "--out", str(tmp_path)]
        assert main(argv) == 1

    def test_undecodable_graph_file(self, tmp_path):
        path = tmp_path / "latin1.edges"
        path.write_bytes(b"caf\xe9 b\nb c\n")
        argv = ["solve", "--graph", str(path), "--method", "eps_qp", "--out", str(tmp_path / "out")]
        assert main(argv) == 1

    def test_solver_failure(self, tmp_path, mocker):
        mocker.patch("netimmune_core.cli.cli.run_experiment", side_effect=ConvergenceError(10, 0.5))
        argv = ["solve", "--graph", "barbell:6", "--method", "eps_qp", "--out", str(tmp_path)]
        assert main(argv) == 1


class TestCompare:

    def test_merges(self, tmp_path):
        a = tmp_path / "a.csv"
        a.write_text("cost,delta_lambda,method,nodes\n1,1.0,a,\n")
        b = tmp_path / "b.csv"
        b.write_text("cost,delta_lambda,method,nodes\n3,2.0,b,\n")

        assert main(["compare", str(a), str(b), "--out", str(tmp_path / "cmp")]) == 0
        assert (tmp_path / "cmp" / "merged.csv").exists()
        assert (tmp_path / "cmp" / "hypervolume.csv").exists()

    def test_bad_schema(self, tmp_path):
        bad = tmp_path / "bad.csv"
        bad.write_text("x,y\n")
        assert main(["compare", str(bad), "--out", str(tmp_path / "cmp")]) == 1

    def test_undecodable_front_file(self, tmp_path):
        bad = tmp_path / "bad.csv"
        bad.write_bytes(b"cost,delta_lambda,method,nodes\n1,1.0,\xff\xfe,\n")
        assert main(["compare", str(bad), "--out", str(tmp_path / "cmp")]) == 1


def test_parser_requires_command():
    with pytest.raises(SystemExit):
        build_parser().parse_args([])
