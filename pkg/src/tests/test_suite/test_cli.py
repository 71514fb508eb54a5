"""
Command-line tests driven through click's CliRunner. They cover every subcommand,
flag placement before and after the subcommand, the text and JSON output
formats, and the exit codes of `dispatch`.
"""

import orjson
import pytest
from click.testing import CliRunner

from rainbow_spectral.cli import EXIT_COUNTEREXAMPLE, EXIT_ERROR, EXIT_OK, cli, dispatch
from rainbow_spectral.schemas import Certificate


@pytest.fixture()
def runner() -> CliRunner:
    return CliRunner()


def certificates(text: str) -> list[Certificate]:
    return [Certificate.from_json_line(line) for line in text.splitlines() if line.strip()]


def test_construct_emits_graph6(runner):
    result = runner.invoke(cli, ["construct", "--n", "6", "--m", "2", "--i", "1"])
    assert result.exit_code == 0
    assert result.output == "E~{?\n"


def test_construct_edge_list(runner):
    result = runner.invoke(cli, ["construct", "--n", "4", "--m", "1", "--i", "2", "--format", "edges"])
    assert result.exit_code == 0
    assert result.output == "n 4\n1 2\n1 3\n1 4\n"


def test_construct_rejects_bad_parameters(runner):
    result = runner.invoke(cli, ["construct", "--n", "5", "--m", "2", "--i", "1"])
    assert result.exit_code == 1
    assert "m <=" in result.output


def test_rho_on_k4(runner):
    result = runner.invoke(cli, ["rho"], input="C~\n")
    assert result.exit_code == 0
    rho, residual, iterations = result.output.split()
    assert abs(float(rho) - 3.0) <= 1e-10
    assert float(residual) <= 1e-10 * 3.0
    assert int(iterations) >= 1


def test_rho_json_output_on_edge_list(runner):
    result = runner.invoke(cli, ["--output", "json", "rho"], input="n 3\n1 2\n2 3\n")
    payload = orjson.loads(result.output)
    assert abs(payload["rho"] - 2**0.5) <= 1e-9
    assert payload["residual"] <= 1e-9


def test_rho_reads_a_file(runner, tmp_path):
    source = tmp_path / "graphs.g6"
    source.write_text("C~\nBw\n")
    result = runner.invoke(cli, ["rho", str(source)])
    assert [round(float(line.split()[0]), 9) for line in result.output.splitlines()] == [3.0, 2.0]


def test_rho_tolerance_flag(runner):
    result = runner.invoke(cli, ["--tol", "1e-4", "--output", "json", "rho"], input="C~\n")
    assert result.exit_code == 0
    result = runner.invoke(cli, ["--tol", "0", "rho"], input="C~\n")
    assert result.exit_code != 0


def test_rho_tolerance_after_the_subcommand(runner):
    result = runner.invoke(cli, ["--output", "json", "rho", "--tol", "1e-6"], input="C~\n")
    assert result.exit_code == 0
    payload = orjson.loads(result.output)
    assert abs(payload["rho"] - 3.0) <= 1e-5
    assert payload["residual"] <= 1e-6 * 3.0
    assert runner.invoke(cli, ["rho", "--tol", "-1"], input="C~\n").exit_code == EXIT_ERROR


def test_malformed_input_is_an_error(runner):
    result = runner.invoke(cli, ["rho"], input="~~~\n")
    assert result.exit_code == 1
    assert "graph6" in result.output


def test_shift_single_pair(runner):
    result = runner.invoke(cli, ["shift", "--x", "1", "--y", "4", "--format", "edges"], input="n 4\n1 2\n2 3\n3 4\n")
    assert result.exit_code == 0
    assert result.output == "n 4\n1 2\n1 3\n2 3\n"


def test_shift_full_with_trace(runner):
    result = runner.invoke(cli, ["shift", "--full", "--trace", "--format", "edges"], input="n 3\n2 3\n")
    assert result.exit_code == 0
    assert "n 3\n1 2\n" in result.output
    steps = [orjson.loads(line) for line in result.output.splitlines() if line.startswith("{")]
    assert steps
    assert all(set(step) == {"x", "y", "edges_moved"} for step in steps)
    assert all(step["edges_moved"] >= 1 for step in steps)


def test_shift_needs_a_mode(runner):
    assert runner.invoke(cli, ["shift"], input="C~\n").exit_code != 0
    assert runner.invoke(cli, ["shift", "--full", "--x", "1", "--y", "2"], input="C~\n").exit_code != 0


def test_nu(runner):
    result = runner.invoke(cli, ["nu"], input="C~\nBw\n")
    assert result.output.split() == ["2", "1"]


def test_rainbow_inline_family(runner):
    result = runner.invoke(cli, ["--output", "json", "rainbow", "Cw", "C~"])
    assert result.exit_code == 0
    picks = orjson.loads(result.output)["rainbow"]
    assert [idx for idx, _ in picks] == [1, 2]


def test_rainbow_none_for_equal_triangles(runner, tmp_path):
    member = tmp_path / "triangle.txt"
    member.write_text("n 4\n1 2\n1 3\n2 3\n")
    result = runner.invoke(cli, ["rainbow", "--family", str(member), str(member)])
    assert result.exit_code == 0
    assert result.output.strip() == "NONE"


def test_rainbow_family_files_print_one_pick_per_line(runner, tmp_path):
    first = tmp_path / "f1.txt"
    first.write_text("n 10\n1 10\n")
    second = tmp_path / "f2.txt"
    second.write_text("n 10\n2 3\n")
    result = runner.invoke(cli, ["rainbow", "--family", str(first), str(second)])
    assert result.exit_code == 0
    assert result.output.splitlines() == ["1: 1 10", "2: 2 3"]
    repeated = runner.invoke(cli, ["rainbow", "--family", str(first), "--family", str(second)])
    assert repeated.output == result.output


def test_rainbow_missing_family_file(runner, tmp_path):
    result = runner.invoke(cli, ["rainbow", "--family", str(tmp_path / "absent.g6")])
    assert result.exit_code == EXIT_ERROR
    assert "Cannot read" in result.output


def test_verify_t13_exceptions(runner):
    result = runner.invoke(cli, ["verify", "t13", "--n", "4", "--m", "1", "--exhaustive"])
    assert result.exit_code == 0
    certs = certificates(result.output)
    assert len(certs) == 5
    assert certs[-1].is_summary


def test_verify_t12_counterexample_exit_code(runner):
    result = runner.invoke(cli, ["verify", "t12", "--n", "4", "--m", "1", "--margin", "0.5"])
    assert result.exit_code == EXIT_COUNTEREXAMPLE
    assert any(c.outcome == "COUNTEREXAMPLE" for c in certificates(result.output))


def test_verify_is_deterministic(runner):
    args = ["--seed", "42", "verify", "t13", "--n", "7", "--m", "2", "--sample", "40"]
    first = runner.invoke(cli, args)
    second = runner.invoke(cli, args)
    assert first.exit_code == 0
    assert first.output == second.output


def test_verify_budget_rejection(runner):
    result = runner.invoke(cli, ["--budget", "100", "verify", "t12", "--n", "5", "--m", "1"])
    assert result.exit_code == 1
    assert "budget" in result.output


def test_verify_budget_after_the_subcommand(runner):
    result = runner.invoke(cli, ["verify", "t12", "--n", "5", "--m", "1", "--budget", "100"])
    assert result.exit_code == EXIT_ERROR
    assert "budget" in result.output


def test_verify_seed_after_the_subcommand(runner):
    sweep = ["verify", "t13", "--n", "7", "--m", "2", "--sample", "20"]
    trailing = runner.invoke(cli, [*sweep, "--seed", "42"])
    leading = runner.invoke(cli, ["--seed", "42", *sweep])
    other = runner.invoke(cli, [*sweep, "--seed", "43"])
    assert trailing.exit_code == 0
    assert trailing.output == leading.output
    assert certificates(trailing.output)[-1].params.seed == 42
    assert certificates(other.output)[-1].params.seed == 43


def test_verify_replay_round_trip(runner, tmp_path):
    stream = runner.invoke(cli, ["verify", "t12", "--n", "4", "--m", "1", "--margin", "0.5"]).output
    path = tmp_path / "certs.jsonl"
    path.write_text(stream)
    result = runner.invoke(cli, ["verify", "replay", str(path)])
    assert result.exit_code == EXIT_COUNTEREXAMPLE
    replayed = certificates(result.output)
    assert replayed == [c for c in certificates(stream) if not c.is_summary]


def test_verify_rigidity(runner):
    result = runner.invoke(cli, ["verify", "rigidity", "--n", "6", "--m", "2"])
    assert result.exit_code == 0
    assert len(certificates(result.output)) == 2


def test_dispatch_exit_codes(capsys):
    assert dispatch(["construct", "--n", "6", "--m", "2", "--i", "3"]) == EXIT_OK
    assert capsys.readouterr().out == "E}r?\n"
    assert dispatch(["construct", "--n", "6"]) == EXIT_ERROR
    assert dispatch(["no-such-command"]) == EXIT_ERROR
    assert dispatch(["verify", "t12", "--n", "4", "--m", "1", "--margin", "0.5"]) == EXIT_COUNTEREXAMPLE
    assert dispatch(["verify", "t13", "--n", "4", "--m", "1"]) == EXIT_OK
