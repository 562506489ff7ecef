"""
Tests for the command line: output shapes and exit codes.
"""
import json
from pathlib import Path

import pytest

from hyperdel.external.array_file import JSON, array_codec
from hyperdel.main import build_parser, main
from hyperdel.models.tensor_models import NdArray
from hyperdel.routes.commands import EXIT_ERROR, EXIT_NEGATIVE, EXIT_OK, parse_shape
from hyperdel.shared.errors import ShapeError


@pytest.fixture
def counter_files(tmp_path, counter_x, counter_y):
    x_path, y_path = tmp_path / "x.txt", tmp_path / "y.json"
    array_codec.write_array(x_path, counter_x)
    array_codec.write_array(y_path, counter_y, JSON)
    return str(x_path), str(y_path)


def test_parse_shape():
    assert parse_shape("3", 2) == (3, 3)
    assert parse_shape("3,2", None) == (3, 2)
    assert parse_shape("(2,2,2)", 3) == (2, 2, 2)
    with pytest.raises(ShapeError):
        parse_shape("3,2", 3)
    with pytest.raises(ShapeError):
        parse_shape(None, 2)


def test_ball_sizes(tmp_path, counter_files, capsys):
    x_path, _ = counter_files
    assert main(["ball", x_path, "--t", "1,0"]) == EXIT_OK
    assert capsys.readouterr().out == "size: 3\n"

    word = tmp_path / "word.txt"
    word.write_text("2 1 4\n0 0 1 1\n")
    assert main(["ball", str(word), "--t", "1"]) == EXIT_OK
    assert capsys.readouterr().out == "size: 2\n"
    assert main(["ball", str(word), "--t", "0", "--kind", "ins"]) == EXIT_OK
    assert capsys.readouterr().out == "size: 1\n"


def test_ball_members_as_json(tmp_path, capsys):
    word = tmp_path / "word.txt"
    word.write_text("2 1 4\n0 0 1 1\n")
    assert main(["ball", str(word), "--t", "1", "--members", "--format", "json"]) == EXIT_OK
    payload = json.loads(capsys.readouterr().out)
    assert payload["kind"] == "del"
    assert payload["size"] == 2
    assert [m["entries"] for m in payload["members"]] == [[0, 0, 1], [0, 1, 1]]


def test_check_code_exit_codes(counter_files, capsys):
    x_path, y_path = counter_files
    assert main(["check-code", x_path, y_path, "--t", "1,0"]) == EXIT_NEGATIVE
    out = capsys.readouterr().out
    assert out.startswith("NOT-CORRECTING (del, t=(1,0)")
    assert "common:" in out

    assert main(["check-code", x_path, y_path, "--t", "0,1"]) == EXIT_OK
    assert capsys.readouterr().out.startswith("CORRECTING (del, t=(0,1), 1 pairs checked)")


def test_check_code_scalar_and_json(counter_files, capsys):
    x_path, y_path = counter_files
    assert main(["check-code", x_path, y_path, "--scalar", "1", "--format", "json"]) == EXIT_NEGATIVE
    payload = json.loads(capsys.readouterr().out)
    assert payload["verdict"] == "NOT-CORRECTING"
    assert [c["t"] for c in payload["compositions"]] == ["(0,1)", "(1,0)"]
    assert main(["check-code", x_path, y_path, "--scalar", "1", "--kind", "insdel"]) == EXIT_ERROR
    assert main(["check-code", x_path, y_path]) == EXIT_ERROR


def test_verify_commands(capsys):
    assert main(["verify", "counterexample"]) == EXIT_OK
    assert "verdict: PASS" in capsys.readouterr().out
    assert main(["verify", "t1-equivalence", "--d", "2", "--q", "2", "--n", "2"]) == EXIT_OK
    out = capsys.readouterr().out
    assert "statement: t1-equivalence" in out
    assert "pairs checked: 120" in out


def test_counterexample_command(capsys):
    assert main(["counterexample", "--format", "json"]) == EXIT_OK
    payload = json.loads(capsys.readouterr().out)
    assert payload["verdict"] == "PASS"
    assert "elapsed_seconds" not in payload


def test_sampled_runs_are_byte_stable(capsys):
    argv = [
        "verify", "general", "--d", "2", "--n", "2", "--t", "1,1",
        "--budget", "1", "--sample", "10", "--seed", "5", "--format", "json",
    ]
    assert main(argv) == EXIT_OK
    first = capsys.readouterr().out
    assert main(argv) == EXIT_OK
    assert capsys.readouterr().out == first
    assert json.loads(first)["mode"] == "sampled"


def test_over_budget_without_sampling_is_an_error(capsys):
    assert main(["verify", "general", "--d", "2", "--n", "2", "--t", "1,1", "--budget", "1"]) == EXIT_ERROR
    assert capsys.readouterr().err.startswith("error:")


def test_search_command(capsys):
    assert main(["search", "--d", "1", "--n", "4", "--t", "1", "--format", "json"]) == EXIT_OK
    payload = json.loads(capsys.readouterr().out)
    assert payload["rows"][0]["deletion_max"] == 4
    assert payload["rows"][0]["insdel_max"] == 4
    assert main(["search", "--d", "1", "--n", "4", "--kind", "ins"]) == EXIT_ERROR
    assert main(["search", "--d", "1"]) == EXIT_ERROR


def test_malformed_file_is_an_error(tmp_path, capsys):
    bad = tmp_path / "bad.txt"
    bad.write_text("2 2 2 2\n0 1 1\n")
    assert main(["ball", str(bad), "--t", "1,0"]) == EXIT_ERROR
    assert capsys.readouterr().err.startswith("error:")
    assert main(["ball", str(tmp_path / "missing.txt"), "--t", "1"]) == EXIT_ERROR


def test_bad_edit_vectors(counter_files, capsys):
    x_path, _ = counter_files
    assert main(["ball", x_path, "--t", "1,x"]) == EXIT_ERROR
    assert main(["ball", x_path, "--t", "4,0"]) == EXIT_ERROR
    assert main(["ball", x_path, "--t", "1"]) == EXIT_ERROR


def test_usage_errors_exit_with_two():
    with pytest.raises(SystemExit) as exc:
        build_parser().parse_args(["verify", "no-such-statement"])
    assert exc.value.code == 2


def test_insdel_ball_command(tmp_path, capsys):
    path = tmp_path / "z.txt"
    array_codec.write_array(path, NdArray.zeros((2, 2), 2))
    assert main(["ball", str(path), "--t", "1,1", "--kind", "insdel"]) == EXIT_OK
    assert capsys.readouterr().out.startswith("size: ")


def test_demo_code_is_not_column_correcting(capsys):
    demo = Path(__file__).resolve().parent.parent / "demo_data.json"
    assert main(["check-code", str(demo), "--t", "1,0"]) == EXIT_NEGATIVE
    assert main(["check-code", str(demo), "--t", "0,1"]) == EXIT_OK
