"""Tests for the command-line front end and bench helpers."""
import csv
import io
import json

import pytest

from cli.main import run
from services.bvi import BviConfig, solve_bvi
from services.constants import STATUS_ERROR, STATUS_NOT_VERIFIED, STATUS_OK, STATUS_TIMEOUT
from services.game import parse_game
from services.generators import gen_hm, gen_mulmec
from services.mathprog import mathprog_service
from services.solving import BenchRow, solver_service, status_of, write_bench_csv

WIDE_TEXT = """\
states 4
initial 0
targets 2
owner 0 min
owner 1 max
owner 2 max
owner 3 min
action 0 a (1:1/2)(2:1/2)
action 0 b (2:1/4)(3:3/4)
action 0 c (1:1)
action 1 a (2:1/3)(3:2/3)
action 1 b (0:1/2)(3:1/2)
action 3 stay (3:1)
"""


@pytest.fixture
def wide_path(tmp_path):
    path = tmp_path / "wide.ssg"
    path.write_text(WIDE_TEXT)
    return path


def _json_output(capsys):
    return json.loads(capsys.readouterr().out)


# solve

def test_solve_json(escape_path, capsys):
    assert run(["solve", str(escape_path), "--json"]) == 0
    payload = _json_output(capsys)
    assert payload["algorithm"] == "bvi"
    assert payload["initial_value"] == pytest.approx(0.5, abs=1e-6)
    assert payload["maximizer_strategy"]["1"] == "c"
    assert payload["converged"]


def test_solve_exact_rational(escape_path, capsys):
    assert run(["solve", str(escape_path), "--algo", "si", "--exact-rational", "--json"]) == 0
    assert _json_output(capsys)["exact_values"] == ["1/2", "1/2", "1", "0"]


def test_solve_text_output(escape_path, capsys):
    assert run(["solve", str(escape_path), "--algo", "oracle"]) == 0
    out = capsys.readouterr().out
    assert "initial 0:" in out
    assert "maximizer: 1=c 2=loop" in out
    assert out.splitlines()[0] == "0\t1/2"


@pytest.mark.parametrize("algo", ["vi", "topo-bvi", "topo-si", "topo-hop", "hop-local", "qp-local"])
def test_solve_every_algorithm(escape_path, capsys, algo):
    assert run(["solve", str(escape_path), "--algo", algo, "--json"]) == 0
    assert _json_output(capsys)["initial_value"] == pytest.approx(0.5, abs=1e-5)


def test_solve_not_converged(tmp_path, capsys):
    path = tmp_path / "hm30.ssg"
    assert run(["gen", "hm", "30", "-o", str(path)]) == 0
    assert run(["solve", str(path), "--max-iterations", "10000"]) == 3


def test_solve_unsafe_opponent_needs_flag(escape_path):
    assert run(["solve", str(escape_path), "--algo", "si", "--opponent", "vi"]) == 1
    assert run(["solve", str(escape_path), "--algo", "si", "--opponent", "vi", "--unsafe"]) == 0


def test_missing_file_is_usage_error(tmp_path):
    assert run(["solve", str(tmp_path / "nope.ssg")]) == 1


def test_bad_game_exit_code(tmp_path):
    path = tmp_path / "bad.ssg"
    path.write_text("states 2\ninitial 0\ntargets 1\nowner 0 max\nowner 1 max\naction 0 a (1:9/10)\n")
    assert run(["solve", str(path)]) == 2


def test_unknown_subcommand():
    with pytest.raises(SystemExit) as info:
        run(["frobnicate"])
    assert info.value.code == 1


# encode / verify

def test_encode_lp_style(escape_path, capsys):
    assert run(["encode", str(escape_path), "--form", "hop", "--format", "lp-style"]) == 0
    out = capsys.readouterr().out
    assert "binary" in out.lower()
    assert out.lower().rstrip().endswith("end")


def test_encode_to_file(escape_path, tmp_path):
    output = tmp_path / "escape.prog"
    assert run(["encode", str(escape_path), "--form", "qp", "-o", str(output)]) == 0
    assert output.read_text().startswith("# ssg-solver program")


def test_encode_wide_game_needs_two_act(wide_path, capsys):
    assert run(["encode", str(wide_path), "--format", "lp-style"]) == 1
    assert run(["encode", str(wide_path), "--form", "qp"]) == 1
    capsys.readouterr()
    assert run(["encode", str(wide_path), "--form", "qp", "--two-act", "--format", "lp-style"]) == 0
    out = capsys.readouterr().out
    # no end component, so no group binaries
    assert "v_4" in out
    assert "b_0_0" not in out


def test_encode_stopping(escape_path, capsys):
    assert run(["encode", str(escape_path), "--stopping", "0.01"]) == 0
    assert "states 5" in capsys.readouterr().out


def test_encode_bigmec_infeasible(tmp_path):
    path = tmp_path / "bigmec.ssg"
    assert run(["gen", "bigmec", "100", "-o", str(path)]) == 0
    assert run(["encode", str(path)]) == 5


@pytest.fixture
def escape_program(escape_path, tmp_path):
    output = tmp_path / "escape.prog"
    assert run(["encode", str(escape_path), "-o", str(output)]) == 0
    return output


@pytest.mark.parametrize("values, code", [("1/2 1/2 1 0", 0), ("1 1 1 0", 4)])
def test_verify_value_files(escape_path, escape_program, tmp_path, capsys, values, code):
    values_path = tmp_path / "values.txt"
    values_path.write_text(values + "\n")
    assert run(["verify", str(escape_path), "--program", str(escape_program), "--values", str(values_path)]) == code
    assert capsys.readouterr().out.splitlines()[-1] == ("PASS" if code == 0 else "FAIL")


def test_verify_solve_json_output(escape_path, escape_program, tmp_path, capsys):
    assert run(["solve", str(escape_path), "--algo", "si", "--json"]) == 0
    values_path = tmp_path / "solution.json"
    values_path.write_text(capsys.readouterr().out)
    assert run(["verify", str(escape_path), "--program", str(escape_program), "--values", str(values_path)]) == 0


def test_verify_rejects_program_of_other_game(escape_path, tmp_path):
    other = tmp_path / "mulmec.ssg"
    program = tmp_path / "mulmec.prog"
    assert run(["gen", "mulmec", "2", "-o", str(other)]) == 0
    assert run(["encode", str(other), "-o", str(program)]) == 0
    values_path = tmp_path / "values.txt"
    values_path.write_text("1/2 1/2 1 0\n")
    assert run(["verify", str(escape_path), "--program", str(program), "--values", str(values_path)]) == 1


def test_verify_accepts_stopping_program(escape_path, tmp_path):
    program = tmp_path / "stopping.prog"
    assert run(["encode", str(escape_path), "--stopping", "0.01", "-o", str(program)]) == 0
    values_path = tmp_path / "values.txt"
    values_path.write_text("1 1 1 0 0\n")
    # the game matches, the values do not
    assert run(["verify", str(escape_path), "--program", str(program), "--values", str(values_path)]) == 4


# gen

def test_gen_to_stdout(capsys):
    assert run(["gen", "mulmec", "2"]) == 0
    assert parse_game(capsys.readouterr().out, exact=True) == gen_mulmec(2)


def test_gen_random(capsys):
    assert run(["gen", "random", "--seed", "4", "--states", "5"]) == 0
    assert parse_game(capsys.readouterr().out).num_states == 5


def test_gen_rejects_bad_size():
    assert run(["gen", "hm", "0"]) == 1


# bench

def test_bench_writes_csv(escape_path, tmp_path):
    output = tmp_path / "bench.csv"
    code = run([
        "bench", str(escape_path.parent), "--algos", "bvi", "oracle", "--workers", "1", "-o", str(output),
    ])
    assert code == 0
    rows = list(csv.DictReader(output.open()))
    assert [r["algo"] for r in rows] == ["bvi", "oracle"]
    assert all(r["status"] == STATUS_OK for r in rows)
    assert rows[1]["value"] == "0.5"
    assert rows[0]["states"] == "4"
    assert rows[0]["mecs"] == "1"


def test_bench_empty_directory(tmp_path):
    assert run(["bench", str(tmp_path)]) == 1


def test_bench_reports_error_rows(tmp_path):
    # the oracle refuses mulmec(10) for its strategy-profile budget
    assert run(["gen", "mulmec", "10", "-o", str(tmp_path / "mulmec10.ssg")]) == 0
    output = tmp_path / "bench.csv"
    assert run(["bench", str(tmp_path), "--algos", "oracle", "-o", str(output)]) == 0
    [row] = list(csv.DictReader(output.open()))
    assert row["status"] == STATUS_ERROR
    assert row["states"] == "32"
    assert row["value"] == row["iters"] == row["seconds"] == ""


def test_status_of():
    assert status_of(solve_bvi(gen_hm(30), BviConfig(max_iterations=10))) == STATUS_TIMEOUT
    assert status_of(solver_service.solve(gen_mulmec(1), "oracle")) == STATUS_OK
    result = mathprog_service.solve_local(gen_mulmec(1), init=[0.0] * 5, warm_start=False)
    result.statistics["verified"] = False
    assert status_of(result) == STATUS_NOT_VERIFIED


def test_write_bench_csv_blank_for_missing_values():
    out = io.StringIO()
    write_bench_csv([
        BenchRow(model="a.ssg", states=3, max_acts=2, avg_acts=1.5, mecs=0, algo="bvi", status=STATUS_TIMEOUT),
    ], out)
    lines = out.getvalue().splitlines()
    assert lines[0] == "model,states,max_acts,avg_acts,mecs,algo,value,iters,seconds,status"
    assert lines[1] == "a.ssg,3,2,1.5,0,bvi,,,,TIMEOUT"


def test_unknown_algorithm(escape):
    with pytest.raises(ValueError, match="unknown algorithm"):
        solver_service.solve(escape, "magic")
