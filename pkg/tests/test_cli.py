import io
import json
import subprocess
import sys
from pathlib import Path


from aggsolve.cli import run
from aggsolve.equational import eval_ground
from aggsolve.syntax import parse, parse_term
from aggsolve.terms import Substitution, Theory, Var

DEMOS = Path(__file__).resolve().parents[1] / "demos"


def call(args, text=""):
    out, err = io.StringIO(), io.StringIO()
    code = run(args, io.StringIO(text), out, err)
    return code, out.getvalue(), err.getvalue()


def test_exit_codes():
    assert call(["--theory", "set"], "a in X")[0] == 0
    assert call(["--theory", "set"], "X in Y & Y in X")[0] == 1
    code, _, err = call(["--theory", "set"], "X inn Y")
    assert code == 2 and "line 1, column 3" in err
    assert call(["--theory", "bag"], "X = a")[0] == 2
    assert call(["--theory", "set", "/no/such/file"])[0] == 2


def test_json_report_shape():
    code, out, _ = call(["--theory", "set", "--format", "json", "--mode", "witness"], "{A} in X & {a} nin X")
    report = json.loads(out)
    assert code == 0
    assert report["status"] == "sat"
    assert set(report["stats"]) == {"branches", "rule_applications"}
    form = report["solved_forms"][0]
    assert set(form) == {"literals", "fresh_vars"}
    gamma = Substitution({Var(k): parse_term(v, Theory.SET) for k, v in report["witness"].items()})
    assert eval_ground(Theory.SET, parse("{A} in X & {a} nin X", Theory.SET), gamma)


def test_unsat_json():
    _, out, _ = call(["--theory", "mset", "--format", "json"], "X in Y & Y in X")
    assert json.loads(out) == {
        "status": "unsat", "solved_forms": [], "stats": json.loads(out)["stats"],
    }


def test_all_mode_lists_every_form():
    _, out, _ = call(["--theory", "list", "--mode", "all", "--format", "json"], "X in [a, b]")
    assert len(json.loads(out)["solved_forms"]) == 2


def test_seed_is_deterministic_and_shifts_names():
    args = ["--theory", "set", "--format", "json", "--seed", "7"]
    first = call(args, "a in X")[1]
    assert first == call(args, "a in X")[1]
    assert "N_7" in first


def test_branch_limit_reports_resource_limit():
    code, out, _ = call(
        ["--theory", "list", "--format", "json", "--branch-limit", "2", str(DEMOS / "three_sat.txt")]
    )
    assert code == 2
    assert json.loads(out)["status"] == "resource_limit"


def test_member_elim_flag():
    _, with_elim, _ = call(["--theory", "set"], "a in X")
    _, without, _ = call(["--theory", "set", "--no-member-elim"], "a in X")
    assert "X = {a | N_0}" in with_elim
    assert "a in X" in without


def test_oracle_check():
    code, out, _ = call(["--theory", "set", "--oracle-check", "2", "--format", "json"], "X != nil & a in X")
    report = json.loads(out)
    assert code == 0
    assert report["oracle"] == {"depth": 2, "found": True, "agrees": True}


def test_text_output():
    _, out, _ = call(["--theory", "list", "--mode", "witness"], "X != nil")
    lines = out.splitlines()
    assert lines[0] == "sat"
    assert any(line.startswith("witness:") for line in lines)


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "aggsolve", "--theory", "list", str(DEMOS / "three_sat.txt")],
        capture_output=True, text=True, timeout=60,
    )
    assert proc.returncode == 0
    assert proc.stdout.startswith("sat")
