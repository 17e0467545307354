import json
import os
import subprocess
import sys
from pathlib import Path

from liekoszul.cli import main

CASES = Path(__file__).resolve().parent.parent / "cases"


def run_cli(args):
    return main([str(a) for a in args])


def test_validate_lie_algebra(capsys):
    code = run_cli(["validate", CASES / "heisenberg-center.json"])
    out = capsys.readouterr().out
    assert code == 0
    assert "all identities hold" in out


def test_hs_heisenberg(capsys, tmp_path):
    out_json = tmp_path / "report.json"
    code = run_cli(["hs", CASES / "heisenberg-center.json", "--json", out_json])
    out = capsys.readouterr().out
    assert code == 0
    assert "verdict: pass" in out
    data = json.loads(out_json.read_text())
    assert data["ok"] is True
    assert data["report"]["infinity_totals"] == {"0": 1, "1": 2, "2": 2, "3": 1}


def test_p1_euler(capsys, tmp_path):
    out_json = tmp_path / "report.json"
    code = run_cli(["p1", CASES / "p1-euler-O0.json", "--window", "1",
                    "--json", out_json])
    out = capsys.readouterr().out
    assert code == 0
    data = json.loads(out_json.read_text())
    assert data["report"]["equivariant_h"] == {"-2": 0, "-1": 2, "0": 2, "1": 0}
    assert data["report"]["corollary_match"] is True
    assert data["report"]["degeneration_ok"] is True


def test_koszul_command(capsys):
    code = run_cli(["koszul", CASES / "euler-n2.json", "--weights", "0..3"])
    out = capsys.readouterr().out
    assert code == 0
    assert "formality: pass" in out
    assert "vanishing above dim Y=0: pass" in out


def test_specseq_command(capsys):
    code = run_cli(["specseq", CASES / "twostep-filtered.json"])
    out = capsys.readouterr().out
    assert code == 0
    assert "convergent: True" in out


def test_cohomology_command(capsys):
    code = run_cli(["cohomology", CASES / "heisenberg-center.json"])
    out = capsys.readouterr().out
    assert code == 0
    assert "H^0=1 H^1=2 H^2=2 H^3=1" in out


def test_schema_error_exit_2(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text('{"kind": "lie_algebra"}')
    assert run_cli(["validate", bad]) == 2
    notjson = tmp_path / "corrupt.json"
    notjson.write_text("{nope")
    assert run_cli(["validate", notjson]) == 2
    missing = tmp_path / "nothere.json"
    assert run_cli(["validate", missing]) == 2


def test_math_failure_exit_1(tmp_path, capsys):
    bad = tmp_path / "nonjacobi.json"
    bad.write_text(json.dumps({
        "kind": "lie_algebra", "name": "broken", "dim": 3,
        "brackets": {"0,1": ["0", "0", "1"], "0,2": ["1", "0", "0"]},
    }))
    assert run_cli(["validate", bad]) == 1


def test_gluing_failure_exit_1(tmp_path, capsys):
    bad = tmp_path / "badglue.json"
    bad.write_text(json.dumps({
        "kind": "p1_bundle", "name": "badglue", "degree": 1,
        "vector_field": ["0", "0", "1"], "scalar_part": ["0", "5"],
        "window": 1,
    }))
    assert run_cli(["p1", bad]) == 1


def test_json_report_deterministic(tmp_path):
    a = tmp_path / "a.json"
    b = tmp_path / "b.json"
    assert run_cli(["hs", CASES / "aff1-nilradical.json", "--json", a]) == 0
    assert run_cli(["hs", CASES / "aff1-nilradical.json", "--json", b]) == 0
    assert a.read_bytes() == b.read_bytes()


def test_console_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "liekoszul.cli", "validate",
         str(CASES / "heisenberg-center.json")],
        capture_output=True, text=True,
        env={**os.environ},
    )
    assert proc.returncode == 0
    assert "pass" in proc.stdout


def test_specseq_double_complex_file(capsys):
    code = run_cli(["specseq", CASES / "square-double.json", "--filtration", "row",
                    "--max-page", "2"])
    out = capsys.readouterr().out
    assert code == 0
    assert "convergent: True" in out
    code = run_cli(["specseq", CASES / "square-double.json", "--filtration", "column"])
    assert code == 0


def test_cohomology_lie_rinehart(capsys):
    code = run_cli(["cohomology", CASES / "euler-n2.json"])
    out = capsys.readouterr().out
    assert code == 0
    assert "weight 0: H^0=1" in out
