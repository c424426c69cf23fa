import json
import subprocess
import sys

import pytest

from stargray.certificate import parse_certificate
from stargray.cli import EXIT_LIMIT, EXIT_OK, EXIT_REJECT, EXIT_VERIFY, main
from stargray.ham_lab import verify


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_classify(capsys):
    code, out, _ = run(capsys, "classify", "2,2,1")
    assert code == EXIT_OK and "Δ=1" in out
    code, out, _ = run(capsys, "classify", "3,1")
    assert code == EXIT_REJECT and "no Hamilton cycle or path" in out
    code, out, _ = run(capsys, "classify", "2,1", "--format", "json")
    assert json.loads(out)["hamilton_path"] is True


def test_gen_text_certificate(capsys):
    code, out, _ = run(capsys, "gen", "2,2,2", "--cycle")
    assert code == EXIT_OK
    lines = out.splitlines()
    assert len(lines) == 92 and lines[-1].startswith("flips:")
    cert = parse_certificate(out)
    assert cert.kind == "cycle" and verify(cert.a, cert).ok


def test_gen_endpoints_and_formats(capsys):
    code, out, _ = run(capsys, "gen", "2,2,1", "--from", "11223", "--to", "32211", "--format", "json")
    assert code == EXIT_OK
    data = json.loads(out)
    assert data["start"] == "11223" and len(data["flips"]) == 29
    code, out, _ = run(capsys, "gen", "2,2,1", "--format", "flips")
    assert code == EXIT_OK and len(out.split()) == 29


def test_gen_rejects(capsys):
    assert run(capsys, "gen", "3,1")[0] == EXIT_REJECT
    assert run(capsys, "gen", "5,4,2")[0] == EXIT_REJECT
    assert run(capsys, "gen", "2,2,1", "--from", "11111", "--to", "11223")[0] == EXIT_REJECT
    assert run(capsys, "gen", "9,x")[0] == EXIT_REJECT


def test_json_errors(capsys):
    code, _, err = run(capsys, "gen", "3,1", "--json")
    assert code == EXIT_REJECT
    assert json.loads(err)["exit"] == EXIT_REJECT
    code, _, err = run(capsys, "nonsense", "--json")
    assert code == EXIT_REJECT and json.loads(err)["error"] == "usage"


def test_cap_gives_limit(capsys):
    assert run(capsys, "solve", "2,2,2", "--cycle", "--cap", "10")[0] == EXIT_LIMIT


def test_solve(capsys):
    code, out, _ = run(capsys, "solve", "2,2,1", "--from", "11223", "--to", "21123")
    assert code == EXIT_OK and parse_certificate(out).kind == "path"
    code, _, _ = run(capsys, "solve", "2,1,1", "--from", "1123", "--to", "2131")
    assert code == EXIT_VERIFY


def test_check(capsys):
    code, out, _ = run(capsys, "check", "2,2,1", "H")
    assert code == EXIT_OK and "holds" in out
    code, out, _ = run(capsys, "check", "2,1,1", "L1", "--format", "json")
    assert code == EXIT_VERIFY
    data = json.loads(out)
    assert data["holds"] is False and data["counterexample"] == ["1123", "2131"]


def test_table1_small(capsys):
    code, out, _ = run(capsys, "table1", "--max-n", "4", "--format", "json")
    assert code == EXIT_OK
    rows = json.loads(out)
    assert [r["verdict"] for r in rows] == ["H", "E but not L", "E but not L", "C but not E"]


def test_verify_round_trip(capsys, tmp_path, monkeypatch):
    code, out, _ = run(capsys, "gen", "2,2,1", "--format", "json")
    path = tmp_path / "c.json"
    path.write_text(out)
    assert run(capsys, "verify", str(path))[0] == EXIT_OK
    assert run(capsys, "verify", str(path), "--expect", "cycle")[0] == EXIT_VERIFY
    data = json.loads(out)
    data["flips"][3] = data["flips"][4]
    path.write_text(json.dumps(data))
    assert run(capsys, "verify", str(path))[0] == EXIT_VERIFY
    path.write_text("garbage")
    assert run(capsys, "verify", str(path))[0] == EXIT_VERIFY
    assert run(capsys, "verify", str(tmp_path / "missing.json"))[0] == EXIT_REJECT


def test_middle(capsys):
    code, out, _ = run(capsys, "middle", "--n", "5", "--distance", "3")
    assert code == EXIT_OK
    cert = parse_certificate(out)
    assert cert.view == "short" and verify(cert.a, cert).ok
    code, out, _ = run(capsys, "middle", "--n", "4", "--cycle-mprime", "--format", "json")
    assert code == EXIT_OK and json.loads(out)["view"] == "short"
    code, out, _ = run(capsys, "middle", "--n", "4")
    assert json.loads(out)["cycles"] == 2
    assert run(capsys, "middle", "--n", "5", "--distance", "2")[0] == EXIT_REJECT
    assert run(capsys, "middle", "--n", "5", "--from", "000001111", "--to", "000011110")[0] == EXIT_REJECT


def test_factor(capsys):
    code, out, _ = run(capsys, "factor", "--n", "3", "--a", "1,1,1")
    assert code == EXIT_OK and "3 cycles, 3 labeled plane trees" in out
    code, out, _ = run(capsys, "factor", "--n", "3", "--a", "1,1,1", "--format", "json")
    assert code == EXIT_OK
    data = json.loads(out)
    assert data["ok"] and data["cycles"] == 3


def test_export(capsys):
    code, out, _ = run(capsys, "export", "1,1,1", "--format", "dot")
    assert code == EXIT_OK and out.startswith("graph")
    code, out, _ = run(capsys, "export", "2,1", "--format", "json")
    assert json.loads(out)["vertices"] == ["112", "121", "211"]


def test_warmup(capsys, tmp_path):
    code, out, _ = run(capsys, "warmup", "2", "--cache", str(tmp_path))
    assert code == EXIT_OK
    assert (tmp_path / "certificates.sqlite").exists()


def test_gen_is_deterministic(capsys):
    first = run(capsys, "gen", "3,2,1,1", "--cycle")[1]
    second = run(capsys, "gen", "3,2,1,1", "--cycle")[1]
    assert first == second


def test_console_entry_point_and_stdin():
    gen = subprocess.run([sys.executable, "-m", "stargray.cli", "gen", "2,2,1", "--format", "json"],
                         capture_output=True, text=True, check=True)
    ver = subprocess.run([sys.executable, "-m", "stargray.cli", "verify", "-"], input=gen.stdout,
                         capture_output=True, text=True)
    assert ver.returncode == 0
