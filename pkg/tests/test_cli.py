import json
import subprocess
import sys

import pytest

from preproj.cli import EXIT_FAIL, EXIT_OK, EXIT_USAGE, main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_quiver_info(capsys):
    code, out, _ = run(capsys, "quiver-info", "--type", "D4", "--format", "json")
    assert code == EXIT_OK
    doc = json.loads(out)
    assert doc["h"] == 6 and doc["exponents"] == [1, 3, 3, 5]


def test_algebra_text(capsys):
    code, out, _ = run(capsys, "algebra", "--type", "A3")
    assert code == EXIT_OK
    assert "dim 10" in out and "Hilbert series matches" in out


def test_hh_json(capsys):
    code, out, _ = run(capsys, "hh", "--type", "A2", "--max-degree", "5", "--format", "json")
    assert code == EXIT_OK
    doc = json.loads(out)
    assert doc["homology"]["0"] == {"0": 2}  # HH_0 = R = k e_1 + k e_2
    assert doc["cohomology"]["0"] == {"0": 1}


@pytest.mark.parametrize("argv,expected", [
    (("eval", "lie", "theta[0,0]", "f[2,1]", "--h", "4"), "8*f[2,1]"),
    (("eval", "iota", "z[0,0]", "omega[1,3]", "--h", "4"), "omega[1,3]"),
    (("eval", "connes", "theta[0,1]", "--h", "4"), "5*z[0,1]"),
    (("eval", "bracket", "f[0,0]", "h[0,0]", "--h", "4", "--meta", "synthetic"), "zeta[0,0]"),
    (("eval", "bracket", "f[0,0]", "h[0,0]", "--h", "4", "--meta", "synthetic", "--no-errata"), "-zeta[0,0]"),
])
def test_eval(capsys, argv, expected):
    code, out, _ = run(capsys, *argv)
    assert (code, out.strip()) == (EXIT_OK, expected)


def test_eval_with_engine_metadata(capsys):
    code, out, _ = run(capsys, "eval", "iota", "f[0,0]", "f[0,1]", "--type", "A2", "--format", "json")
    assert code == EXIT_OK
    assert json.loads(out)["meta"].startswith("A2")


@pytest.mark.parametrize("argv", [
    ("quiver-info", "--type", "A1"),
    ("quiver-info", "--type", "Q7"),
    ("quiver-info",),
    ("bogus",),
    ("hh", "--type", "A2", "--max-degree", "1"),
    ("eval", "iota", "q[0,0]", "z[0,0]", "--h", "4"),
    ("eval", "iota", "f[0,0]", "f[0,1]", "--h", "4"),  # needs M_alpha
    ("eval", "iota", "z[0,0]"),  # missing argument and no --h
    ("eval", "iota", "z[5,0]", "theta[0,0]", "--type", "A2"),
    ("verify", "--type", "A2", "--config", "/nonexistent.cfg"),
])
def test_usage_errors(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == EXIT_USAGE
    if argv[0] != "bogus":
        assert err.startswith("error:")


def test_verify_ok_and_fault(capsys):
    code, out, _ = run(capsys, "verify", "--type", "A2", "--threads", "2")
    assert code == EXIT_OK and "skipped checks:" in out
    code, out, _ = run(capsys, "verify", "--type", "A2", "--fault", "bracket", "--format", "json")
    assert code == EXIT_FAIL
    doc = json.loads(out)
    assert not doc["ok"] and any(r["witnesses"] for r in doc["reports"])


def test_verify_printed_tables_fail(capsys):
    code, _, _ = run(capsys, "verify", "--type", "A2", "--tables-only", "--no-errata")
    assert code == EXIT_FAIL


def test_verify_symbolic(capsys):
    code, out, _ = run(capsys, "verify", "--symbolic", "3", "4")
    assert code == EXIT_OK
    assert "synthetic(h=3): 0 violations" in out
    code, _, _ = run(capsys, "verify", "--symbolic", "3", "--no-errata")
    assert code == EXIT_FAIL


def test_config_and_precedence(capsys, tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# defaults for this run\ntype = A2\nmax-degree = 5\nformat = json\n")
    code, out, _ = run(capsys, "hh", "--config", str(cfg))
    assert code == EXIT_OK and json.loads(out)["N"] == 5
    code, out, _ = run(capsys, "hh", "--config", str(cfg), "--max-degree", "4", "--format", "text")
    assert code == EXIT_OK and out.startswith("A2, N = 4")
    bad = tmp_path / "bad.cfg"
    bad.write_text("colour = blue\n")
    assert run(capsys, "hh", "--config", str(bad))[0] == EXIT_USAGE


def test_out_file(capsys, tmp_path):
    dest = tmp_path / "q.json"
    code, out, _ = run(capsys, "quiver-info", "--type", "E6", "--format", "json", "--out", str(dest))
    assert code == EXIT_OK and out == ""
    assert json.loads(dest.read_text())["h"] == 12


def test_module_entry_point():
    p = subprocess.run([sys.executable, "-m", "preproj", "quiver-info", "--type", "A4"],
                       capture_output=True, text=True)
    assert p.returncode == 0 and "h = 5" in p.stdout
    p = subprocess.run([sys.executable, "-m", "preproj", "quiver-info", "--type", "A1"],
                       capture_output=True, text=True)
    assert p.returncode == 2
