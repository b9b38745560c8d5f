import json
import shutil
import subprocess
import sys

import pytest

from padezeta.cli import cache_path, main
from padezeta.construction import ProblemParams

BASE = ["--a", "3", "--r", "1", "--N", "1", "--n", "4"]


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_verify_passes_and_is_stable(capsys, tmp_path):
    code, out1, _ = run(capsys, "verify", *BASE, "--cache-dir", str(tmp_path / "c1"))
    assert code == 0
    report = json.loads(out1)
    assert report
    code, out2, _ = run(capsys, "verify", *BASE, "--cache-dir", str(tmp_path / "c2"))
    assert out1 == out2
    # warm cache gives the same bytes
    code, out3, _ = run(capsys, "verify", *BASE, "--cache-dir", str(tmp_path / "c1"))
    assert out3 == out1


def test_cache_file_written(capsys, tmp_path):
    assert run(capsys, "construct", *BASE, "--cache-dir", str(tmp_path))[0] == 0
    assert cache_path(tmp_path, ProblemParams(3, 1, 1, 4)).exists()


def test_env_cache_overrides(capsys, tmp_path, monkeypatch):
    monkeypatch.setenv("PADEZETA_CACHE", str(tmp_path / "env"))
    assert run(capsys, "construct", *BASE, "--cache-dir", str(tmp_path / "flag"))[0] == 0
    assert (tmp_path / "env").exists() and not (tmp_path / "flag").exists()


@pytest.mark.parametrize("argv", [
    ["construct", "--a", "3", "--r", "1", "--N", "2", "--n", "4"],
    ["construct", "--a", "3", "--r", "1", "--N", "1"],
    ["derive", *BASE, "--kmax", "99"],
    ["lambda", *BASE, "--prec", "32"],
    ["characters", "--modulus", "6", "--reduction", "theorem4", "--index", "1",
     "--a", "5", "--r", "1", "--n", "4"],
])
def test_invalid_inputs_exit_2(capsys, argv):
    code, out, err = run(capsys, *argv)
    assert code == 2
    assert "error" in json.loads(err)


def test_derive_csv_and_out(capsys, tmp_path):
    code, out, _ = run(capsys, "derive", *BASE, "--kmax", "3", "--format", "csv")
    assert code == 0 and out.splitlines()[0].startswith("k,s_1")
    target = tmp_path / "t.json"
    assert run(capsys, "derive", *BASE, "--kmax", "3", "--out", str(target))[0] == 0
    assert json.loads(target.read_text())


def test_other_commands(capsys):
    assert run(capsys, "lambda", *BASE, "--k", "1,2", "--prec", "128")[0] == 0
    assert run(capsys, "rank", *BASE)[0] == 0
    assert run(capsys, "select", "--a", "3", "--r", "1", "--N", "1", "--n", "8")[0] == 0
    code, out, _ = run(capsys, "lvalue", "--modulus", "4", "--index", "1", "--s", "2")
    assert code == 0 and json.loads(out)
    code, out, _ = run(capsys, "characters", "--modulus", "12")
    assert code == 0 and len(json.loads(out)["characters"]) == 4
    assert run(capsys, "bound", "--a", "3", "--r", "1", "--N", "1", "--grid", "6,8")[0] == 0
    assert run(capsys, "report", *BASE)[0] == 0


def test_catalan_reduction_via_cli(capsys):
    code, out, _ = run(capsys, "select", "--modulus", "4", "--index", "1", "--reduction",
                       "theorem4", "--a", "5", "--r", "1", "--n", "8", "--p", "0")
    assert code == 0


@pytest.mark.skipif(shutil.which("padezeta") is None, reason="console script not installed")
def test_console_script():
    proc = subprocess.run(["padezeta", "construct", "--a", "3", "--r", "2", "--N", "1", "--n", "1"],
                          capture_output=True, text=True)
    assert proc.returncode == 2
    assert json.loads(proc.stderr)["error"] == "InvalidParameters"
    proc = subprocess.run([sys.executable, "-m", "padezeta.cli", "--version"],
                          capture_output=True, text=True)
    assert proc.returncode == 0
