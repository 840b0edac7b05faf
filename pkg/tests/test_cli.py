from __future__ import annotations

import csv
import io
import json
import pathlib
import shutil
import subprocess

import pytest

from annuli.cli import fmt_value, main
from annuli.parallel import THREADS_ENV, resolve_threads

GOLDEN = pathlib.Path(__file__).parent / "golden"
GOLDEN_CASES = {
    "profile_rational": "profile",
    "locate_exp_minus_one": "locate",
    "smt_exp": "smt-scan",
    "borel_recip": "borel",
    "logderiv_boundary_exp": "logderiv",
}


def _write(tmp_path, text, name="run.cfg"):
    p = tmp_path / name
    p.write_text(text)
    return str(p)


def _run(capsys, argv):
    code = main(argv)
    out, err = capsys.readouterr()
    return code, out, err


@pytest.mark.parametrize("name", sorted(GOLDEN_CASES))
def test_golden_output(name, capsys):
    code, out, _ = _run(capsys, [GOLDEN_CASES[name], "--config", str(GOLDEN / f"{name}.cfg"), "--threads", "1"])
    assert code == 0
    assert out == (GOLDEN / f"{name}.csv").read_text(encoding="utf-8")


SMALL = "function=rational([(1.5,2)];[(-0.6,1)];1;0)\nR0=3\ngrid_count=8\n"


@pytest.mark.parametrize("sub, extra", [
    ("profile", {}), ("locate", {}), ("jensen", {}), ("fmt", {"a": "0.5"}), ("borel", {"phi": "staircase"}),
    ("logderiv", {}), ("admissibility", {}),
    ("logderiv-curve", {"function": "2/(R0-z)", "lattice": "1,0.5+1i"}),
    ("smt-scan", {"function": "exp(z)", "a": "1"}),
])
def test_every_subcommand_writes_csv(sub, extra, tmp_path, capsys):
    keys = {"function": "rational([(1.5,2)];[(-0.6,1)];1;0)", "R0": "3", "grid_count": "8", **extra}
    cfg = _write(tmp_path, "".join(f"{k}={v}\n" for k, v in keys.items()))
    code, out, err = _run(capsys, [sub, "--config", cfg])
    assert code == 0, err
    lines = out.splitlines()
    assert lines[0].startswith(f"# annuli {sub} config=")
    embedded = json.loads(lines[0].split("config=", 1)[1])
    assert embedded["R0"] == "3.0"
    body = [ln for ln in lines[1:] if not ln.startswith("#")]
    rows = list(csv.reader(io.StringIO("\n".join(body))))
    assert len({len(r) for r in rows}) == 1


def test_output_flag_and_determinism_across_threads(tmp_path, capsys):
    cfg = _write(tmp_path, "function=exp(z)\nR0=3\ngrid_count=12\n")
    out = tmp_path / "out.csv"
    results = []
    for threads in ("1", "8", "1"):
        assert main(["profile", "--config", cfg, "--threads", threads, "--output", str(out)]) == 0
        results.append(out.read_bytes())
    assert results[0] == results[1] == results[2]


def test_set_overrides(tmp_path, capsys):
    cfg = _write(tmp_path, SMALL)
    code, out, _ = _run(capsys, ["profile", "--config", cfg, "--set", "grid_count=3", "--set", "levels=2"])
    assert code == 0
    assert out.splitlines()[1].startswith("r,m0,N0_k2,N0_kinf,T0")
    assert len([ln for ln in out.splitlines() if not ln.startswith("#")]) == 4


def test_config_only_from_set(capsys):
    code, out, _ = _run(capsys, ["borel", "--set", "R0=2", "--set", "grid_count=5", "--set", "grid_margin=0.1"])
    assert code == 0 and "# summary:" in out


@pytest.mark.parametrize("text, needle", [
    ("R0=3\nbogus=1\n", "line 2"),
    ("R0=3\nfunction=exp(z\n", "column"),
    ("R0=3\ngrid_count=1\n", "grid_count"),
])
def test_config_errors_exit_1(text, needle, tmp_path, capsys):
    code, _, err = _run(capsys, ["profile", "--config", _write(tmp_path, text)])
    assert code == 1 and needle in err


def test_missing_config_exit_1(tmp_path, capsys):
    code, _, err = _run(capsys, ["profile", "--config", str(tmp_path / "nope.cfg")])
    assert code == 1 and "cannot read config" in err


def test_smt_needs_finite_target(tmp_path, capsys):
    code, _, _ = _run(capsys, ["smt-scan", "--config", _write(tmp_path, "function=exp(z)\nR0=3\n")])
    assert code == 1


def test_numerical_failure_exit_2(tmp_path, capsys):
    cfg = _write(tmp_path, "function=rational([(1i,1)];[];1;0)\nR0=3\ngrid_count=4\n")
    code, _, err = _run(capsys, ["profile", "--config", cfg])
    assert code == 2 and "unit circle" in err


def test_unwritable_output_exit_3(tmp_path, capsys):
    cfg = _write(tmp_path, SMALL)
    code, _, err = _run(capsys, ["borel", "--config", cfg, "--output", str(tmp_path / "missing" / "x.csv")])
    assert code == 3 and "cannot write" in err


def test_threads_from_environment(monkeypatch):
    monkeypatch.setenv(THREADS_ENV, "3")
    assert resolve_threads(None) == 3
    assert resolve_threads(5) == 5
    monkeypatch.delenv(THREADS_ENV)
    assert resolve_threads(None) == 1


def test_fmt_value():
    assert fmt_value(0.1) == "0.1" and fmt_value(float("inf")) == "inf" and fmt_value(float("nan")) == "nan"
    assert fmt_value(True) == "1" and fmt_value(3) == "3" and fmt_value("x") == "x"


@pytest.mark.skipif(shutil.which("annuli") is None, reason="console script not installed")
def test_console_script(tmp_path):
    cfg = _write(tmp_path, "R0=2\ngrid_count=5\ngrid_margin=0.1\n")
    res = subprocess.run(["annuli", "borel", "--config", cfg], capture_output=True, text=True, check=False)
    assert res.returncode == 0 and res.stdout.startswith("# annuli borel")
