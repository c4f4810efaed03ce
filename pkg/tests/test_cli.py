import json
import subprocess
import sys

import pytest

from lenslab.cli import main, output_stem


def run(argv, tmp_path, capsys):
    code = main(argv + ["--output-dir", str(tmp_path)])
    out = capsys.readouterr()
    return code, out.out, out.err


def test_semigroup_csv(tmp_path, capsys):
    code, out, _ = run(["semigroup", "--points", "200", "--seed", "3"], tmp_path, capsys)
    assert code == 0
    path = tmp_path / "semigroup-t10.5-t20.5.csv"
    lines = path.read_text().splitlines()
    assert lines[0] == "# lenslab v1, semigroup, seed=3, t1=0.5, t2=0.5"
    assert lines[2] == "theta1,theta2,points,max_deviation"
    dev = float(lines[3].split(",")[-1])
    assert dev < 1e-12
    assert "max_deviation" in out and f"wrote {path}" in out


def test_outputs_are_deterministic(tmp_path, capsys):
    argv = ["spectrum", "--dim", "60", "--seed", "1"]
    run(argv, tmp_path / "a", capsys)
    run(argv, tmp_path / "b", capsys)
    names = sorted(p.name for p in (tmp_path / "a").iterdir())
    assert any(n.endswith(".svg") for n in names)
    for name in names:
        assert (tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes()


def test_json_format_and_no_plot(tmp_path, capsys):
    code, _, _ = run(["luecking", "--n-max", "8", "--format", "json", "--no-plot"], tmp_path, capsys)
    assert code == 0
    files = list(tmp_path.iterdir())
    assert len(files) == 1 and files[0].suffix == ".json"
    doc = json.loads(files[0].read_text())
    assert doc["command"] == "luecking" and doc["rows"]


def test_config_file_sets_command_and_defaults(tmp_path, capsys):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# semigroup run\ncommand = semigroup\nt1 = 0.25\npoints = 50\n")
    code, out, _ = run(["--config", str(cfg)], tmp_path, capsys)
    assert code == 0
    assert (tmp_path / "semigroup-t10.25-t20.5.csv").exists()
    # flags on the command line still win over the file
    code, _, _ = run(["--config", str(cfg), "semigroup", "--t1", "0.75"], tmp_path, capsys)
    assert code == 0 and (tmp_path / "semigroup-t10.75-t20.5.csv").exists()


def test_config_unknown_key_exits_2(tmp_path, capsys):
    cfg = tmp_path / "bad.cfg"
    cfg.write_text("command = semigroup\nbogus = 1\n")
    code, _, err = run(["--config", str(cfg)], tmp_path, capsys)
    assert code == 2
    payload = json.loads(err.strip().splitlines()[-1])
    assert payload["status"] == "error" and payload["kind"] == "config"


def test_bad_flag_exits_2(tmp_path, capsys):
    code, _, err = run(["spectrum", "--dim", "many"], tmp_path, capsys)
    assert code == 2 and json.loads(err.strip())["kind"] == "config"
    code, _, _ = run([], tmp_path, capsys)
    assert code == 2


def test_module_error_exits_1(tmp_path, capsys):
    code, _, err = run(["semigroup", "--t1", "1.5"], tmp_path, capsys)
    assert code == 1
    payload = json.loads(err.strip())
    assert payload["kind"] == "module" and payload["command"] == "semigroup"


def test_verify_subset(tmp_path, capsys):
    code, out, _ = run(["verify", "--only", "1,8"], tmp_path, capsys)
    assert code == 0
    assert "[PASS] criterion  1" in out and "[PASS] criterion  8" in out
    assert (tmp_path / "verify-only1-8.csv").exists()


def test_output_stem():
    assert output_stem("rho", [("theta", 0.5), ("area", True)]) == "rho-theta0.5-areaTrue"


def test_module_entry_point(tmp_path):
    proc = subprocess.run([sys.executable, "-m", "lenslab", "semigroup", "--points", "20",
                           "--output-dir", str(tmp_path)], capture_output=True, text=True)
    assert proc.returncode == 0, proc.stderr
    assert "max_deviation" in proc.stdout
