"""Command-line layer: config schema, determinism, manifests, exit codes."""

import hashlib
import json
import subprocess
import sys

import pytest

from parinf.cli import RunConfig, main
from parinf.errors import ConfigError


def test_defaults_cover_schema():
    cfg = RunConfig.defaults()
    p = cfg.params()
    assert p.mu == 0.5 and p.e0 == 0.0
    assert cfg.integrator().method == "DOP853"


def test_config_round_trip(tmp_path):
    src = tmp_path / "run.ini"
    src.write_text("[params]\nmu = 0.25\ne0 = 0.001\n"
                   "[integrator]\nrtol = 1e-10\n"
                   "[manifold]\nstable = false\n")
    c1 = RunConfig.parse(src)
    assert c1.values["params"]["mu"] == 0.25
    assert c1.values["manifold"]["stable"] is False
    emitted = tmp_path / "emitted.ini"
    emitted.write_text(c1.emit())
    c2 = RunConfig.parse(emitted)
    assert c1 == c2
    assert c2.emit() == c1.emit()


def test_unknown_key_rejected(tmp_path):
    src = tmp_path / "bad.ini"
    src.write_text("[params]\nmu = 0.25\nnonsense = 1\n")
    with pytest.raises(ConfigError):
        RunConfig.parse(src)
    src.write_text("[nosuchsection]\na = 1\n")
    with pytest.raises(ConfigError):
        RunConfig.parse(src)
    src.write_text("[params]\nmu = not-a-number\n")
    with pytest.raises(ConfigError):
        RunConfig.parse(src)


def test_malformed_config_exits_2_without_outputs(tmp_path):
    bad = tmp_path / "bad.ini"
    bad.write_text("[params]\nbogus = 1\n")
    out = tmp_path / "out"
    code = main(["--config", str(bad), "--out", str(out),
                 "scattering", "--G", "8"])
    assert code == 2
    assert not out.exists()


def test_integrate_deterministic_and_manifested(tmp_path):
    args = ["integrate", "--x", "0.28", "--G", "5", "--t1", "6.28",
            "--n-samples", "20"]
    outs = []
    for sub in ("a", "b"):
        out = tmp_path / sub
        assert main(["--out", str(out)] + args) == 0
        outs.append((out / "trajectory.csv").read_bytes())
        manifest = json.loads((out / "manifest.json").read_text())
        assert manifest["command"] == "integrate"
        inventory = {e["path"]: e["sha256"] for e in manifest["outputs"]}
        assert set(inventory) == {"trajectory.csv"}
        digest = hashlib.sha256(outs[-1]).hexdigest()
        assert inventory["trajectory.csv"] == digest
    assert outs[0] == outs[1]  # byte-identical CSVs


def test_integrate_conserves_h_and_g_at_zero_mass(tmp_path):
    cfgfile = tmp_path / "mu0.ini"
    cfgfile.write_text("[params]\nmu = 0.0\n")
    out = tmp_path / "r"
    assert main(["--config", str(cfgfile), "--out", str(out), "integrate",
                 "--x", "0.28284271247461901", "--G", "5", "--t1", "100",
                 "--n-samples", "60"]) == 0
    rows = (out / "trajectory.csv").read_text().strip().splitlines()
    header = rows[0].split(",")
    ih, ig = header.index("H"), header.index("G")
    hs = [float(r.split(",")[ih]) for r in rows[1:]]
    gs = [float(r.split(",")[ig]) for r in rows[1:]]
    assert max(hs) - min(hs) < 1e-10
    assert max(gs) - min(gs) < 1e-10


def test_scattering_command_ratios(tmp_path):
    out = tmp_path / "sc"
    assert main(["--out", str(out), "scattering", "--G", "8,16"]) == 0
    lines = (out / "phase_shift.csv").read_text().strip().splitlines()
    assert lines[0] == "G,f_numeric,f_asymptotic,ratio"
    ratios = [float(l.split(",")[3]) for l in lines[1:]]
    assert all(abs(r - 1.0) < 1e-3 for r in ratios)


def test_cli_entry_point_runs():
    proc = subprocess.run([sys.executable, "-m", "parinf.cli", "--help"],
                          capture_output=True, text=True)
    assert proc.returncode == 0
    assert "integrate" in proc.stdout and "verify" in proc.stdout
