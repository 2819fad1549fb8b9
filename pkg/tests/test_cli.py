"""Command line interface: subcommands, outputs and exit codes."""

import json
from pathlib import Path

import pytest

from levi.cli import main

REPO_ROOT = Path(__file__).resolve().parent.parent
CONFIG = str(REPO_ROOT / "paper_params.json")


def test_derive_text(capsys):
    assert main(["derive", CONFIG]) == 0
    out = capsys.readouterr().out
    assert "g_ab" in out and "rad/s" in out and "Hz" in out
    assert "alpha1" in out and "balance residual" in out


def test_derive_json(capsys):
    assert main(["derive", CONFIG, "--json"]) == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["g_ab"]["hz"] == pytest.approx(0.30538, rel=1e-3)
    assert payload["kappa"]["rad_per_s"] == pytest.approx(
        2 * 3.141592653589793 * 74948.1145, rel=1e-6
    )


def test_derive_balance(capsys):
    assert main(["derive", CONFIG, "--balance", "--json"]) == 0
    out = capsys.readouterr().out
    header, _, body = out.partition("\n")
    assert "balanced second drive" in header
    payload = json.loads(body)
    g1 = payload["g1"]["hz"]
    g2 = payload["g2"]["hz"]
    assert abs(g1 - g2) <= 1e-6 * max(abs(g1), abs(g2))


def test_derive_requires_drives(tmp_path, capsys):
    data = json.loads(Path(CONFIG).read_text())
    del data["drives"]
    path = tmp_path / "no_drives.json"
    path.write_text(json.dumps(data))
    assert main(["derive", str(path)]) == 1
    assert "drives" in capsys.readouterr().err


def test_evolve_resonant_stdout(capsys):
    code = main(
        [
            "evolve",
            "--scheme",
            "resonant",
            "--g-khz",
            "50",
            "--kappa-khz",
            "75.2",
            "--steps",
            "5",
        ]
    )
    assert code == 0
    lines = capsys.readouterr().out.strip().split("\n")
    assert lines[0] == "t,re_c001,im_c001,re_c010,im_c010,re_c100,im_c100,P,F"
    assert len(lines) == 6
    first = lines[1].split(",")
    assert float(first[0]) == 0.0
    assert float(first[1]) == pytest.approx(1.0)
    assert float(first[7]) == pytest.approx(1.0)


def test_evolve_beamsplitter_columns(capsys):
    code = main(
        ["evolve", "--scheme", "beamsplitter", "--g-khz", "0.1", "--steps", "4"]
    )
    assert code == 0
    lines = capsys.readouterr().out.strip().split("\n")
    assert lines[0] == "t,re_c01,im_c01,re_c10,im_c10,P,F"


def test_evolve_detuned_requires_delta(capsys):
    assert main(["evolve", "--scheme", "detuned", "--g-khz", "50"]) == 1
    assert "delta" in capsys.readouterr().err


def test_evolve_overdamped_is_numerical_failure(capsys):
    code = main(
        ["evolve", "--scheme", "resonant", "--g-khz", "1", "--kappa-khz", "100"]
    )
    assert code == 2
    assert "numerical failure" in capsys.readouterr().err


def test_evolve_writes_file(tmp_path):
    out = tmp_path / "evolution.csv"
    code = main(
        [
            "evolve",
            "--scheme",
            "ideal",
            "--g-khz",
            "50",
            "--t-end",
            "1e-5",
            "--steps",
            "11",
            "--out",
            str(out),
        ]
    )
    assert code == 0
    lines = out.read_text().strip().split("\n")
    assert len(lines) == 12


def test_sweep_writes_grid(tmp_path, capsys, monkeypatch):
    monkeypatch.setenv("LEVI_THREADS", "2")
    data = json.loads(Path(CONFIG).read_text())
    data["sweep"]["axis1"]["count"] = 4
    data["sweep"]["axis2"]["count"] = 3
    cfg = tmp_path / "small.json"
    cfg.write_text(json.dumps(data))
    out = tmp_path / "grid.csv"
    assert main(["sweep", str(cfg), "--out", str(out)]) == 0
    lines = out.read_text().strip().split("\n")
    assert lines[0] == "param1,param2,t,F,P,status"
    assert len(lines) == 1 + 12
    assert "wrote 12 cells" in capsys.readouterr().out


def test_sweep_without_block_fails(tmp_path, capsys):
    data = json.loads(Path(CONFIG).read_text())
    del data["sweep"]
    cfg = tmp_path / "nosweep.json"
    cfg.write_text(json.dumps(data))
    assert main(["sweep", str(cfg), "--out", str(tmp_path / "x.csv")]) == 1
    assert "sweep" in capsys.readouterr().err


def test_oracle_passes(capsys):
    assert main(["oracle", "--random", "3"]) == 0
    out = capsys.readouterr().out
    assert "PASS" in out and "max amplitude deviation" in out


def test_claims_text(capsys):
    assert main(["claims", CONFIG]) == 0
    out = capsys.readouterr().out
    assert "kappa_cyclic" in out and "match" in out


def test_claims_json(capsys):
    assert main(["claims", CONFIG, "--json"]) == 0
    payload = json.loads(capsys.readouterr().out)
    flags = {r["key"]: r["flag"] for r in payload["rows"]}
    assert flags["g3_cyclic"] == "not-assertable"
    assert flags["resonant_fidelity"] == "match"


def test_unknown_flag_is_parse_error(capsys):
    assert main(["derive", CONFIG, "--frobnicate"]) == 1
    assert "error" in capsys.readouterr().err


def test_missing_config_file(capsys):
    assert main(["derive", "/nonexistent/config.json"]) == 1
