"""Command-line interface: formats, exit codes, determinism."""

import json
import math
import os

import pytest

from turing4.cli import main

P_STAR = "0.4,-0.16,5,-1,30"
KIN = "0,0.4,1,1,1"


def invoke(capsys, argv):
    code = main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


def test_spectrum_periodic_stdout(capsys):
    code, out, _ = invoke(
        capsys,
        ["spectrum", "--bc", "periodic", "--tau", "0", "--radius", "1",
         "--count", "3", "--format", "csv"],
    )
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "parity,l,tau,R,mu,method"
    mus = [float(line.split(",")[4]) for line in lines[1:]]
    assert mus[0] == 0.0
    assert mus[1] == pytest.approx(math.pi**4, rel=1e-13)
    assert mus[1] == mus[2]


def test_spectrum_free_zero_tension_double_kernel(capsys):
    code, out, _ = invoke(
        capsys,
        ["spectrum", "--bc", "free", "--tau", "0", "--radius", "1",
         "--count", "3", "--format", "csv"],
    )
    assert code == 0
    mus = [float(line.split(",")[4]) for line in out.splitlines()[1:]]
    assert mus[0] == 0.0 and mus[1] == 0.0
    assert mus[2] == pytest.approx(31.28524385877703, rel=1e-12)


def test_spectrum_negative_tension_json(capsys):
    code, out, _ = invoke(
        capsys,
        ["spectrum", "--bc", "free", "--tau", "-20", "--radius", "1",
         "--count", "6", "--format", "json"],
    )
    assert code == 0
    doc = json.loads(out)
    assert sum(1 for row in doc["points"] if row["mu"] < 0.0) == 3
    assert min(row["mu"] for row in doc["points"]) == pytest.approx(
        -419.70556126207083, rel=1e-12
    )


def test_spectrum_output_file(tmp_path, capsys):
    target = tmp_path / "spec.csv"
    code, out, _ = invoke(
        capsys,
        ["spectrum", "--bc", "free", "--tau", "1", "--radius", "2",
         "--count", "4", "--output", str(target)],
    )
    assert code == 0 and out == ""
    assert target.read_text().startswith("parity,l,tau,R,mu,method\n")


def test_spectrum_validation_exit_2(capsys):
    code, _, err = invoke(
        capsys,
        ["spectrum", "--bc", "free", "--tau", "0", "--radius", "-1",
         "--count", "4"],
    )
    assert code == 2
    assert err != ""


def test_classify_member_case_H(capsys):
    code, out, _ = invoke(
        capsys, ["classify", "--p", P_STAR, "--tau", "0.5", "--radius", "20"]
    )
    assert code == 0
    doc = json.loads(out)
    assert doc["member"] is True and doc["case"] == "H"
    assert doc["conditions"] == [True, True, True, True]
    assert doc["A"] == pytest.approx(-0.01935483870967742, rel=1e-12)


def test_classify_member_case_F(capsys):
    code, out, _ = invoke(
        capsys, ["classify", "--p", P_STAR, "--tau", "-0.3", "--radius", "20"]
    )
    assert code == 0
    doc = json.loads(out)
    assert doc["member"] is True and doc["case"] == "F"
    assert doc["witness_mu"] < 0.0


def test_classify_nonmember(capsys):
    code, out, _ = invoke(
        capsys, ["classify", "--p=-1,0.1,0.1,-1,2", "--tau", "0", "--radius", "1"]
    )
    assert code == 0
    doc = json.loads(out)
    assert doc["member"] is False


def test_classify_malformed_p(capsys):
    code, _, err = invoke(
        capsys, ["classify", "--p", "1,2,3", "--tau", "0", "--radius", "1"]
    )
    assert code == 2 and err != ""


def test_region_writes_files(tmp_path, capsys):
    code, _, _ = invoke(
        capsys,
        ["region", "--p", P_STAR, "--families", "EPlus:1,OPlus:2",
         "--grid", "18:22:3,0.4:0.6:3", "--samples", "10",
         "--svg", str(tmp_path / "view.svg"), "--outdir", str(tmp_path)],
    )
    assert code == 0
    names = sorted(os.listdir(tmp_path))
    assert names == ["curves.csv", "raster.csv", "raster_meta.json", "view.svg"]
    raster = (tmp_path / "raster.csv").read_text()
    assert raster.startswith("i,j,R,tau,members\n")
    meta = json.loads((tmp_path / "raster_meta.json").read_text())
    assert meta["families"] == ["EPlus:1", "OPlus:2"]
    svg = (tmp_path / "view.svg").read_text()
    assert svg.startswith("<svg")


def test_region_precondition_exit_4(tmp_path, capsys):
    # Tilde families demand a failing weighted trace, which this p satisfies.
    code, _, err = invoke(
        capsys,
        ["region", "--p", P_STAR, "--families", "ETilde:1",
         "--grid", "1:5:3,-1:0:3", "--outdir", str(tmp_path)],
    )
    assert code == 4
    assert "ETilde" in err or "weighted" in err or "precondition" in err


def test_region_periodic_zero_mode_exit_2(tmp_path, capsys):
    code, _, err = invoke(
        capsys,
        ["region", "--p", P_STAR, "--families", "IPerPlus:0",
         "--grid", "1:5:3,-1:0:3", "--outdir", str(tmp_path)],
    )
    assert code == 2 and err != ""


def test_region_bad_family_name(tmp_path, capsys):
    code, _, err = invoke(
        capsys,
        ["region", "--p", P_STAR, "--families", "Nope:1",
         "--grid", "1:5:3,-1:0:3", "--outdir", str(tmp_path)],
    )
    assert code == 2 and err != ""


SIM_INLINE = ["simulate", "--radius", "2", "--tau", "0.5", "--k", "30",
              "--kinetics", KIN, "--seed", "3", "--n-grid", "128",
              "--dt", "1e-3", "--t-max", "0.05", "--stride", "10"]


def test_simulate_inline_and_config_agree(tmp_path, capsys):
    out_a = tmp_path / "a"
    out_b = tmp_path / "b"
    code, _, _ = invoke(capsys, SIM_INLINE + ["--outdir", str(out_a)])
    assert code == 0
    cfg_doc = {
        "R": 2.0, "tau": 0.5, "k": 30.0, "seed": 3,
        "kinetics": {"k1": 0.0, "k2": 0.4, "k3": 1.0, "k4": 1.0, "k5": 1.0},
        "n_grid": 128, "dt": 1e-3, "t_max": 0.05, "snapshot_stride": 10,
    }
    cfg_path = tmp_path / "cfg.json"
    cfg_path.write_text(json.dumps(cfg_doc))
    code, _, _ = invoke(
        capsys, ["simulate", "--config", str(cfg_path), "--outdir", str(out_b)]
    )
    assert code == 0
    for name in ("report.json", "snapshots.csv", "snapshots.t4sim"):
        assert (out_a / name).read_bytes() == (out_b / name).read_bytes()
    report = json.loads((out_a / "report.json").read_text())
    assert report["classification"] in ("Running", "Patterned", "Decayed", "BlownUp")


def test_simulate_repeat_is_byte_identical(tmp_path, capsys):
    out_a = tmp_path / "a"
    out_b = tmp_path / "b"
    for out in (out_a, out_b):
        code, _, _ = invoke(capsys, SIM_INLINE + ["--outdir", str(out)])
        assert code == 0
    for name in ("report.json", "snapshots.csv", "snapshots.t4sim"):
        assert (out_a / name).read_bytes() == (out_b / name).read_bytes()


def test_simulate_config_xor_inline(tmp_path, capsys):
    cfg_path = tmp_path / "cfg.json"
    cfg_path.write_text("{}")
    code, _, err = invoke(
        capsys, SIM_INLINE + ["--config", str(cfg_path), "--outdir", str(tmp_path)]
    )
    assert code == 2 and err != ""


def test_simulate_missing_inline_flag(tmp_path, capsys):
    argv = [a for a in SIM_INLINE if a not in ("--seed", "3")]
    code, _, err = invoke(capsys, argv + ["--outdir", str(tmp_path)])
    assert code == 2 and err != ""


def test_simulate_unknown_config_key(tmp_path, capsys):
    cfg_path = tmp_path / "cfg.json"
    cfg_path.write_text(json.dumps({
        "R": 2.0, "tau": 0.5, "k": 30.0, "seed": 3, "bogus": 1,
        "kinetics": {"k1": 0.0, "k2": 0.4, "k3": 1.0, "k4": 1.0, "k5": 1.0},
    }))
    code, _, err = invoke(
        capsys, ["simulate", "--config", str(cfg_path), "--outdir", str(tmp_path)]
    )
    assert code == 2 and err != ""


def test_simulate_solver_failure_exit_3_writes_report(tmp_path, capsys):
    argv = ["simulate", "--radius", "2", "--tau=-1e5", "--k", "30",
            "--kinetics", KIN, "--seed", "3", "--n-grid", "128",
            "--dt", "1e-3", "--t-max", "0.05", "--stride", "10",
            "--outdir", str(tmp_path)]
    code, _, err = invoke(capsys, argv)
    assert code == 3 and err != ""
    report = json.loads((tmp_path / "report.json").read_text())
    assert "error" in report
    assert report["config"]["tau"] == -1e5


def test_muast_success(tmp_path, capsys):
    code, out, _ = invoke(capsys, ["muast", "--tau", "-1", "--c", "1"])
    assert code == 0
    doc = json.loads(out)
    assert doc["R"] == 1.0
    assert doc["mu1"] == pytest.approx(-3.0640321748353787, rel=1e-12)
    code, out, _ = invoke(capsys, ["muast", "--tau", "-1", "--c", "10"])
    assert code == 0
    doc = json.loads(out)
    assert doc["R"] == pytest.approx(0.49, rel=1e-12)


def test_muast_zero_tension_exit_2(capsys):
    code, _, err = invoke(capsys, ["muast", "--tau", "0", "--c", "1"])
    assert code == 2 and err != ""


def test_muast_unreachable_exit_5(capsys):
    # the radius floor caps how deep the first eigenvalue can be pushed
    code, _, err = invoke(capsys, ["muast", "--tau", "-1", "--c", "1e12"])
    assert code == 5 and err != ""


def test_threads_env_validation(tmp_path, capsys, monkeypatch):
    monkeypatch.setenv("T4_THREADS", "zero")
    code, _, err = invoke(
        capsys,
        ["region", "--p", P_STAR, "--families", "EPlus:1",
         "--grid", "18:22:2,0.4:0.6:2", "--outdir", str(tmp_path)],
    )
    assert code == 2 and err != ""


def test_threads_env_accepted(tmp_path, capsys, monkeypatch):
    monkeypatch.setenv("T4_THREADS", "2")
    code, _, _ = invoke(
        capsys,
        ["region", "--p", P_STAR, "--families", "EPlus:1",
         "--grid", "18:22:2,0.4:0.6:2", "--samples", "8",
         "--outdir", str(tmp_path)],
    )
    assert code == 0
