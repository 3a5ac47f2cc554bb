import csv
import json
import math
import subprocess
import sys

import pytest

from wvlab.cli import main


def run_cli(*args):
    return main(list(args))


def read_csv(path):
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        rows = list(reader)
    return header, rows


def test_invalid_config_rejected(tmp_path):
    assert run_cli("simulate", "--out", str(tmp_path), "--driver.kind", "bogus") == 64
    assert run_cli("simulate", "--out", str(tmp_path), "--grid.x.points", "10") == 64
    assert run_cli("simulate", "--out", str(tmp_path), "--dt", "-0.5") == 64


def test_simulate_outputs(tmp_path):
    out = tmp_path / "sim"
    code = run_cli("simulate", "--out", str(out), "--n", "0,2",
                   "--t1", str(math.pi), "--dt", str(math.pi / 8))
    assert code == 0
    header, rows = read_csv(out / "sigma.csv")
    assert header[0].startswith("t[") and "omega2" in header[-1]
    assert len(rows) == 9
    for name in ("density_n0.csv", "density_n2.csv", "velocity.csv", "potential.csv"):
        assert (out / name).exists()
    manifest = json.loads((out / "manifest.json").read_text())
    assert manifest["config"]["driver"]["kind"] == "mathieu"
    assert set(manifest["files"]) >= {"sigma.csv", "velocity.csv", "potential.csv"}


def test_simulate_constant_rows_identical(tmp_path):
    out = tmp_path / "simc"
    assert run_cli("simulate", "--out", str(out), "--driver.kind", "constant",
                   "--driver.omega0", "1.0", "--n", "0",
                   "--t1", "1.0", "--dt", "0.25") == 0
    _, rows = read_csv(out / "sigma.csv")
    assert len({tuple(r[1:]) for r in rows}) == 1  # all time rows identical


def test_simulate_sin2_density_alternates(tmp_path):
    # density at the center rises and falls with the breathing period
    out = tmp_path / "sims"
    assert run_cli("simulate", "--out", str(out), "--driver.kind", "sin_squared",
                   "--driver.sigma0", "1.0", "--driver.varpi0", "1.0",
                   "--n", "0", "--t1", str(math.pi), "--dt", str(math.pi / 4)) == 0
    _, rows = read_csv(out / "sigma.csv")
    sigmas = [float(r[1]) for r in rows]
    assert sigmas[0] == pytest.approx(1.0)
    assert sigmas[2] == pytest.approx(2.0)  # maximum expansion at t = pi/2
    assert sigmas[4] == pytest.approx(1.0)  # back to compression at t = pi


def test_byte_identical_reruns(tmp_path):
    args = ("wigner", "--n", "2", "--t1", "0.8", "--dt", "0.4",
            "--grid.x.points", "31", "--grid.p.points", "31")
    out1, out2 = tmp_path / "a", tmp_path / "b"
    assert run_cli(*args, "--out", str(out1)) == 0
    assert run_cli(*args, "--out", str(out2)) == 0
    for path in sorted(out1.glob("*.csv")):
        assert path.read_bytes() == (out2 / path.name).read_bytes()


def test_wigner_outputs_and_minima(tmp_path):
    out = tmp_path / "wig"
    assert run_cli("wigner", "--out", str(out), "--n", "2", "--t1", "0.5",
                   "--dt", "0.25", "--grid.x.points", "61",
                   "--grid.p.points", "61") == 0
    manifest = json.loads((out / "manifest.json").read_text())
    # negative minimum recorded for the excited state
    assert all(v < 0 for v in manifest["wigner_min"].values())

    header, rows = read_csv(out / "ellipse_geometry.csv")
    det_col = header.index("det[1]")
    area_col = header.index("area[1]")
    for row in rows:
        assert abs(float(row[det_col]) - 1.0) <= 1e-12
        assert float(row[area_col]) == pytest.approx(math.pi, abs=1e-12)


def test_wigner_theta_matches_tilt_formula(tmp_path):
    out = tmp_path / "wigt"
    assert run_cli("wigner", "--out", str(out), "--n", "0", "--t1", "1.2",
                   "--dt", "0.3", "--grid.x.points", "31",
                   "--grid.p.points", "31") == 0
    header, rows = read_csv(out / "ellipse_geometry.csv")
    for row in rows:
        t, a11, a12 = float(row[0]), float(row[1]), float(row[2])
        theta = float(row[4])
        if abs(a12) > 1e-12:
            # tan(2 theta) = 2 a12 / (a11 - a22) with a22 = 1
            assert math.tan(2 * theta) == pytest.approx(
                2 * a12 / (a11 - 1.0), rel=1e-9)


def test_rank4_slice_output(tmp_path):
    out = tmp_path / "r4"
    assert run_cli("wigner", "--out", str(out), "--n", "0", "--t1", "0.4",
                   "--dt", "0.4", "--grid.x.points", "21",
                   "--grid.p.points", "21", "--rank4_slice.enabled", "true") == 0
    header, rows = read_csv(out / "rank4_t0.csv")
    assert header[2].startswith("W4")
    assert all(float(r[2]) > 0 for r in rows)


def test_spectrum_static_levels(tmp_path):
    out = tmp_path / "spec"
    assert run_cli("spectrum", "--out", str(out), "--driver.kind", "constant",
                   "--driver.omega0", "1.0", "--n", "0,1,2",
                   "--t1", "1.0", "--dt", "0.5") == 0
    header, rows = read_csv(out / "spectrum.csv")
    for row in rows:
        n = int(row[1])
        assert float(row[2]) == pytest.approx(n + 0.5, abs=1e-7)
        assert float(row[3]) == pytest.approx(n + 0.5, abs=1e-6)
        assert float(row[4]) <= 1e-5


def test_spectrum_mathieu_marks_and_archive(tmp_path):
    out = tmp_path / "specm"
    assert run_cli("spectrum", "--out", str(out), "--n", "0",
                   "--t1", str(2 * math.pi), "--dt", str(math.pi / 2)) == 0
    header, rows = read_csv(out / "spectrum.csv")
    marks = [int(r[5]) for r in rows]
    assert marks == [1, 0, 1, 0, 1]
    # equidistant levels: rel_diff column archived for every sample
    assert all(float(r[4]) >= 0 for r in rows)
    quad = [float(r[2]) for r in rows if int(r[5]) == 1]
    assert quad[0] < quad[1] < quad[2]  # pumping at the period marks


def test_stability_raster_boundaries(tmp_path):
    out = tmp_path / "stab"
    assert run_cli("stability", "--out", str(out),
                   "--stability.a_min", "0.25", "--stability.a_max", "4.75",
                   "--stability.a_points", "19", "--stability.g_min", "0.0",
                   "--stability.g_max", "0.2", "--stability.g_points", "2") == 0
    header, rows = read_csv(out / "incestrutt.csv")
    g0 = [(float(r[0]), float(r[2]), r[3]) for r in rows if float(r[1]) == 0.0]
    for a, trace, label in g0:
        assert trace == pytest.approx(2 * math.cos(math.pi * math.sqrt(a)), abs=1e-6)
        expected = "stable" if abs(trace) < 2 - 1e-6 else (
            "unstable" if abs(trace) > 2 + 1e-6 else "marginal")
        assert label == expected
    raster = {(float(r[0]), float(r[1])): r[3] for r in rows}
    assert raster[(1.0, 0.2)] == "unstable"
    assert raster[(2.0, 0.2)] == "stable"


def test_verify_static_passes(tmp_path):
    out = tmp_path / "ver"
    code = run_cli("verify", "--out", str(out), "--driver.kind", "constant",
                   "--driver.omega0", "1.0", "--verify.times", "[0.5]",
                   "--verify.n_list", "[0,2]")
    assert code == 0
    report = json.loads((out / "verify.json").read_text())
    assert report["pass"] and all(c["pass"] for c in report["checks"])
    assert all(c["tolerance"] <= 1e-6 for c in report["checks"])


def test_verify_mathieu_passes_with_ratios(tmp_path):
    out = tmp_path / "verm"
    code = run_cli("verify", "--out", str(out), "--verify.times", "[0.7]",
                   "--verify.n_list", "[0]")
    assert code == 0
    report = json.loads((out / "verify.json").read_text())
    residual_checks = [c for c in report["checks"]
                       if c["convergence_ratio"] is not None]
    assert residual_checks
    for c in residual_checks:
        assert 2.5 < c["convergence_ratio"] < 6.0


def test_verify_negative_control_fails(tmp_path):
    out = tmp_path / "vern"
    code = run_cli("verify", "--out", str(out), "--verify.times", "[1.0]",
                   "--verify.n_list", "[0]", "--verify.corrupt_omega2_a", "1.5")
    assert code == 1
    report = json.loads((out / "verify.json").read_text())
    failed = [c["check"] for c in report["checks"] if not c["pass"]]
    assert failed and all(name.startswith("moyal") for name in failed)


def test_singularity_exit_code(tmp_path):
    out = tmp_path / "sing"
    code = run_cli("simulate", "--out", str(out), "--params.hbar", "1e-12",
                   "--params.hbar2", "1e-12", "--driver.a", "1.0",
                   "--driver.g", "0.0", "--driver.sigma0", "1.0",
                   "--n", "0", "--t1", "4.0", "--dt", "0.5")
    assert code == 2


def test_config_file_and_dotted_override(tmp_path):
    cfg = tmp_path / "scenario.json"
    cfg.write_text(json.dumps({"driver": {"kind": "sin_squared", "sigma0": 1.0,
                                          "varpi0": 1.0},
                               "states": [0]}))
    out = tmp_path / "cfg"
    assert run_cli("simulate", "--config", str(cfg), "--out", str(out),
                   "--t1", "0.5", "--dt", "0.25",
                   "--driver.varpi0", "2.0") == 0
    manifest = json.loads((out / "manifest.json").read_text())
    assert manifest["config"]["driver"]["varpi0"] == 2.0
    assert manifest["config"]["driver"]["kind"] == "sin_squared"


def test_console_entry_point(tmp_path):
    result = subprocess.run(
        [sys.executable, "-m", "wvlab.cli", "simulate", "--out",
         str(tmp_path / "ep"), "--driver.kind", "constant",
         "--driver.omega0", "1.0", "--n", "0", "--t1", "0.5", "--dt", "0.25"],
        capture_output=True, text=True)
    assert result.returncode == 0


def test_worker_pool_env(tmp_path, monkeypatch):
    monkeypatch.setenv("WVL_THREADS", "1")
    out1 = tmp_path / "t1"
    assert run_cli("wigner", "--out", str(out1), "--n", "1", "--t1", "0.4",
                   "--dt", "0.2", "--grid.x.points", "21",
                   "--grid.p.points", "21") == 0
    monkeypatch.setenv("WVL_THREADS", "3")
    out3 = tmp_path / "t3"
    assert run_cli("wigner", "--out", str(out3), "--n", "1", "--t1", "0.4",
                   "--dt", "0.2", "--grid.x.points", "21",
                   "--grid.p.points", "21") == 0
    for path in sorted(out1.glob("*.csv")):
        assert path.read_bytes() == (out3 / path.name).read_bytes()


def test_empty_states_rejected(tmp_path):
    assert run_cli("simulate", "--out", str(tmp_path), "--n", "") == 64


def test_simulate_mathieu_envelope_grows(tmp_path):
    out = tmp_path / "env"
    assert run_cli("simulate", "--out", str(out), "--n", "0",
                   "--t1", str(4 * math.pi), "--dt", str(math.pi / 8)) == 0
    _, rows = read_csv(out / "sigma.csv")
    sigma0 = float(rows[0][1])
    peaks = []
    for k in range(4):
        window = [abs(float(r[1]) - sigma0) for r in rows
                  if k * math.pi <= float(r[0]) < (k + 1) * math.pi]
        peaks.append(max(window))
    assert all(b > a for a, b in zip(peaks, peaks[1:]))
