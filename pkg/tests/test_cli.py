"""Command line round trips.

Heavy solves behind these commands are shared with the acceptance suite
through the in-process caches, so most runs here only exercise parsing,
formatting, and the config-header contract.
"""

import json
import subprocess
import sys

import numpy as np
import pytest

from magstep import mu, theta0
from magstep.cli import RunConfig, main, parse_config_header, parse_grid
from magstep.errors import ParameterRange

PI = np.pi
HALF_PI = repr(PI / 2)


def _lines(path):
    return path.read_text(encoding="utf-8").splitlines()


def test_parse_grid_forms():
    assert np.allclose(parse_grid("0.5:1.5:3"), [0.5, 1.0, 1.5])
    assert parse_grid("2.0") == pytest.approx([2.0])
    assert parse_grid("-1:-0.9:2") == pytest.approx([-1.0, -0.9])
    for bad in ("1:2", "a:b:3", "1:2:0", "2:1:3", "1:2:x"):
        with pytest.raises(ParameterRange):
            parse_grid(bad)


def test_degennes_header_round_trip(tmp_path):
    f1 = tmp_path / "dg1.csv"
    f2 = tmp_path / "dg2.csv"
    assert main(["degennes", "-o", str(f1)]) == 0
    assert main(["degennes", "-o", str(f2)]) == 0
    assert f1.read_bytes() == f2.read_bytes()

    lines = _lines(f1)
    cfg = parse_config_header(lines[0])
    assert cfg == RunConfig("degennes", {"spacing": None, "tol": 1e-9,
                                         "max_iter": 5000, "seed": 0,
                                         "extrapolate": False})
    assert lines[1] == "theta0,xi0"
    val = float(lines[2].split(",")[0])
    assert val == pytest.approx(theta0()[0], abs=1e-11)
    with pytest.raises(ParameterRange):
        parse_config_header("theta0,xi0")


def test_zeta_to_stdout(capsys):
    assert main(["zeta", "--nu", "0"]) == 0
    out = capsys.readouterr().out.splitlines()
    assert out[1] == "nu,zeta"
    assert float(out[2].split(",")[1]) == pytest.approx(theta0()[0], abs=1e-11)


def test_mu_and_beta_tables(tmp_path):
    fmu = tmp_path / "mu.csv"
    assert main(["mu", "--a", "-0.5", "--xi", "0:1:3", "-o", str(fmu)]) == 0
    rows = [ln.split(",") for ln in _lines(fmu)[2:]]
    assert len(rows) == 3 and rows[1][0] == "0.5"

    fb = tmp_path / "beta.csv"
    assert main(["beta", "--a", "0.5", "-o", str(fb)]) == 0
    lines = _lines(fb)
    assert lines[1] == "a,beta,xi_star"
    # positive ratio: infimum unattained, minimizer column stays empty
    assert lines[2].endswith(",") and float(lines[2].split(",")[1]) < 0.51


def test_essential_gamma_clamp(tmp_path):
    f = tmp_path / "ess.csv"
    assert main(["essential", "--alpha", "2.0", "--gamma", "1.5708",
                 "--a", "-0.5", "--tau", "0.3", "-o", str(f)]) == 0
    val = float(_lines(f)[2].split(",")[1])
    assert val == pytest.approx(mu(-0.5, 0.3), abs=1e-11)


def test_band_and_lambda_on_tangent_interface(tmp_path):
    fband = tmp_path / "band.csv"
    assert main(["band", "--alpha", HALF_PI, "--gamma", "0", "--a", "-1",
                 "--tau=-2:2:5", "-o", str(fband)]) == 0
    lines = _lines(fband)
    assert lines[1].startswith("# lambda=")
    assert "verdict=EigenvalueCertified" in lines[1]
    assert lines[2] == "tau,sigma,sigma_ess,margin"
    rows = [ln.split(",") for ln in lines[3:]]
    assert len(rows) == 5 and rows[0][0] == "-2"
    # quadratic fiber shift: sigma(2) - sigma(0) = 4 exactly
    assert float(rows[4][1]) - float(rows[2][1]) == pytest.approx(4.0, abs=1e-9)

    flam = tmp_path / "lam.csv"
    assert main(["lambda", "--alpha", HALF_PI, "--gamma", "0", "--a", "-1",
                 "-o", str(flam)]) == 0
    lines = _lines(flam)
    assert lines[1] == "lambda,tau_star,margin,verdict,threshold,beta_a,zeta_nu0"
    fields = lines[2].split(",")
    assert fields[3] == "EigenvalueCertified"
    assert float(fields[0]) < float(fields[4])

    # a two-point tau grid cannot bracket a minimum: library error, exit 1
    assert main(["band", "--alpha", HALF_PI, "--gamma", "0", "--a", "-1",
                 "--tau", "0:1:2", "-o", str(tmp_path / "nope.csv")]) == 1


def test_region_table(tmp_path):
    f = tmp_path / "region.csv"
    assert main(["region", "--alpha", "1.5:1.65:2", "--gamma", "0:0.1:2",
                 "--a=-1:-0.9:2", "-o", str(f)]) == 0
    lines = _lines(f)
    assert lines[1] == "alpha,gamma,a,A,Lambda,P_min,admissible"
    assert len(lines) == 2 + 8
    assert all(ln.split(",")[6] in ("true", "false") for ln in lines[2:])


def test_trial_check(tmp_path):
    f = tmp_path / "trial.csv"
    assert main(["trial-check", "--alpha", "1.3", "--gamma", "0.4",
                 "--a", "-0.8", "--omega", "0.7", "--level", "0.5",
                 "--n-theta", "301", "-o", str(f)]) == 0
    lines = _lines(f)
    assert lines[1] == "J_closed,J_quadrature,P_quadratic,quad_rel_gap"
    j_closed, j_quad, p_val, gap = map(float, lines[2].split(","))
    assert gap < 1e-7
    assert j_closed == pytest.approx(p_val, abs=5e-12)


def test_agmon_shells(tmp_path):
    f = tmp_path / "agmon.csv"
    assert main(["agmon", "--alpha", HALF_PI, "--gamma", "0", "--a", "-1",
                 "--tau", "0", "-o", str(f)]) == 0
    lines = _lines(f)
    assert lines[1].startswith("# sigma=") and "eta_bound=" in lines[1]
    assert lines[2] == "radius,mass"
    assert float(lines[3].split(",")[0]) == 1.0


def test_edge_profile_json(tmp_path):
    f = tmp_path / "edge.json"
    assert main(["edge-profile", "--a", "-1", "--ball-cut", "8",
                 "-o", str(f)]) == 0
    data = json.loads(f.read_text(encoding="utf-8"))
    assert data["config"]["command"] == "edge-profile"
    rep = data["report"]
    assert rep["assumption_holds"] is True
    assert len(rep["points"]) == 8

    assert main(["edge-profile", "--a", "-1"]) == 1  # neither source given


def test_error_exit_codes(capsys):
    assert main(["beta", "--a", "0"]) == 1
    assert "magstep:" in capsys.readouterr().err
    with pytest.raises(SystemExit) as exc:
        main(["mu"])  # missing required --a and --xi
    assert exc.value.code == 2


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "magstep", "degennes"],
                          capture_output=True, text=True, timeout=120)
    assert proc.returncode == 0
    assert "theta0,xi0" in proc.stdout
